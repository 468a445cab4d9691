#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexsim {

// Every tunable constant of the model. Defaults are the published settings;
// field comments give the identifier used in parameter files.
struct Parameters {
  // Activation range and decay.
  double min_act = -0.2;     // MIN_ACT
  double max_act = 1.0;      // MAX_ACT
  double decay_rate = 0.07;  // DECAY_RATE

  // Resting levels.
  double min_rest = -0.2;  // MIN_REST
  double max_rest = 0.0;   // MAX_REST
  // MAX_OPB. Unset means "take the maximum over the loaded lexicon".
  std::optional<double> max_opb;
  double input_rest = 1.0;  // I_rest
  double lang_rest = -0.2;  // L_rest
  double sem_rest = -0.2;   // S_rest

  double io_multiplier = 0.2;  // IO_multiplier
  double ss_multiplier = 0.0;  // SS_multiplier

  // Task/decision thresholds.
  double criterion = 0.72;                  // criterion_value
  double shortlist_input_threshold = 0.7;   // shortlist_input_threshold
  double shortlist_output_threshold = 0.5;  // shortlist_output_threshold

  // Cycles -> milliseconds.
  double timestep_multiplier = 1.0;  // timestep_multiplier
  double timestep_adder = 0.0;       // timestep_adder

  // Excitatory weights, named <from><to>_alpha.
  double op_alpha = 0.03;
  double os_alpha = 0.03;
  double po_alpha = 0.03;
  double ps_alpha = 0.3;
  double so_alpha = 0.03;
  double sp_alpha = 0.3;
  double lo_alpha = 0.0;
  double lp_alpha = 0.0;
  double ol_alpha = 0.0;
  double pl_alpha = 0.0;

  // Inhibitory weights.
  double oo_gamma = -0.001;
  double pp_gamma = -0.001;
  double ss_gamma = -0.5;
  double ll_gamma = 0.0;
  double lo_gamma = 0.0;
  double lp_gamma = 0.0;
  double ol_gamma = 0.0;
  double pl_gamma = 0.0;

  int max_cycles = 40;

  // Throws ConfigError when an invariant does not hold.
  void validate() const;

  // Predicted reaction time for a decision taken after `cycles` cycles.
  double predicted_rt(int cycles) const {
    return cycles * timestep_multiplier + timestep_adder;
  }

  // Assigns a parameter by its file identifier. Throws ConfigError for an
  // unknown name (the message lists every valid name) or a bad value.
  void set(std::string_view name, std::string_view value);

  // Value of a numeric parameter by identifier; nullopt for unset MAX_OPB.
  std::optional<double> get(std::string_view name) const;

  // Valid identifiers, in canonical order.
  static const std::vector<std::string>& names();

  // Reads `NAME = VALUE` lines on top of the current values. `#` starts a
  // comment. The derived entries O_rest, P_rest and IO_alpha are accepted and
  // ignored so the published table can be used verbatim.
  void load(std::istream& in);
  void load_file(const std::string& path);

  // One `NAME = VALUE` line per parameter, shortest round-trip formatting.
  void write(std::ostream& out) const;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// Parses a full string as a double, rejecting trailing garbage.
std::optional<double> parse_double(std::string_view text);

}  // namespace lexsim
