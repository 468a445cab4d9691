#include "lexsim/parameters.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lexsim/error.hpp"

namespace lexsim {

namespace {

struct Field {
  const char* name;
  double Parameters::*member;
};

constexpr std::array kFields{
    Field{"MIN_ACT", &Parameters::min_act},
    Field{"MAX_ACT", &Parameters::max_act},
    Field{"DECAY_RATE", &Parameters::decay_rate},
    Field{"MIN_REST", &Parameters::min_rest},
    Field{"MAX_REST", &Parameters::max_rest},
    Field{"I_rest", &Parameters::input_rest},
    Field{"L_rest", &Parameters::lang_rest},
    Field{"S_rest", &Parameters::sem_rest},
    Field{"IO_multiplier", &Parameters::io_multiplier},
    Field{"SS_multiplier", &Parameters::ss_multiplier},
    Field{"criterion_value", &Parameters::criterion},
    Field{"shortlist_input_threshold", &Parameters::shortlist_input_threshold},
    Field{"shortlist_output_threshold", &Parameters::shortlist_output_threshold},
    Field{"timestep_multiplier", &Parameters::timestep_multiplier},
    Field{"timestep_adder", &Parameters::timestep_adder},
    Field{"OP_alpha", &Parameters::op_alpha},
    Field{"OS_alpha", &Parameters::os_alpha},
    Field{"PO_alpha", &Parameters::po_alpha},
    Field{"PS_alpha", &Parameters::ps_alpha},
    Field{"SO_alpha", &Parameters::so_alpha},
    Field{"SP_alpha", &Parameters::sp_alpha},
    Field{"LO_alpha", &Parameters::lo_alpha},
    Field{"LP_alpha", &Parameters::lp_alpha},
    Field{"OL_alpha", &Parameters::ol_alpha},
    Field{"PL_alpha", &Parameters::pl_alpha},
    Field{"OO_gamma", &Parameters::oo_gamma},
    Field{"PP_gamma", &Parameters::pp_gamma},
    Field{"SS_gamma", &Parameters::ss_gamma},
    Field{"LL_gamma", &Parameters::ll_gamma},
    Field{"LO_gamma", &Parameters::lo_gamma},
    Field{"LP_gamma", &Parameters::lp_gamma},
    Field{"OL_gamma", &Parameters::ol_gamma},
    Field{"PL_gamma", &Parameters::pl_gamma},
};

constexpr std::string_view kMaxOpb = "MAX_OPB";
constexpr std::string_view kMaxCycles = "max_cycles";

// Formula rows of the published table; their values are derived, not set.
constexpr std::array<std::string_view, 3> kDerived{"O_rest", "P_rest", "IO_alpha"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string unknown_name_message(std::string_view name) {
  std::string msg = "unknown parameter '" + std::string(name) + "'; valid names:";
  for (const auto& n : Parameters::names()) msg += " " + n;
  return msg;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw InvariantViolation("format_double overflow");
  return std::string(buf.data(), end);
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) return std::nullopt;
  return value;
}

const std::vector<std::string>& Parameters::names() {
  static const std::vector<std::string> all = [] {
    std::vector<std::string> v;
    for (const auto& f : kFields) {
      v.emplace_back(f.name);
      if (std::string_view(f.name) == "MAX_REST") v.emplace_back(kMaxOpb);
    }
    v.emplace_back(kMaxCycles);
    return v;
  }();
  return all;
}

void Parameters::set(std::string_view name, std::string_view value) {
  name = trim(name);
  if (name == kMaxCycles) {
    const auto v = parse_double(value);
    if (!v || *v != std::floor(*v) || *v < 1 || *v > 1e6) {
      throw ConfigError("max_cycles must be a positive integer, got '" + std::string(value) + "'");
    }
    max_cycles = static_cast<int>(*v);
    return;
  }
  const auto v = parse_double(value);
  if (name == kMaxOpb) {
    if (!v || !std::isfinite(*v)) {
      throw ConfigError("MAX_OPB: not a number: '" + std::string(value) + "'");
    }
    max_opb = *v;
    return;
  }
  for (const auto& f : kFields) {
    if (name == f.name) {
      if (!v || !std::isfinite(*v)) {
        throw ConfigError(std::string(f.name) + ": not a number: '" + std::string(value) + "'");
      }
      this->*(f.member) = *v;
      return;
    }
  }
  throw ConfigError(unknown_name_message(name));
}

std::optional<double> Parameters::get(std::string_view name) const {
  if (name == kMaxCycles) return static_cast<double>(max_cycles);
  if (name == kMaxOpb) return max_opb;
  for (const auto& f : kFields) {
    if (name == f.name) return this->*(f.member);
  }
  throw ConfigError(unknown_name_message(name));
}

void Parameters::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("invalid parameters: " + m); };
  if (!(min_act < max_act)) fail("MIN_ACT must be below MAX_ACT");
  if (!(min_rest <= max_rest)) fail("MIN_REST must not exceed MAX_REST");
  if (min_rest < min_act || max_rest > max_act) fail("rest range must lie within [MIN_ACT, MAX_ACT]");
  for (double rest : {lang_rest, sem_rest}) {
    if (rest < min_act || rest > max_rest) fail("L_rest/S_rest must lie within [MIN_ACT, MAX_REST]");
  }
  if (decay_rate < 0.0 || decay_rate > 1.0) fail("DECAY_RATE must lie in [0, 1]");
  if (io_multiplier < 0.0) fail("IO_multiplier must be >= 0");
  for (double g : {oo_gamma, pp_gamma, ss_gamma, ll_gamma, lo_gamma, lp_gamma, ol_gamma, pl_gamma}) {
    if (g > 0.0) fail("gamma parameters must be <= 0");
  }
  if (max_opb && !(*max_opb > 0.0)) fail("MAX_OPB must be > 0");
  if (max_cycles < 1) fail("max_cycles must be >= 1");
}

void Parameters::load(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("parameter file line " + std::to_string(line_no) + ": expected NAME = VALUE");
    }
    const auto name = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));
    bool derived = false;
    for (auto d : kDerived) derived = derived || name == d;
    if (derived) continue;
    try {
      set(name, value);
    } catch (const ConfigError& e) {
      throw ConfigError("parameter file line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void Parameters::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open parameter file '" + path + "'");
  load(in);
}

void Parameters::write(std::ostream& out) const {
  for (const auto& name : names()) {
    const auto v = get(name);
    if (!v) continue;
    if (name == kMaxCycles) {
      out << name << " = " << max_cycles << '\n';
    } else {
      out << name << " = " << format_double(*v) << '\n';
    }
  }
}

}  // namespace lexsim
