#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lexsim/dynamics.hpp"
#include "lexsim/fitting.hpp"
#include "lexsim/lexicon.hpp"
#include "lexsim/network.hpp"
#include "lexsim/reference.hpp"
#include "lexsim/tasks.hpp"

namespace lexsim {

struct StimulusRecord {
  std::string stimulus;
  std::string source_lang;
  std::string target_lang;  // may be empty for LD and NAME
  Task task = Task::lexical_decision;
  std::string condition;
  std::optional<double> rt_ms;
};

// CSV with header stimulus,source_lang,target_lang,task,condition,rt_ms.
// Trailing optional columns may be empty or missing.
std::vector<StimulusRecord> parse_stimuli(std::istream& in);
std::vector<StimulusRecord> load_stimuli(const std::string& path);

enum class Engine { final, dense };

Engine parse_engine(std::string_view name);
std::string_view engine_name(Engine engine);

struct BatchOptions {
  Engine engine = Engine::final;
  EngineOptions engine_options;
  bool semantic_check = true;
  bool record_history = false;
  bool stop_on_decision = true;
  bool verify_each_cycle = false;
  std::size_t jobs = 1;
  std::size_t dense_limit = kDefaultDenseLimit;
};

struct TrialResult {
  RunResult run;      // history only when recorded
  std::string error;  // non-empty when the row failed

  bool ok() const noexcept { return error.empty(); }
  const TaskOutcome& outcome() const noexcept { return run.outcome; }
};

// Builds the monitor a record asks for. Throws ConfigError on bad languages.
std::unique_ptr<TaskMonitor> make_monitor(const Network& network, const StimulusRecord& record, bool semantic_check);

// One result per record in input order. Rows that fail keep their error and
// the batch continues.
std::vector<TrialResult> run_batch(const Network& network, const std::vector<StimulusRecord>& stimuli,
                                   const Parameters& params, const BatchOptions& options = {});

// Outcome CSV: stimulus,task,source_lang,target_lang,response_kind,
// response_symbol,cycles,rt_pred,n_rejected, then condition and failure.
void write_outcomes_csv(std::ostream& out, const std::vector<StimulusRecord>& stimuli,
                        const std::vector<TrialResult>& results);

struct GammaStats {
  double gamma = 0.0;
  std::array<double, kPoolCount> mean_by_pool{};  // at the final cycle
  double mean_overall = 0.0;
  std::vector<double> mean_per_cycle;  // overall mean after each cycle
};

// For each gamma (applied to both ORTHO and PHONO pools) runs every stimulus
// for max_cycles without early stopping.
std::vector<GammaStats> active_node_stats(const Network& network, const std::vector<StimulusRecord>& stimuli,
                                          const std::vector<double>& gammas, const Parameters& params,
                                          const BatchOptions& options = {});

// CSV: gamma,pool,mean_active then a per-cycle block gamma,cycle,mean_active.
void write_stats_csv(std::ostream& out, const std::vector<GammaStats>& stats);
void write_stats_curve_csv(std::ostream& out, const std::vector<GammaStats>& stats);

struct ConditionRow {
  std::string condition;
  std::size_t n = 0;          // responded trials
  std::size_t n_timeout = 0;  // trials without a response
  std::optional<double> mean_rt;
  std::optional<double> mean_cycles;
  std::optional<double> r;
};

struct ConditionReport {
  std::vector<ConditionRow> conditions;  // sorted by label
  ConditionRow overall_by_item;
  ConditionRow overall_by_condition;
};

ConditionReport condition_report(const std::vector<StimulusRecord>& stimuli,
                                 const std::vector<TrialResult>& results);
void write_condition_report_csv(std::ostream& out, const ConditionReport& report);

struct FitOptions {
  SearchConfig search;
  bool tied = true;             // OO_gamma = PP_gamma
  double fixed_pp_gamma = 0.0;  // PP_gamma when untied
  BatchOptions batch;
};

// Fitness of one gamma: Pearson r between predicted and empirical RTs over
// responded trials; worst fitness when undefined.
double inhibition_fitness(const Network& network, const std::vector<StimulusRecord>& stimuli, double gamma,
                          const Parameters& params, const FitOptions& options);

FitResult fit_inhibition(const Network& network, const std::vector<StimulusRecord>& stimuli,
                         const Parameters& params, const FitOptions& options);

struct BenchRow {
  Engine engine = Engine::final;
  std::size_t stimuli = 0;
  int repeats = 0;
  double build_ms_mean = 0.0;
  double batch_ms_mean = 0.0;
  double batch_ms_min = 0.0;
  double batch_ms_max = 0.0;
  double null_ms_mean = 0.0;
  double per_stimulus_ms = 0.0;
  WorkCounters work;  // of one batch
};

// Wall-clock harness; machine-dependent.
BenchRow benchmark(const Lexicon& lexicon, const std::vector<StimulusRecord>& stimuli, Engine engine,
                   const Parameters& params, int repeats, const BatchOptions& options = {});
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

void write_prune_csv(std::ostream& out, const std::vector<PruneCount>& counts);

}  // namespace lexsim
