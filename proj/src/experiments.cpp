#include "lexsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include "lexsim/error.hpp"

namespace lexsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

constexpr std::array<std::string_view, 6> kStimulusColumns{"stimulus", "source_lang", "target_lang",
                                                           "task",     "condition",   "rt_ms"};

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
// thrown is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

int language_of(const Network& network, const std::string& tag) {
  const auto index = network.language_index(tag);
  if (!index) throw ConfigError("unknown language tag '" + tag + "'");
  return *index;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

std::optional<double> safe_pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  try {
    return pearson(xs, ys);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<StimulusRecord> parse_stimuli(std::istream& in) {
  std::vector<StimulusRecord> out;
  std::string line;
  std::size_t row = 0;
  std::vector<int> column_of;  // file column -> known column index, or -1
  while (std::getline(in, line)) {
    ++row;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto cells = split(view);
    if (column_of.empty()) {
      bool has_stimulus = false;
      bool has_task = false;
      for (const auto& cell : cells) {
        const auto it = std::find(kStimulusColumns.begin(), kStimulusColumns.end(), cell);
        if (it == kStimulusColumns.end()) throw ParseError(row, "unknown stimulus column '" + cell + "'");
        column_of.push_back(static_cast<int>(it - kStimulusColumns.begin()));
        has_stimulus = has_stimulus || cell == "stimulus";
        has_task = has_task || cell == "task";
      }
      if (!has_stimulus || !has_task) throw ParseError(row, "stimulus header needs 'stimulus' and 'task' columns");
      continue;
    }
    if (cells.size() > column_of.size()) throw ParseError(row, "too many columns");
    StimulusRecord rec;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& cell = cells[c];
      switch (column_of[c]) {
        case 0:
          rec.stimulus = to_upper(cell);
          break;
        case 1:
          rec.source_lang = cell;
          break;
        case 2:
          rec.target_lang = cell;
          break;
        case 3:
          try {
            rec.task = parse_task(cell);
          } catch (const ConfigError& e) {
            throw ParseError(row, e.what());
          }
          break;
        case 4:
          rec.condition = cell;
          break;
        case 5:
          if (!cell.empty()) {
            const auto v = parse_double(cell);
            if (!v || !(*v > 0.0) || !std::isfinite(*v)) throw ParseError(row, "rt_ms must be a positive number");
            rec.rt_ms = *v;
          }
          break;
        default:
          break;
      }
    }
    if (rec.stimulus.empty()) throw ParseError(row, "empty stimulus");
    if (rec.task == Task::word_translation && (rec.source_lang.empty() || rec.target_lang.empty())) {
      throw ParseError(row, "WT rows need source_lang and target_lang");
    }
    if (rec.task != Task::word_translation && rec.source_lang.empty() && rec.target_lang.empty()) {
      throw ParseError(row, "row needs a language");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<StimulusRecord> load_stimuli(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stimulus file '" + path + "'");
  return parse_stimuli(in);
}

Engine parse_engine(std::string_view name) {
  if (name == "final") return Engine::final;
  if (name == "dense") return Engine::dense;
  throw ConfigError("unknown engine '" + std::string(name) + "' (expected final or dense)");
}

std::string_view engine_name(Engine engine) { return engine == Engine::final ? "final" : "dense"; }

std::unique_ptr<TaskMonitor> make_monitor(const Network& network, const StimulusRecord& record, bool semantic_check) {
  const std::string& monitored = record.target_lang.empty() ? record.source_lang : record.target_lang;
  switch (record.task) {
    case Task::lexical_decision:
      return std::make_unique<LexicalDecision>(language_of(network, monitored));
    case Task::naming:
      return std::make_unique<Naming>(language_of(network, monitored));
    case Task::word_translation:
      return std::make_unique<WordTranslation>(language_of(network, record.source_lang),
                                               language_of(network, record.target_lang), semantic_check);
  }
  throw InvariantViolation("unhandled task");
}

namespace {

std::vector<TrialResult> run_rows(const Network& network, const std::vector<StimulusRecord>& stimuli,
                                  const Parameters& params, const BatchOptions& options, bool null_monitor) {
  std::vector<TrialResult> results(stimuli.size());
  std::unique_ptr<DenseNetwork> dense;
  if (options.engine == Engine::dense) {
    dense = std::make_unique<DenseNetwork>(network, params, options.engine_options, options.dense_limit);
  }
  RunOptions run_options;
  run_options.engine = options.engine_options;
  run_options.record_history = options.record_history;
  run_options.stop_on_decision = options.stop_on_decision;
  run_options.verify_each_cycle = options.verify_each_cycle;

  parallel_for(stimuli.size(), options.jobs, [&](std::size_t i) {
    auto& result = results[i];
    try {
      std::unique_ptr<TaskMonitor> monitor = null_monitor ? std::make_unique<NullMonitor>()
                                                          : make_monitor(network, stimuli[i], options.semantic_check);
      result.run = dense ? dense_run(*dense, stimuli[i].stimulus, *monitor, params, run_options)
                         : run(network, stimuli[i].stimulus, *monitor, params, run_options);
    } catch (const Error& e) {
      result.error = e.what();
    }
  });
  return results;
}

}  // namespace

std::vector<TrialResult> run_batch(const Network& network, const std::vector<StimulusRecord>& stimuli,
                                   const Parameters& params, const BatchOptions& options) {
  return run_rows(network, stimuli, params, options, false);
}

void write_outcomes_csv(std::ostream& out, const std::vector<StimulusRecord>& stimuli,
                        const std::vector<TrialResult>& results) {
  out << "stimulus,task,source_lang,target_lang,response_kind,response_symbol,cycles,rt_pred,n_rejected,condition,"
         "failure\n";
  for (std::size_t i = 0; i < stimuli.size(); ++i) {
    const auto& rec = stimuli[i];
    const auto& res = results.at(i);
    out << rec.stimulus << ',' << task_name(rec.task) << ',' << rec.source_lang << ',' << rec.target_lang << ',';
    if (!res.ok()) {
      std::string message = res.error;
      std::replace(message.begin(), message.end(), ',', ';');
      out << "error,,,,," << rec.condition << ',' << message << '\n';
      continue;
    }
    const auto& o = res.outcome();
    out << response_kind_name(o.kind) << ',' << o.symbol << ',' << o.cycle << ','
        << (o.responded() ? format_double(o.rt_pred) : std::string()) << ',' << o.rejected.size() << ','
        << rec.condition << ',' << o.failure << '\n';
  }
}

std::vector<GammaStats> active_node_stats(const Network& network, const std::vector<StimulusRecord>& stimuli,
                                          const std::vector<double>& gammas, const Parameters& params,
                                          const BatchOptions& options) {
  std::vector<GammaStats> out;
  BatchOptions batch = options;
  batch.stop_on_decision = false;
  batch.record_history = false;
  for (double gamma : gammas) {
    if (gamma > 0.0) throw DomainError("gamma values must be <= 0");
    Parameters p = params;
    p.oo_gamma = gamma;
    p.pp_gamma = gamma;
    const auto results = run_rows(network, stimuli, p, batch, true);
    GammaStats stats;
    stats.gamma = gamma;
    stats.mean_per_cycle.assign(static_cast<std::size_t>(p.max_cycles), 0.0);
    std::size_t used = 0;
    for (const auto& r : results) {
      if (!r.ok()) continue;
      ++used;
      const auto& last = r.run.active_counts.back();
      for (std::size_t k = 0; k < kPoolCount; ++k) stats.mean_by_pool[k] += static_cast<double>(last[k]);
      for (std::size_t c = 0; c < r.run.active_counts.size(); ++c) {
        std::size_t total = 0;
        for (auto v : r.run.active_counts[c]) total += v;
        stats.mean_per_cycle[c] += static_cast<double>(total);
      }
    }
    if (used > 0) {
      const double n = static_cast<double>(used);
      for (auto& v : stats.mean_by_pool) v /= n;
      for (auto& v : stats.mean_per_cycle) v /= n;
    }
    for (double v : stats.mean_by_pool) stats.mean_overall += v;
    out.push_back(std::move(stats));
  }
  return out;
}

void write_stats_csv(std::ostream& out, const std::vector<GammaStats>& stats) {
  out << "gamma,pool,mean_active\n";
  for (const auto& s : stats) {
    for (Pool pool : {Pool::ortho, Pool::phono, Pool::sem, Pool::lang}) {
      out << format_double(s.gamma) << ',' << pool_name(pool) << ','
          << format_double(s.mean_by_pool[static_cast<std::size_t>(pool)]) << '\n';
    }
    out << format_double(s.gamma) << ",ALL," << format_double(s.mean_overall) << '\n';
  }
}

void write_stats_curve_csv(std::ostream& out, const std::vector<GammaStats>& stats) {
  out << "gamma,cycle,mean_active\n";
  for (const auto& s : stats) {
    for (std::size_t c = 0; c < s.mean_per_cycle.size(); ++c) {
      out << format_double(s.gamma) << ',' << c + 1 << ',' << format_double(s.mean_per_cycle[c]) << '\n';
    }
  }
}

ConditionReport condition_report(const std::vector<StimulusRecord>& stimuli,
                                 const std::vector<TrialResult>& results) {
  if (stimuli.size() != results.size()) throw DomainError("condition_report: outcomes not aligned with stimuli");
  struct Cell {
    std::vector<double> cycles;
    std::vector<double> rt;       // responded trials with an RT
    std::vector<double> rt_pred;  // aligned with rt
    std::size_t timeouts = 0;
  };
  auto summarize = [](const std::string& label, const Cell& cell) {
    ConditionRow row;
    row.condition = label;
    row.n = cell.cycles.size();
    row.n_timeout = cell.timeouts;
    if (!cell.cycles.empty()) row.mean_cycles = mean(cell.cycles);
    if (!cell.rt.empty()) row.mean_rt = mean(cell.rt);
    row.r = safe_pearson(cell.rt_pred, cell.rt);
    return row;
  };

  std::map<std::string, Cell> cells;
  Cell all;
  for (std::size_t i = 0; i < stimuli.size(); ++i) {
    if (!results[i].ok()) continue;
    const auto& o = results[i].outcome();
    for (Cell* cell : {&cells[stimuli[i].condition], &all}) {
      if (!o.responded()) {
        ++cell->timeouts;
        continue;
      }
      cell->cycles.push_back(o.cycle);
      if (stimuli[i].rt_ms) {
        cell->rt.push_back(*stimuli[i].rt_ms);
        cell->rt_pred.push_back(o.rt_pred);
      }
    }
  }
  // Sort pooled item series so the result does not depend on row order.
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t k = 0; k < all.rt.size(); ++k) pairs.emplace_back(all.rt_pred[k], all.rt[k]);
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t k = 0; k < pairs.size(); ++k) std::tie(all.rt_pred[k], all.rt[k]) = pairs[k];
  std::sort(all.cycles.begin(), all.cycles.end());

  ConditionReport report;
  std::vector<double> mean_pred;
  std::vector<double> mean_rt;
  for (auto& [label, cell] : cells) {
    std::vector<std::pair<double, double>> ps;
    for (std::size_t k = 0; k < cell.rt.size(); ++k) ps.emplace_back(cell.rt_pred[k], cell.rt[k]);
    std::sort(ps.begin(), ps.end());
    for (std::size_t k = 0; k < ps.size(); ++k) std::tie(cell.rt_pred[k], cell.rt[k]) = ps[k];
    std::sort(cell.cycles.begin(), cell.cycles.end());
    report.conditions.push_back(summarize(label, cell));
    if (!cell.rt.empty()) {
      mean_pred.push_back(mean(cell.rt_pred));
      mean_rt.push_back(mean(cell.rt));
    }
  }
  report.overall_by_item = summarize("overall_by_item", all);
  report.overall_by_condition.condition = "overall_by_condition";
  report.overall_by_condition.n = mean_rt.size();
  if (!mean_rt.empty()) {
    report.overall_by_condition.mean_rt = mean(mean_rt);
    report.overall_by_condition.mean_cycles = report.overall_by_item.mean_cycles;
  }
  report.overall_by_condition.r = safe_pearson(mean_pred, mean_rt);
  return report;
}

void write_condition_report_csv(std::ostream& out, const ConditionReport& report) {
  out << "condition,n,n_timeout,mean_rt,mean_cycles,r\n";
  auto row = [&out](const ConditionRow& r) {
    out << r.condition << ',' << r.n << ',' << r.n_timeout << ',' << optional_cell(r.mean_rt) << ','
        << optional_cell(r.mean_cycles) << ',' << optional_cell(r.r) << '\n';
  };
  for (const auto& r : report.conditions) row(r);
  row(report.overall_by_item);
  row(report.overall_by_condition);
}

double inhibition_fitness(const Network& network, const std::vector<StimulusRecord>& stimuli, double gamma,
                          const Parameters& params, const FitOptions& options) {
  Parameters p = params;
  p.oo_gamma = gamma;
  p.pp_gamma = options.tied ? gamma : options.fixed_pp_gamma;
  const auto results = run_batch(network, stimuli, p, options.batch);
  std::vector<double> predicted;
  std::vector<double> observed;
  for (std::size_t i = 0; i < stimuli.size(); ++i) {
    if (!results[i].ok() || !results[i].outcome().responded() || !stimuli[i].rt_ms) continue;
    predicted.push_back(results[i].outcome().rt_pred);
    observed.push_back(*stimuli[i].rt_ms);
  }
  return safe_pearson(predicted, observed).value_or(kWorstFitness);
}

FitResult fit_inhibition(const Network& network, const std::vector<StimulusRecord>& stimuli,
                         const Parameters& params, const FitOptions& options) {
  return grid_search(
      [&](const std::vector<double>& points) {
        std::vector<double> fitness;
        fitness.reserve(points.size());
        for (double g : points) fitness.push_back(inhibition_fitness(network, stimuli, g, params, options));
        return fitness;
      },
      options.search);
}

BenchRow benchmark(const Lexicon& lexicon, const std::vector<StimulusRecord>& stimuli, Engine engine,
                   const Parameters& params, int repeats, const BatchOptions& options) {
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  BenchRow row;
  row.engine = engine;
  row.stimuli = stimuli.size();
  row.repeats = repeats;
  BatchOptions batch = options;
  batch.engine = engine;
  std::vector<double> full;
  double build_total = 0.0;
  double null_total = 0.0;
  for (int r = 0; r < repeats; ++r) {
    auto start = std::chrono::steady_clock::now();
    const Network network = Network::build(lexicon, params);
    build_total += elapsed_ms(start);
    run_rows(network, {}, params, batch, false);
    null_total += elapsed_ms(start);

    start = std::chrono::steady_clock::now();
    const Network again = Network::build(lexicon, params);
    const auto results = run_rows(again, stimuli, params, batch, false);
    full.push_back(elapsed_ms(start));
    if (r == 0) {
      for (const auto& t : results) row.work += t.run.work;
    }
  }
  row.build_ms_mean = build_total / repeats;
  row.null_ms_mean = null_total / repeats;
  row.batch_ms_mean = mean(full);
  row.batch_ms_min = *std::min_element(full.begin(), full.end());
  row.batch_ms_max = *std::max_element(full.begin(), full.end());
  row.per_stimulus_ms = stimuli.empty() ? 0.0 : (row.batch_ms_mean - row.null_ms_mean) / static_cast<double>(stimuli.size());
  return row;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "engine,stimuli,repeats,build_ms,null_ms,batch_ms_mean,batch_ms_min,batch_ms_max,per_stimulus_ms,"
         "active_node_updates,connection_visits,inhibition_terms\n";
  for (const auto& r : rows) {
    out << engine_name(r.engine) << ',' << r.stimuli << ',' << r.repeats << ',' << format_double(r.build_ms_mean)
        << ',' << format_double(r.null_ms_mean) << ',' << format_double(r.batch_ms_mean) << ','
        << format_double(r.batch_ms_min) << ',' << format_double(r.batch_ms_max) << ','
        << format_double(r.per_stimulus_ms) << ',' << r.work.active_node_updates << ',' << r.work.connection_visits
        << ',' << r.work.inhibition_terms << '\n';
  }
}

void write_prune_csv(std::ostream& out, const std::vector<PruneCount>& counts) {
  out << "pool,threshold,kept,dropped\n";
  for (const auto& c : counts) {
    out << pool_name(c.pool) << ',' << format_double(c.threshold) << ',' << c.kept << ',' << c.dropped << '\n';
  }
}

}  // namespace lexsim
