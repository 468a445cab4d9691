#include "lexsim/cli.hpp"

#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lexsim/error.hpp"
#include "lexsim/experiments.hpp"
#include "lexsim/manifest.hpp"

namespace lexsim {

namespace {

struct CommonOptions {
  std::string lexicon_path;
  std::string params_path;
  std::vector<std::string> sets;
  bool l2_scaling = false;
  bool allow_duplicates = false;
  std::string opb_formula = "per-billion";
  bool semantic_inhibition = false;
  bool self_inhibition = false;
  std::size_t jobs = 1;
  std::size_t dense_limit = kDefaultDenseLimit;
};

void add_common(CLI::App& app, CommonOptions& o) {
  app.add_option("--lexicon", o.lexicon_path, "Lexicon CSV")->required();
  app.add_option("--params", o.params_path, "Parameter file (NAME = VALUE lines)");
  app.add_option("--set", o.sets, "Override one parameter, NAME=VALUE")->take_all();
  app.add_flag("--l2-scaling", o.l2_scaling, "Divide language-B frequencies by 4");
  app.add_flag("--allow-duplicates", o.allow_duplicates, "Allow repeated forms within a language");
  app.add_option("--opb-formula", o.opb_formula, "per-billion or per-million")
      ->check(CLI::IsMember({"per-billion", "per-million"}));
  app.add_flag("--semantic-inhibition", o.semantic_inhibition, "Apply SS_gamma in the semantic pool");
  app.add_flag("--self-inhibition", o.self_inhibition, "Active nodes inhibit themselves");
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1, 256));
  app.add_option("--dense-limit", o.dense_limit, "Largest lexicon the dense engine accepts");
}

struct Context {
  Parameters params;
  Lexicon lexicon;
  std::unique_ptr<Network> network;
  RunManifest manifest;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Context load_context(const std::string& command, const CommonOptions& o) {
  Context ctx;
  if (!o.params_path.empty()) ctx.params.load_file(o.params_path);
  for (const auto& assignment : o.sets) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects NAME=VALUE, got '" + assignment + "'");
    ctx.params.set(assignment.substr(0, eq), assignment.substr(eq + 1));
  }
  ctx.params.validate();
  LexiconOptions lo;
  lo.scale_l2 = o.l2_scaling;
  lo.duplicates = o.allow_duplicates ? DuplicatePolicy::allow : DuplicatePolicy::reject;
  lo.opb_formula = o.opb_formula == "per-million" ? OpbFormula::per_million : OpbFormula::per_billion;
  ctx.lexicon = load_lexicon(o.lexicon_path, lo);
  ctx.network = std::make_unique<Network>(Network::build(ctx.lexicon, ctx.params));
  ctx.manifest.command = command;
  ctx.manifest.params = ctx.params;
  ctx.manifest.lexicon_path = o.lexicon_path;
  ctx.manifest.lexicon_hash = lexicon_hash(ctx.lexicon);
  ctx.manifest.options["l2_scaling"] = o.l2_scaling ? "1" : "0";
  ctx.manifest.options["allow_duplicates"] = o.allow_duplicates ? "1" : "0";
  ctx.manifest.options["opb_formula"] = o.opb_formula;
  ctx.manifest.options["semantic_inhibition"] = o.semantic_inhibition ? "1" : "0";
  ctx.manifest.options["self_inhibition"] = o.self_inhibition ? "1" : "0";
  return ctx;
}

BatchOptions batch_options(const CommonOptions& o) {
  BatchOptions b;
  b.engine_options.inhibit_semantics = o.semantic_inhibition;
  b.engine_options.self_inhibition = o.self_inhibition;
  b.jobs = o.jobs;
  b.dense_limit = o.dense_limit;
  return b;
}

// Writes `body` to a file (with a sidecar manifest) or to `out`, always
// starting with the manifest hash comment.
void emit(const std::string& path, const RunManifest& manifest, const std::string& body, std::ostream& out) {
  const std::string text = "# manifest=" + manifest.hash() + "\n" + body;
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path + "'");
  file << text;
  std::ofstream side(path + ".manifest.json", std::ios::binary);
  if (!side) throw Error("cannot write '" + path + ".manifest.json'");
  side << manifest.to_json() << '\n';
}

std::vector<StimulusRecord> stimuli_from(const std::string& file, const std::string& word, const std::string& task,
                                         const std::string& source, const std::string& target, RunManifest& m) {
  if (!file.empty() && !word.empty()) throw ConfigError("use either --stimuli or --stimulus");
  if (!file.empty()) {
    const std::string text = read_file(file);
    m.options["stimuli_hash"] = hex64(fnv1a64(text));
    std::istringstream in(text);
    return parse_stimuli(in);
  }
  if (word.empty()) throw ConfigError("one of --stimuli or --stimulus is required");
  StimulusRecord rec;
  rec.stimulus = to_upper(word);
  rec.task = parse_task(task);
  rec.source_lang = source;
  rec.target_lang = target;
  if (rec.source_lang.empty() && rec.target_lang.empty()) throw ConfigError("--source or --target is required");
  if (rec.task == Task::word_translation && (source.empty() || target.empty())) {
    throw ConfigError("WT needs --source and --target");
  }
  m.options["stimulus"] = rec.stimulus + "," + task + "," + source + "," + target;
  return {rec};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_double(item);
    if (!v) throw ConfigError("not a number: '" + item + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

std::pair<double, double> parse_domain(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--domain expects LO:HI");
  const auto lo = parse_double(text.substr(0, colon));
  const auto hi = parse_double(text.substr(colon + 1));
  if (!lo || !hi) throw ConfigError("--domain expects LO:HI");
  return {*lo, *hi};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bilingual lexical access simulator", "lexsim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // simulate
  CommonOptions sim_common;
  std::string sim_stimuli, sim_word, sim_task = "WT", sim_source, sim_target, sim_engine = "final";
  std::string sim_output, sim_trace, sim_report;
  std::size_t sim_top_k = 6;
  bool sim_no_check = false;
  bool sim_verify = false;
  auto* simulate = app.add_subcommand("simulate", "Run stimuli through a task");
  add_common(*simulate, sim_common);
  simulate->add_option("--stimuli", sim_stimuli, "Stimulus CSV");
  simulate->add_option("--stimulus", sim_word, "Single stimulus");
  simulate->add_option("--task", sim_task, "LD, NAME or WT (single stimulus)");
  simulate->add_option("--source", sim_source, "Source language tag");
  simulate->add_option("--target", sim_target, "Target language tag");
  simulate->add_option("--engine", sim_engine, "final or dense")->check(CLI::IsMember({"final", "dense"}));
  simulate->add_option("--output,-o", sim_output, "Outcome CSV (default stdout)");
  simulate->add_option("--trace", sim_trace, "Activation trace CSV");
  simulate->add_option("--trace-top-k", sim_top_k, "Nodes per trace; 0 samples every node above rest");
  simulate->add_option("--report", sim_report, "Condition report CSV");
  simulate->add_flag("--no-semantic-check", sim_no_check, "Accept output candidates of any concept");
  simulate->add_flag("--verify", sim_verify, "Recompute the active set every cycle");

  // fit
  CommonOptions fit_common;
  std::string fit_stimuli, fit_domain = "-1:0", fit_log, fit_output;
  int fit_n = 20;
  int fit_max_iter = 60;
  double fit_epsilon = 1e-4;
  bool fit_untied = false;
  double fit_pp = 0.0;
  auto* fit = app.add_subcommand("fit", "Grid-search the inhibition parameter against RTs");
  add_common(*fit, fit_common);
  fit->add_option("--stimuli", fit_stimuli, "Stimulus CSV with rt_ms")->required();
  fit->add_option("--domain", fit_domain, "Search domain LO:HI");
  fit->add_option("--n", fit_n, "Points per window");
  fit->add_option("--epsilon", fit_epsilon, "Minimum improvement to continue");
  fit->add_option("--max-iterations", fit_max_iter, "Iteration cap");
  fit->add_flag("--untied", fit_untied, "Fit OO_gamma only, PP_gamma fixed");
  fit->add_option("--pp-gamma", fit_pp, "PP_gamma when untied");
  fit->add_option("--log", fit_log, "Fit log CSV");
  fit->add_option("--output,-o", fit_output, "Summary JSON (default stdout)");

  // stats
  CommonOptions stats_common;
  std::string stats_stimuli, stats_gammas = "0,-0.0001,-0.001,-0.01,-0.1,-0.4,-0.5", stats_output, stats_curve;
  std::string stats_prune;
  auto* stats = app.add_subcommand("stats", "Active-node statistics or pruning report");
  add_common(*stats, stats_common);
  stats->add_option("--stimuli", stats_stimuli, "Stimulus CSV");
  stats->add_option("--gammas", stats_gammas, "Comma-separated OO/PP gamma values");
  stats->add_option("--curve", stats_curve, "Per-cycle curve CSV");
  stats->add_option("--prune", stats_prune, "Comma-separated thresholds; emit a pruning report instead");
  stats->add_option("--output,-o", stats_output, "CSV output (default stdout)");

  // bench
  CommonOptions bench_common;
  std::string bench_stimuli, bench_engine = "both", bench_output;
  int bench_repeats = 3;
  auto* bench = app.add_subcommand("bench", "Time the engines (machine-dependent)");
  add_common(*bench, bench_common);
  bench->add_option("--stimuli", bench_stimuli, "Stimulus CSV")->required();
  bench->add_option("--engine", bench_engine, "final, dense or both")
      ->check(CLI::IsMember({"final", "dense", "both"}));
  bench->add_option("--repeats", bench_repeats, "Repetitions")->check(CLI::PositiveNumber);
  bench->add_option("--output,-o", bench_output, "CSV output (default stdout)");

  // dump-network
  CommonOptions dump_common;
  std::string dump_format = "csv", dump_output;
  auto* dump = app.add_subcommand("dump-network", "Write the network structure");
  add_common(*dump, dump_common);
  dump->add_option("--format", dump_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  dump->add_option("--output,-o", dump_output, "Output (default stdout)");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) {
      auto ctx = load_context("simulate", sim_common);
      auto stimuli = stimuli_from(sim_stimuli, sim_word, sim_task, sim_source, sim_target, ctx.manifest);
      auto options = batch_options(sim_common);
      options.engine = parse_engine(sim_engine);
      options.semantic_check = !sim_no_check;
      options.record_history = !sim_trace.empty();
      options.verify_each_cycle = sim_verify;
      ctx.manifest.options["engine"] = sim_engine;
      ctx.manifest.options["semantic_check"] = sim_no_check ? "0" : "1";
      ctx.manifest.options["trace_top_k"] = std::to_string(sim_top_k);
      const auto results = run_batch(*ctx.network, stimuli, ctx.params, options);
      std::ostringstream body;
      write_outcomes_csv(body, stimuli, results);
      emit(sim_output, ctx.manifest, body.str(), out);
      if (!sim_trace.empty()) {
        std::ostringstream trace;
        const bool batch = stimuli.size() > 1;
        write_trace_header(trace, batch);
        for (std::size_t i = 0; i < results.size(); ++i) {
          if (!results[i].ok()) continue;
          write_trace_rows(trace, *ctx.network, results[i].run, sim_top_k, batch ? std::to_string(i + 1) : "");
        }
        emit(sim_trace, ctx.manifest, trace.str(), out);
      }
      if (!sim_report.empty()) {
        std::ostringstream report;
        write_condition_report_csv(report, condition_report(stimuli, results));
        emit(sim_report, ctx.manifest, report.str(), out);
      }
      for (std::size_t i = 0; i < results.size(); ++i) {
        if (!results[i].ok()) err << "row " << i + 1 << ": " << results[i].error << '\n';
      }
      return 0;
    }
    if (fit->parsed()) {
      auto ctx = load_context("fit", fit_common);
      auto stimuli = stimuli_from(fit_stimuli, "", "", "", "", ctx.manifest);
      FitOptions options;
      std::tie(options.search.lower, options.search.upper) = parse_domain(fit_domain);
      options.search.n_points = fit_n;
      options.search.epsilon = fit_epsilon;
      options.search.max_iterations = fit_max_iter;
      options.tied = !fit_untied;
      options.fixed_pp_gamma = fit_pp;
      options.batch = batch_options(fit_common);
      ctx.manifest.options["domain"] = format_double(options.search.lower) + ":" + format_double(options.search.upper);
      ctx.manifest.options["n"] = std::to_string(fit_n);
      ctx.manifest.options["epsilon"] = format_double(fit_epsilon);
      ctx.manifest.options["max_iterations"] = std::to_string(fit_max_iter);
      ctx.manifest.options["tied"] = fit_untied ? "0" : "1";
      ctx.manifest.options["pp_gamma"] = format_double(fit_pp);
      const auto result = fit_inhibition(*ctx.network, stimuli, ctx.params, options);
      if (!fit_log.empty()) {
        std::ostringstream log;
        write_fit_log(log, result);
        emit(fit_log, ctx.manifest, log.str(), out);
      }
      nlohmann::ordered_json summary;
      summary["best_gamma"] = result.best_value;
      summary["best_fitness"] = std::isfinite(result.best_fitness) ? nlohmann::ordered_json(result.best_fitness)
                                                                   : nlohmann::ordered_json();
      summary["iterations"] = result.windows.size();
      summary["final_window"] = {result.windows.back().lower, result.windows.back().upper};
      summary["tied"] = options.tied;
      emit(fit_output, ctx.manifest, summary.dump(2) + "\n", out);
      return 0;
    }
    if (stats->parsed()) {
      auto ctx = load_context("stats", stats_common);
      std::ostringstream body;
      if (!stats_prune.empty()) {
        ctx.manifest.options["prune"] = stats_prune;
        std::vector<PruneCount> counts;
        for (double t : parse_list(stats_prune)) {
          const auto c = prune_candidates(*ctx.network, t, ctx.params);
          counts.insert(counts.end(), c.begin(), c.end());
        }
        write_prune_csv(body, counts);
        emit(stats_output, ctx.manifest, body.str(), out);
        return 0;
      }
      auto stimuli = stimuli_from(stats_stimuli, "", "", "", "", ctx.manifest);
      ctx.manifest.options["gammas"] = stats_gammas;
      const auto result =
          active_node_stats(*ctx.network, stimuli, parse_list(stats_gammas), ctx.params, batch_options(stats_common));
      write_stats_csv(body, result);
      emit(stats_output, ctx.manifest, body.str(), out);
      if (!stats_curve.empty()) {
        std::ostringstream curve;
        write_stats_curve_csv(curve, result);
        emit(stats_curve, ctx.manifest, curve.str(), out);
      }
      return 0;
    }
    if (bench->parsed()) {
      auto ctx = load_context("bench", bench_common);
      auto stimuli = stimuli_from(bench_stimuli, "", "", "", "", ctx.manifest);
      std::vector<BenchRow> rows;
      for (Engine engine : {Engine::final, Engine::dense}) {
        if (bench_engine != "both" && bench_engine != engine_name(engine)) continue;
        rows.push_back(benchmark(ctx.lexicon, stimuli, engine, ctx.params, bench_repeats, batch_options(bench_common)));
      }
      std::ostringstream body;
      write_bench_csv(body, rows);
      ctx.manifest.options["engine"] = bench_engine;
      ctx.manifest.options["repeats"] = std::to_string(bench_repeats);
      emit(bench_output, ctx.manifest, body.str(), out);
      return 0;
    }
    if (dump->parsed()) {
      auto ctx = load_context("dump-network", dump_common);
      ctx.manifest.options["format"] = dump_format;
      std::ostringstream body;
      if (dump_format == "json") {
        write_network_json(body, *ctx.network);
        // JSON has no comment syntax; the hash travels in the sidecar only.
        if (dump_output.empty() || dump_output == "-") {
          out << body.str();
        } else {
          std::ofstream file(dump_output, std::ios::binary);
          if (!file) throw Error("cannot write '" + dump_output + "'");
          file << body.str();
          std::ofstream side(dump_output + ".manifest.json", std::ios::binary);
          side << ctx.manifest.to_json() << '\n';
        }
      } else {
        write_network_csv(body, *ctx.network);
        emit(dump_output, ctx.manifest, body.str(), out);
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace lexsim
