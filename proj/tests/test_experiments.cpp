#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lexsim/error.hpp"
#include "lexsim/experiments.hpp"
#include "oracle.hpp"

using namespace lexsim;

namespace {

std::vector<StimulusRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_stimuli(in);
}

TrialResult responded_at(int cycle, const Parameters& p = {}) {
  TrialResult t;
  t.run.outcome.kind = ResponseKind::symbol;
  t.run.outcome.cycle = cycle;
  t.run.outcome.rt_pred = p.predicted_rt(cycle);
  return t;
}

TrialResult timed_out() {
  TrialResult t;
  t.run.outcome.kind = ResponseKind::none;
  t.run.outcome.cycle = 40;
  return t;
}

StimulusRecord record(std::string condition, std::optional<double> rt) {
  StimulusRecord r;
  r.stimulus = "X";
  r.source_lang = "NL";
  r.target_lang = "EN";
  r.task = Task::word_translation;
  r.condition = std::move(condition);
  r.rt_ms = rt;
  return r;
}

}  // namespace

TEST_CASE("stimulus files") {
  const auto rows = parse(
      "stimulus,source_lang,target_lang,task,condition,rt_ms\n"
      "# comment\n"
      "room,NL,EN,WT,IH,812.5\n"
      "AAP,NL,,NAME\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].stimulus == "ROOM");
  CHECK(rows[0].condition == "IH");
  CHECK(*rows[0].rt_ms == 812.5);
  CHECK(rows[1].task == Task::naming);
  CHECK_FALSE(rows[1].rt_ms.has_value());

  CHECK(parse("stimulus,source_lang,target_lang,task,condition,rt_ms\n").empty());
  CHECK(parse("").empty());
  CHECK(parse("task,stimulus,source_lang\nLD,AAP,NL\n")[0].stimulus == "AAP");
  CHECK_THROWS_AS(parse("stimulus,task,bogus\n"), ParseError);
  CHECK_THROWS_AS(parse("stimulus,source_lang,target_lang,task\nAAP,NL,EN,XX\n"), ParseError);
  CHECK_THROWS_AS(parse("stimulus,source_lang,target_lang,task,condition,rt_ms\nAAP,NL,EN,WT,,-5\n"), ParseError);
  CHECK_THROWS_AS(parse("stimulus,source_lang,target_lang,task\nAAP,NL,,WT\n"), ParseError);
  CHECK_THROWS_AS(load_stimuli("/nonexistent/stimuli.csv"), Error);
}

TEST_CASE("empty batch") {
  const Parameters p;
  const auto net = Network::build(load_lexicon(oracle::fixture("table1.csv")), p);
  CHECK(run_batch(net, {}, p).empty());
}

TEST_CASE("ten lexical decisions all say yes") {
  const Parameters p;
  const auto lex = load_lexicon(oracle::fixture("table1.csv"));
  const auto net = Network::build(lex, p);
  std::vector<StimulusRecord> rows;
  for (const auto& e : lex.entries()) {
    StimulusRecord r;
    r.stimulus = e.ortho_a;
    r.source_lang = "NL";
    r.target_lang = "NL";
    r.task = Task::lexical_decision;
    rows.push_back(r);
  }
  const auto results = run_batch(net, rows, p);
  REQUIRE(results.size() == 10);
  for (const auto& r : results) {
    CHECK(r.ok());
    CHECK(r.outcome().kind == ResponseKind::yes);
  }
}

TEST_CASE("mixed tasks dispatch to their monitors") {
  const Parameters p;
  const auto net = Network::build(load_lexicon(oracle::fixture("homographs.csv")), p);
  const auto rows = load_stimuli(oracle::fixture("table1_wt.csv"));
  const auto results = run_batch(net, rows, p);
  REQUIRE(results.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(rows[i].stimulus);
    REQUIRE(results[i].ok());
    const auto kind = results[i].outcome().kind;
    switch (rows[i].task) {
      case Task::lexical_decision:
        CHECK((kind == ResponseKind::yes || kind == ResponseKind::no));
        break;
      case Task::naming:
      case Task::word_translation:
        CHECK((kind == ResponseKind::symbol || kind == ResponseKind::none));
        break;
    }
  }
  std::ostringstream out;
  write_outcomes_csv(out, rows, results);
  CHECK(out.str().find("ROOM,WT,NL,EN,symbol,krim,28,28,") != std::string::npos);
  CHECK(out.str().find("ROOM,NAME,NL,EN,symbol,rum,27,27,0") != std::string::npos);
  CHECK(out.str().find("XQZWV,LD,NL,NL,NO,,40,,0,,timeout") != std::string::npos);
}

TEST_CASE("row errors are recorded and the batch continues") {
  const Parameters p;
  const auto net = Network::build(load_lexicon(oracle::fixture("table1.csv")), p);
  auto rows = parse("stimulus,source_lang,target_lang,task\nAAP,NL,DE,WT\nAARDE,NL,NL,LD\nAAP,NL,NL,WT\n");
  const auto results = run_batch(net, rows, p);
  CHECK_FALSE(results[0].ok());
  CHECK(results[1].ok());
  CHECK_FALSE(results[2].ok());
  std::ostringstream out;
  write_outcomes_csv(out, rows, results);
  CHECK(out.str().find("AAP,WT,NL,DE,error,") != std::string::npos);
}

TEST_CASE("parallel batches equal serial ones") {
  const Parameters p;
  const auto net = Network::build(load_lexicon(oracle::fixture("homographs.csv")), p);
  const auto rows = load_stimuli(oracle::fixture("table1_wt.csv"));
  BatchOptions serial, parallel;
  parallel.jobs = 8;
  std::ostringstream a, b;
  write_outcomes_csv(a, rows, run_batch(net, rows, p, serial));
  write_outcomes_csv(b, rows, run_batch(net, rows, p, parallel));
  CHECK(a.str() == b.str());
}

TEST_CASE("active node statistics") {
  const Parameters p;
  const auto lex = load_lexicon(oracle::fixture("table1.csv"));
  const auto net = Network::build(lex, p);
  const auto rows = load_stimuli(oracle::fixture("table1_wt.csv"));
  const std::vector<double> gammas{0.0, -0.0001, -0.001, -0.01, -0.1, -0.4, -0.5};
  const auto stats = active_node_stats(net, rows, gammas, p);
  REQUIRE(stats.size() == gammas.size());
  for (std::size_t i = 0; i < stats.size(); ++i) {
    double sum = 0.0;
    for (double v : stats[i].mean_by_pool) sum += v;
    CHECK(stats[i].mean_overall == doctest::Approx(sum));
    CHECK(stats[i].mean_per_cycle.size() == 40);
    CHECK(stats[i].mean_per_cycle.back() == doctest::Approx(stats[i].mean_overall));
    CHECK(stats[0].mean_overall >= stats[i].mean_overall);
    if (i > 0) CHECK(stats[i].mean_overall <= stats[i - 1].mean_overall);
  }
  // Strong inhibition leaves a handful of survivors.
  CHECK(stats.back().mean_overall <= 5.0);
  CHECK(stats.back().mean_overall >= 1.0);
  CHECK_THROWS_AS(active_node_stats(net, rows, {0.1}, p), DomainError);

  std::ostringstream csv, curve;
  write_stats_csv(csv, stats);
  write_stats_curve_csv(curve, stats);
  CHECK(csv.str().rfind("gamma,pool,mean_active\n0,ORTHO,", 0) == 0);
  const auto curve_text = curve.str();
  CHECK(std::count(curve_text.begin(), curve_text.end(), '\n') == 1 + 7 * 40);
}

TEST_CASE("condition report") {
  SUBCASE("perfect affine relation") {
    Parameters p;
    p.timestep_multiplier = 25.0;
    p.timestep_adder = 500.0;
    std::vector<StimulusRecord> rows;
    std::vector<TrialResult> res;
    for (int c : {10, 14, 20, 31}) {
      rows.push_back(record("A", 25.0 * c + 500.0));
      res.push_back(responded_at(c, p));
    }
    const auto report = condition_report(rows, res);
    REQUIRE(report.conditions.size() == 1);
    CHECK(*report.conditions[0].r == doctest::Approx(1.0));
    CHECK(*report.conditions[0].mean_cycles == doctest::Approx(18.75));
  }
  SUBCASE("single responded item has no correlation") {
    const std::vector<StimulusRecord> rows{record("A", 700.0), record("A", 800.0)};
    const std::vector<TrialResult> res{responded_at(20), timed_out()};
    const auto report = condition_report(rows, res);
    const auto& row = report.conditions[0];
    CHECK(row.n == 1);
    CHECK(row.n_timeout == 1);
    CHECK(*row.mean_rt == 700.0);
    CHECK_FALSE(row.r.has_value());
    std::ostringstream out;
    write_condition_report_csv(out, report);
    CHECK(out.str().find("A,1,1,700,20,\n") != std::string::npos);
  }
  SUBCASE("two conditions correlate perfectly by condition") {
    const std::vector<StimulusRecord> rows{record("A", 700.0), record("A", 720.0), record("B", 900.0),
                                           record("B", 880.0)};
    const std::vector<TrialResult> res{responded_at(20), responded_at(22), responded_at(10), responded_at(12)};
    const auto report = condition_report(rows, res);
    CHECK(report.conditions.size() == 2);
    CHECK(report.overall_by_condition.n == 2);
    CHECK(std::abs(*report.overall_by_condition.r) == doctest::Approx(1.0));
    CHECK(report.overall_by_item.n == 4);
    CHECK(report.overall_by_item.r.has_value());
  }
  SUBCASE("row order does not matter") {
    std::vector<StimulusRecord> rows;
    std::vector<TrialResult> res;
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> cyc(5, 39);
    std::uniform_real_distribution<double> rt(400.0, 1200.0);
    for (int i = 0; i < 30; ++i) {
      rows.push_back(record(i % 3 == 0 ? "A" : i % 3 == 1 ? "B" : "C", rt(rng)));
      res.push_back(i % 7 == 0 ? timed_out() : responded_at(cyc(rng)));
    }
    std::ostringstream a;
    write_condition_report_csv(a, condition_report(rows, res));
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<StimulusRecord> rows2;
    std::vector<TrialResult> res2;
    for (auto i : order) {
      rows2.push_back(rows[i]);
      res2.push_back(res[i]);
    }
    std::ostringstream b;
    write_condition_report_csv(b, condition_report(rows2, res2));
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("fitness of a gamma where nothing responds is worst") {
  Parameters p;
  p.max_cycles = 3;
  const auto net = Network::build(load_lexicon(oracle::fixture("table1.csv")), p);
  auto rows = parse("stimulus,source_lang,target_lang,task,condition,rt_ms\nAAP,NL,EN,WT,,700\nAARDE,NL,EN,WT,,800\n");
  CHECK(inhibition_fitness(net, rows, -0.1, p, FitOptions{}) == kWorstFitness);
}

TEST_CASE("untied fit holds PP_gamma fixed") {
  const Parameters p;
  const auto net = Network::build(load_lexicon(oracle::fixture("conditions.csv")), p);
  auto rows = load_stimuli(oracle::fixture("conditions_wt.csv"));
  // Synthetic RTs from the untied setting OO = -0.03, PP = 0.
  Parameters gen = p;
  gen.oo_gamma = -0.03;
  gen.pp_gamma = 0.0;
  const auto results = run_batch(net, rows, gen);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rt_ms = 25.0 * results[i].outcome().cycle + 500.0;
  FitOptions untied;
  untied.tied = false;
  untied.fixed_pp_gamma = 0.0;
  CHECK(inhibition_fitness(net, rows, -0.03, p, untied) == doctest::Approx(1.0));
  FitOptions tied;
  CHECK(inhibition_fitness(net, rows, -0.03, p, tied) < 0.999);
}

TEST_CASE("benchmark harness") {
  const Parameters p;
  const auto lex = load_lexicon(oracle::fixture("table1.csv"));
  const auto null_row = benchmark(lex, {}, Engine::final, p, 1);
  CHECK(null_row.stimuli == 0);
  CHECK(null_row.per_stimulus_ms == 0.0);
  CHECK(null_row.work.total() == 0);

  const auto rows = load_stimuli(oracle::fixture("table1_wt.csv"));
  const auto row = benchmark(lex, rows, Engine::dense, p, 3);
  CHECK(row.repeats == 3);
  CHECK(row.batch_ms_min <= row.batch_ms_mean);
  CHECK(row.batch_ms_mean <= row.batch_ms_max);
  CHECK(row.work.active_node_updates > 0);
  CHECK_THROWS_AS(benchmark(lex, rows, Engine::final, p, 0), ConfigError);

  std::ostringstream out;
  write_bench_csv(out, {null_row, row});
  const auto text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("inhibition lowers the update counter on the fixture") {
  const auto lex = load_lexicon(oracle::fixture("table1.csv"));
  const auto rows = load_stimuli(oracle::fixture("table1_wt.csv"));
  Parameters with, without;
  with.oo_gamma = with.pp_gamma = -0.1;
  without.oo_gamma = without.pp_gamma = 0.0;
  const auto a = benchmark(lex, rows, Engine::final, with, 1);
  const auto b = benchmark(lex, rows, Engine::final, without, 1);
  CHECK(a.work.active_node_updates <= b.work.active_node_updates);
}

TEST_CASE("prune report") {
  const Parameters p;
  const auto net = Network::build(load_lexicon(oracle::fixture("table1.csv")), p);
  std::ostringstream out;
  write_prune_csv(out, prune_candidates(net, 0.001, p));
  CHECK(out.str().rfind("pool,threshold,kept,dropped\nORTHO,0.001,", 0) == 0);
}
