#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "lexsim/dynamics.hpp"
#include "lexsim/error.hpp"
#include "lexsim/tasks.hpp"
#include "oracle.hpp"

using namespace lexsim;

namespace {

Network table_network(const Parameters& p = {}) { return Network::build(load_lexicon(oracle::fixture("table1.csv")), p); }

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("update rule") {
  const Parameters p;
  CHECK(update_activation(-0.1, 0.0, -0.1, p) == -0.1);
  CHECK(update_activation(0.0, 0.1, -0.2, p) == doctest::Approx(0.086).epsilon(1e-15));
  CHECK(update_activation(-0.2, -50.0, -0.2, p) == -0.2);
  CHECK(update_activation(0.5, 50.0, 0.0, p) == 1.0);
  CHECK(update_activation(0.9, 10.0, 0.0, p) == 1.0);
  // Negative branch scales by the distance to the floor.
  CHECK(update_activation(0.3, -0.1, 0.3, p) == doctest::Approx(0.3 - 0.1 * 0.5).epsilon(1e-15));
}

TEST_CASE("lateral inhibition") {
  const std::vector<double> pool{0.5, 0.3, 0.2};
  CHECK(apply_lateral_inhibition(pool, 0.2, 0.0) == 0.0);
  CHECK(apply_lateral_inhibition(std::vector<double>{0.4}, 0.4, -0.1) == 0.0);
  CHECK(apply_lateral_inhibition(pool, 0.2, -0.1) == doctest::Approx(-0.08).epsilon(1e-15));
  CHECK(apply_lateral_inhibition(pool, 0.2, -0.1, true) == doctest::Approx(-0.1).epsilon(1e-15));
  // An inactive node is inhibited by every active one.
  CHECK(apply_lateral_inhibition(std::vector<double>{0.5, 0.3}, -0.1, -0.1) == doctest::Approx(-0.08).epsilon(1e-15));
  // Equal activations: exactly one copy of the node's own value is skipped.
  CHECK(apply_lateral_inhibition(std::vector<double>{0.4, 0.4}, 0.4, -0.1) == doctest::Approx(-0.04).epsilon(1e-15));
}

TEST_CASE("net input from active sources") {
  const Parameters p;
  const auto net = Network::build(parse_lexicon(std::string_view("AAP,1,ap,1,MONKEY,1,mVNkI,1\n")), p);
  SimulationState s(net, p);
  s.set_stimulus("ZZZ");
  const NodeId o = net.ortho_node(0, 0);
  const NodeId ph = net.phono_node(0, 0);
  CHECK(net_input(o, s) == 0.0);
  s.set_activation(ph, 0.5);
  CHECK(net_input(o, s) == doctest::Approx(0.015).epsilon(1e-15));
  s.set_activation(ph, -0.1);
  CHECK(net_input(o, s) == 0.0);
  CHECK_NOTHROW(s.verify());
}

TEST_CASE("quiescence") {
  const Parameters p;
  const auto net = table_network(p);
  SimulationState s(net, p);
  s.set_stimulus("QQQQQQQQQQQQ");
  const std::vector<double> before(s.activations().begin(), s.activations().end());
  WorkCounters w;
  for (int c = 0; c < 5; ++c) step(s, {}, w);
  CHECK(s.cycle() == 5);
  CHECK(std::equal(before.begin(), before.end(), s.activations().begin()));
  CHECK(s.active().empty());
}

TEST_CASE("one cycle of AARDE raises only ORTHO nodes with input") {
  const Parameters p;
  const auto net = table_network(p);
  SimulationState s(net, p);
  s.set_stimulus("aarde");
  CHECK(s.stimulus() == "AARDE");
  const auto before = std::vector<double>(s.activations().begin(), s.activations().end());
  WorkCounters w;
  step(s, {}, w);
  const auto ortho = net.pool(Pool::ortho);
  for (NodeId id = 1; id < net.size(); ++id) {
    const bool has_input = ortho.contains(id) && s.input_weights()[id - ortho.first] > 0.0;
    CHECK((s.activation(id) > before[id]) == has_input);
  }
  CHECK(s.active_count(Pool::phono) == 0);
  CHECK(s.active_count(Pool::sem) == 0);
  CHECK(s.active_count(Pool::ortho) > 0);
}

TEST_CASE("engine agrees with the naive simulator") {
  for (double gamma : {0.0, -0.001, -0.1}) {
    Parameters p;
    p.oo_gamma = p.pp_gamma = gamma;
    const auto lex = load_lexicon(oracle::fixture("table1.csv"));
    const auto net = Network::build(lex, p);
    oracle::NaiveModel naive(lex.entries(), p);
    for (const char* word : {"AARDE", "AAP", "AARDBEI", "OFFER"}) {
      SimulationState s(net, p);
      s.set_stimulus(word);
      naive.start(word);
      WorkCounters w;
      for (int c = 0; c < 40; ++c) {
        step(s, {}, w);
        naive.step();
        for (std::size_t i = 0; i < lex.size(); ++i) {
          for (int l = 0; l < 2; ++l) {
            CHECK(s.activation(net.ortho_node(i, l)) == doctest::Approx(naive.ortho(i, l)).epsilon(1e-12));
            CHECK(s.activation(net.phono_node(i, l)) == doctest::Approx(naive.phono(i, l)).epsilon(1e-12));
          }
          CHECK(s.activation(net.sem_node(i)) == doctest::Approx(naive.sem(i)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("node order does not change activations") {
  Parameters p;
  p.oo_gamma = p.pp_gamma = -0.01;
  const auto lex = load_lexicon(oracle::fixture("homographs.csv"));
  auto entries = lex.entries();
  std::reverse(entries.begin(), entries.end());
  std::rotate(entries.begin(), entries.begin() + 5, entries.end());
  const Lexicon shuffled(entries, lex.language_a(), lex.language_b());
  const auto a = Network::build(lex, p);
  const auto b = Network::build(shuffled, p);
  auto index_in_b = [&](std::size_t i) {
    return static_cast<std::size_t>(std::find(entries.begin(), entries.end(), lex.entries()[i]) - entries.begin());
  };
  for (const char* word : {"ROOM", "AARDE", "WET"}) {
    RunOptions o;
    o.record_history = true;
    o.stop_on_decision = false;
    NullMonitor m1, m2;
    const auto ra = run(a, word, m1, p, o);
    const auto rb = run(b, word, m2, p, o);
    REQUIRE(ra.history.size() == rb.history.size());
    for (std::size_t c = 0; c < ra.history.size(); ++c) {
      for (std::size_t i = 0; i < lex.size(); ++i) {
        const auto j = index_in_b(i);
        for (int l = 0; l < 2; ++l) {
          CHECK(ra.history[c][a.ortho_node(i, l)] == rb.history[c][b.ortho_node(j, l)]);
          CHECK(ra.history[c][a.phono_node(i, l)] == rb.history[c][b.phono_node(j, l)]);
        }
        CHECK(ra.history[c][a.sem_node(i)] == rb.history[c][b.sem_node(j)]);
      }
    }
  }
}

TEST_CASE("active set and clamp invariants hold every cycle") {
  for (double gamma : {0.0, -0.001, -0.5}) {
    Parameters p;
    p.oo_gamma = p.pp_gamma = gamma;
    const auto net = Network::build(load_lexicon(oracle::fixture("homographs.csv")), p);
    for (const char* word : {"ROOM", "AARDIG", "WET", "XQZWV"}) {
      RunOptions o;
      o.verify_each_cycle = true;
      o.stop_on_decision = false;
      o.engine.inhibit_semantics = gamma == -0.5;
      NullMonitor m;
      CHECK_NOTHROW(run(net, word, m, p, o));
    }
  }
}

TEST_CASE("verify catches a corrupted state") {
  const Parameters p;
  const auto net = table_network(p);
  SimulationState s(net, p);
  s.set_stimulus("AAP");
  std::vector<double> next(s.activations().begin(), s.activations().end());
  next[net.ortho_node(0, 0)] = 3.0;
  s.commit(next);
  CHECK_THROWS_AS(s.verify(), InvariantViolation);
}

TEST_CASE("inhibition reduces activity") {
  const auto lex = load_lexicon(oracle::fixture("table1.csv"));
  std::size_t previous = SIZE_MAX;
  for (double gamma : {0.0, -0.0001, -0.001, -0.01, -0.1}) {
    Parameters p;
    p.oo_gamma = p.pp_gamma = gamma;
    const auto net = Network::build(lex, p);
    std::size_t total = 0;
    for (const auto& e : lex.entries()) {
      RunOptions o;
      o.stop_on_decision = false;
      NullMonitor m;
      const auto r = run(net, e.ortho_a, m, p, o);
      for (std::size_t k = 0; k < kPoolCount; ++k) total += r.active_counts.back()[k];
    }
    CHECK(total <= previous);
    previous = total;
  }
}

TEST_CASE("run contract") {
  const Parameters p;
  const auto net = table_network(p);
  NullMonitor never;
  const auto r = run(net, "AARDE", never, p);
  CHECK(r.outcome.kind == ResponseKind::none);
  CHECK(r.cycles == 40);
  CHECK(r.outcome.cycle == 40);
  CHECK(r.active_counts.size() == 40);

  // Golden: first YES at cycle 12, confirmed by the naive simulator.
  const auto lex = load_lexicon(oracle::fixture("table1.csv"));
  oracle::NaiveModel naive(lex.entries(), p);
  CHECK(naive.lexical_decision("AARDE", 0) == 12);
  LexicalDecision ld(0);
  RunOptions o;
  o.record_history = true;
  const auto yes = run(net, "AARDE", ld, p, o);
  CHECK(yes.outcome.kind == ResponseKind::yes);
  CHECK(yes.outcome.cycle == 12);
  CHECK(yes.cycles == 12);
  CHECK(yes.history.size() == 12);

  std::ostringstream trace;
  write_trace_header(trace, false);
  write_trace_rows(trace, net, yes, 6);
  CHECK(line_count(trace.str()) == 1 + 12 * 6);
  CHECK(trace.str().rfind("cycle,node_id,pool,language,symbol,activation\n", 0) == 0);
  const auto every = trace_nodes(net, yes, 0);
  std::ostringstream full;
  write_trace_rows(full, net, yes, 0, "7");
  CHECK(line_count(full.str()) == 12 * every.size());
  CHECK(full.str().rfind("7,1,", 0) == 0);
}

TEST_CASE("work counters") {
  const auto lex = load_lexicon(oracle::fixture("table1.csv"));
  std::uint64_t updates[2];
  int k = 0;
  for (double gamma : {0.0, -0.1}) {
    Parameters p;
    p.oo_gamma = p.pp_gamma = gamma;
    const auto net = Network::build(lex, p);
    WorkCounters total;
    for (const auto& e : lex.entries()) {
      NullMonitor m;
      RunOptions o;
      o.stop_on_decision = false;
      total += run(net, e.ortho_a, m, p, o).work;
    }
    updates[k++] = total.active_node_updates;
    CHECK(total.total() >= total.active_node_updates);
  }
  CHECK(updates[1] <= updates[0]);
}
