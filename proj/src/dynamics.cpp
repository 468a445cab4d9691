#include "lexsim/dynamics.hpp"

#include <algorithm>
#include <ostream>
#include <utility>

#include "lexsim/error.hpp"
#include "lexsim/lexicon.hpp"

namespace lexsim {

SimulationState::SimulationState(const Network& network, const Parameters& params)
    : network_(&network), params_(params) {
  input_weights_.assign(network.pool(Pool::ortho).size(), 0.0);
  reset();
}

void SimulationState::set_stimulus(std::string_view stimulus) {
  stimulus_ = to_upper(stimulus);
  input_weights_ = compute_input_weights(*network_, stimulus_, params_);
  reset();
}

void SimulationState::reset() {
  const auto& nodes = network_->nodes();
  activation_.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) activation_[i] = nodes[i].rest;
  active_.clear();
  active_pos_.assign(nodes.size(), kNotActive);
  active_by_pool_.fill(0);
  cycle_ = 0;
  for (NodeId id = 1; id < nodes.size(); ++id) {
    if (activation_[id] > 0.0) insert_active(id);
  }
}

std::vector<NodeId> SimulationState::active_sorted() const {
  std::vector<NodeId> out = active_;
  std::sort(out.begin(), out.end());
  return out;
}

void SimulationState::insert_active(NodeId id) {
  active_pos_[id] = static_cast<std::uint32_t>(active_.size());
  active_.push_back(id);
  ++active_by_pool_[static_cast<std::size_t>(network_->pool_of(id))];
}

void SimulationState::erase_active(NodeId id) {
  const auto pos = active_pos_[id];
  const NodeId moved = active_.back();
  active_[pos] = moved;
  active_pos_[moved] = pos;
  active_.pop_back();
  active_pos_[id] = kNotActive;
  --active_by_pool_[static_cast<std::size_t>(network_->pool_of(id))];
}

void SimulationState::set_activation(NodeId id, double value) {
  activation_.at(id) = value;
  if (id == Network::input_node()) return;
  const bool now = value > 0.0;
  if (now && !is_active(id)) {
    insert_active(id);
  } else if (!now && is_active(id)) {
    erase_active(id);
  }
}

void SimulationState::commit(std::vector<double>& next) {
  if (next.size() != activation_.size()) throw InvariantViolation("commit: activation vector size mismatch");
  activation_.swap(next);
  ++cycle_;
  for (NodeId id = 1; id < activation_.size(); ++id) {
    const bool now = activation_[id] > 0.0;
    const bool was = active_pos_[id] != kNotActive;
    if (now && !was) {
      insert_active(id);
    } else if (!now && was) {
      erase_active(id);
    }
  }
}

void SimulationState::verify() const {
  std::array<std::size_t, kPoolCount> counts{};
  std::size_t total = 0;
  for (NodeId id = 0; id < activation_.size(); ++id) {
    const double a = activation_[id];
    if (!(a >= params_.min_act && a <= params_.max_act) && id != Network::input_node()) {
      throw InvariantViolation("activation of node " + std::to_string(id) + " out of range: " + format_double(a));
    }
    const bool expected = id != Network::input_node() && a > 0.0;
    if (expected != is_active(id)) {
      throw InvariantViolation("active set disagrees with activation of node " + std::to_string(id));
    }
    if (expected) {
      ++counts[static_cast<std::size_t>(network_->pool_of(id))];
      ++total;
    }
  }
  if (total != active_.size() || counts != active_by_pool_) throw InvariantViolation("active set bookkeeping drifted");
}

double update_activation(double a, double net, double rest, const Parameters& params) {
  double next;
  if (net > 0.0) {
    next = a + net * (params.max_act - a) - params.decay_rate * (a - rest);
  } else {
    next = a + net * (a - params.min_act) - params.decay_rate * (a - rest);
  }
  return std::clamp(next, params.min_act, params.max_act);
}

double canonical_sum(std::span<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

namespace {

double input_term(NodeId node, const SimulationState& state) {
  const auto& net = state.network();
  const auto ortho = net.pool(Pool::ortho);
  if (!ortho.contains(node)) return 0.0;
  const double source = state.activation(Network::input_node());
  if (!(source > 0.0)) return 0.0;
  return state.input_weights()[node - ortho.first] * source;
}

struct Scratch {
  std::vector<std::pair<NodeId, double>> contributions;
  std::vector<double> excitation;
  std::vector<double> inhibition;
  std::vector<double> products;
  std::vector<double> next;
  std::vector<double> values;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

}  // namespace

double net_input(NodeId node, const SimulationState& state) {
  auto& values = scratch().values;
  values.clear();
  for (const auto& c : state.network().incoming(node)) {
    const double a = state.activation(c.from);
    if (a > 0.0) values.push_back(c.weight * a);
  }
  return input_term(node, state) + canonical_sum(values);
}

double inhibition_sum(std::span<const double> products, const double* skip) {
  double sum = 0.0;
  bool skipped = skip == nullptr;
  for (double v : products) {
    if (!skipped && v == *skip) {
      skipped = true;
      continue;
    }
    sum += v;
  }
  return sum;
}

double apply_lateral_inhibition(std::span<const double> pool_active_activations, double own_activation, double gamma,
                                bool self_inhibition) {
  if (gamma == 0.0) return 0.0;
  std::vector<double> products;
  products.reserve(pool_active_activations.size());
  for (double a : pool_active_activations) {
    if (a > 0.0) products.push_back(gamma * a);
  }
  std::sort(products.begin(), products.end());
  const double own = gamma * own_activation;
  const bool skip = own_activation > 0.0 && !self_inhibition;
  return inhibition_sum(products, skip ? &own : nullptr);
}

double pool_gamma(Pool pool, const Parameters& params, const EngineOptions& options) {
  switch (pool) {
    case Pool::ortho:
      return params.oo_gamma;
    case Pool::phono:
      return params.pp_gamma;
    case Pool::sem:
      return options.inhibit_semantics ? params.ss_gamma : 0.0;
    case Pool::input:
    case Pool::lang:
      return 0.0;
  }
  return 0.0;
}

void step(SimulationState& state, const EngineOptions& options, WorkCounters& work) {
  const auto& net = state.network();
  const auto& params = state.params();
  const auto acts = state.activations();
  const std::size_t n = net.size();
  auto& s = scratch();

  // Phase 1: scatter excitation from the active set.
  s.contributions.clear();
  for (NodeId src : state.active()) {
    const double a = acts[src];
    for (const auto& c : net.outgoing(src)) s.contributions.emplace_back(c.to, c.weight * a);
    work.connection_visits += net.outgoing(src).size();
  }
  work.active_node_updates += state.active().size();
  std::sort(s.contributions.begin(), s.contributions.end());
  s.excitation.assign(n, 0.0);
  for (std::size_t k = 0; k < s.contributions.size();) {
    const NodeId to = s.contributions[k].first;
    double sum = 0.0;
    for (; k < s.contributions.size() && s.contributions[k].first == to; ++k) sum += s.contributions[k].second;
    s.excitation[to] = sum;
  }

  // Phase 2: same-pool inhibition from the same snapshot.
  s.inhibition.assign(n, 0.0);
  for (Pool pool : {Pool::ortho, Pool::phono, Pool::sem}) {
    const double gamma = pool_gamma(pool, params, options);
    if (gamma == 0.0 || state.active_count(pool) == 0) continue;
    const auto range = net.pool(pool);
    s.products.clear();
    for (NodeId id : state.active()) {
      if (range.contains(id)) s.products.push_back(gamma * acts[id]);
    }
    std::sort(s.products.begin(), s.products.end());
    const double full = inhibition_sum(s.products, nullptr);
    work.inhibition_terms += s.products.size();
    for (NodeId id = range.first; id < range.last; ++id) {
      if (state.is_active(id) && !options.self_inhibition) {
        const double own = gamma * acts[id];
        s.inhibition[id] = inhibition_sum(s.products, &own);
        work.inhibition_terms += s.products.size();
      } else {
        s.inhibition[id] = full;
      }
    }
  }

  // Phase 3: update.
  s.next.resize(n);
  s.next[Network::input_node()] = acts[Network::input_node()];
  const auto& nodes = net.nodes();
  for (NodeId id = 1; id < n; ++id) {
    const double total = (input_term(id, state) + s.excitation[id]) + s.inhibition[id];
    s.next[id] = update_activation(acts[id], total, nodes[id].rest, params);
  }
  state.commit(s.next);
}

RunResult drive(SimulationState& state, std::string_view stimulus, TaskMonitor& monitor, const RunOptions& options,
                const StepFunction& step_fn) {
  state.set_stimulus(stimulus);
  monitor.begin(state);
  RunResult result;
  const int max_cycles = state.params().max_cycles;
  bool decided = false;
  while (state.cycle() < max_cycles) {
    step_fn(state, result.work);
    if (options.verify_each_cycle) state.verify();
    if (options.record_history) {
      result.history.emplace_back(state.activations().begin(), state.activations().end());
    }
    auto& counts = result.active_counts.emplace_back();
    for (std::size_t p = 0; p < kPoolCount; ++p) counts[p] = state.active_count(static_cast<Pool>(p));
    if (!decided) decided = monitor.observe(state);
    if (decided && options.stop_on_decision) break;
  }
  result.cycles = state.cycle();
  result.outcome = monitor.finish(state);
  if (result.outcome.responded()) result.outcome.rt_pred = state.params().predicted_rt(result.outcome.cycle);
  return result;
}

RunResult run(const Network& network, std::string_view stimulus, TaskMonitor& monitor, const Parameters& params,
              const RunOptions& options) {
  SimulationState state(network, params);
  return drive(state, stimulus, monitor, options,
               [&options](SimulationState& s, WorkCounters& w) { step(s, options.engine, w); });
}

std::vector<NodeId> trace_nodes(const Network& network, const RunResult& result, std::size_t top_k) {
  const auto& nodes = network.nodes();
  std::vector<NodeId> picked;
  if (top_k == 0) {
    for (NodeId id = 1; id < nodes.size(); ++id) {
      for (const auto& snapshot : result.history) {
        if (snapshot[id] > nodes[id].rest) {
          picked.push_back(id);
          break;
        }
      }
    }
    return picked;
  }
  std::vector<std::pair<double, NodeId>> peaks;
  for (NodeId id = 1; id < nodes.size(); ++id) {
    double peak = nodes[id].rest;
    for (const auto& snapshot : result.history) peak = std::max(peak, snapshot[id]);
    peaks.emplace_back(peak, id);
  }
  std::sort(peaks.begin(), peaks.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  for (std::size_t k = 0; k < std::min(top_k, peaks.size()); ++k) picked.push_back(peaks[k].second);
  std::sort(picked.begin(), picked.end());
  return picked;
}

void write_trace_header(std::ostream& out, bool with_trial) {
  if (with_trial) out << "trial,";
  out << "cycle,node_id,pool,language,symbol,activation\n";
}

void write_trace_rows(std::ostream& out, const Network& network, const RunResult& result, std::size_t top_k,
                      std::string_view trial) {
  const auto ids = trace_nodes(network, result, top_k);
  for (std::size_t c = 0; c < result.history.size(); ++c) {
    for (NodeId id : ids) {
      const auto& node = network.node(id);
      if (!trial.empty()) out << trial << ',';
      out << c + 1 << ',' << id << ',' << pool_name(node.pool) << ','
          << (node.language < 0 ? std::string() : network.language_tag(node.language)) << ',' << node.label << ','
          << format_double(result.history[c][id]) << '\n';
    }
  }
}

}  // namespace lexsim
