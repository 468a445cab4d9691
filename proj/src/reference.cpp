#include "lexsim/reference.hpp"

#include <algorithm>

#include "lexsim/error.hpp"

namespace lexsim {

DenseNetwork::DenseNetwork(const Network& network, const Parameters& params, const EngineOptions& options,
                           std::size_t max_entries)
    : network_(&network) {
  if (network.entry_count() > max_entries) {
    throw ValidationError("dense engine refuses " + std::to_string(network.entry_count()) + " entries (limit " +
                          std::to_string(max_entries) + ")");
  }
  std::vector<Pool> pools{Pool::ortho, Pool::phono};
  if (options.inhibit_semantics) pools.push_back(Pool::sem);
  offsets_.assign(network.size() + 1, 0);
  for (Pool pool : pools) {
    const auto range = network.pool(pool);
    const std::size_t per_node = range.size() - (options.self_inhibition ? 0 : 1);
    for (NodeId to = range.first; to < range.last; ++to) offsets_[to + 1] = range.size() == 0 ? 0 : per_node;
  }
  for (std::size_t k = 1; k < offsets_.size(); ++k) offsets_[k] += offsets_[k - 1];
  inhibitory_.resize(offsets_.back());
  for (Pool pool : pools) {
    const double gamma = pool_gamma(pool, params, options);
    const auto range = network.pool(pool);
    for (NodeId to = range.first; to < range.last; ++to) {
      std::size_t k = offsets_[to];
      for (NodeId from = range.first; from < range.last; ++from) {
        if (from == to && !options.self_inhibition) continue;
        inhibitory_[k++] = {from, to, gamma};
      }
    }
  }
}

std::span<const Connection> DenseNetwork::inhibitory_incoming(NodeId id) const {
  return {inhibitory_.data() + offsets_.at(id), offsets_.at(id + 1) - offsets_.at(id)};
}

void dense_step(SimulationState& state, const DenseNetwork& dense, WorkCounters& work) {
  const auto& net = state.network();
  const auto& params = state.params();
  const auto acts = state.activations();
  const auto& nodes = net.nodes();
  std::vector<double> next(net.size());
  std::vector<double> values;
  next[Network::input_node()] = acts[Network::input_node()];
  work.active_node_updates += state.active().size();
  for (NodeId id = 1; id < net.size(); ++id) {
    const double excitation = net_input(id, state);
    work.connection_visits += net.incoming(id).size();
    values.clear();
    for (const auto& c : dense.inhibitory_incoming(id)) {
      const double a = acts[c.from];
      if (a > 0.0) values.push_back(c.weight * a);
    }
    work.inhibition_terms += dense.inhibitory_incoming(id).size();
    const double total = excitation + canonical_sum(values);
    next[id] = update_activation(acts[id], total, nodes[id].rest, params);
  }
  state.commit(next);
}

RunResult dense_run(const DenseNetwork& dense, std::string_view stimulus, TaskMonitor& monitor,
                    const Parameters& params, const RunOptions& options) {
  SimulationState state(dense.network(), params);
  return drive(state, stimulus, monitor, options,
               [&dense](SimulationState& s, WorkCounters& w) { dense_step(s, dense, w); });
}

namespace {

bool forms_shared(const Network& network, std::size_t c1, std::size_t c2) {
  for (int la = 0; la < 2; ++la) {
    for (int lb = 0; lb < 2; ++lb) {
      if (network.node(network.ortho_node(c1, la)).symbol == network.node(network.ortho_node(c2, lb)).symbol) {
        return true;
      }
      if (network.node(network.phono_node(c1, la)).symbol == network.node(network.phono_node(c2, lb)).symbol) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

bool semantic_path(const Network& network, NodeId a, NodeId b) {
  const auto& x = network.node(a);
  const auto& y = network.node(b);
  if (!x.concept_id || !y.concept_id) return false;
  if (*x.concept_id == *y.concept_id) return true;
  return forms_shared(network, *x.concept_id, *y.concept_id);
}

std::vector<PruneCount> prune_candidates(const Network& network, double threshold, const Parameters& params) {
  if (!(threshold >= 0.0)) throw DomainError("prune threshold must be >= 0");
  std::vector<PruneCount> out;
  for (Pool pool : {Pool::ortho, Pool::phono, Pool::sem}) {
    PruneCount count{pool, threshold, 0, 0};
    const auto range = network.pool(pool);
    for (NodeId a = range.first; a < range.last; ++a) {
      for (NodeId b = a + 1; b < range.last; ++b) {
        bool keep = semantic_path(network, a, b);
        if (!keep && pool != Pool::sem) {
          keep = input_weight(network.node(a).symbol, network.node(b).symbol, params) >= threshold;
        }
        ++(keep ? count.kept : count.dropped);
      }
    }
    out.push_back(count);
  }
  return out;
}

}  // namespace lexsim
