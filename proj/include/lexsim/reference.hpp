#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "lexsim/dynamics.hpp"
#include "lexsim/network.hpp"

namespace lexsim {

inline constexpr std::size_t kDefaultDenseLimit = 500;

// Baseline engine: every same-pool inhibitory link is a stored connection
// summed in phase 1 alongside the excitatory ones.
class DenseNetwork {
 public:
  // Refuses (ValidationError) lexicons with more than `max_entries` pairs.
  DenseNetwork(const Network& network, const Parameters& params, const EngineOptions& options,
               std::size_t max_entries = kDefaultDenseLimit);

  const Network& network() const noexcept { return *network_; }
  // Inhibitory connections into `id`, sorted by origin.
  std::span<const Connection> inhibitory_incoming(NodeId id) const;
  std::size_t inhibitory_count() const noexcept { return inhibitory_.size(); }

 private:
  const Network* network_;
  std::vector<Connection> inhibitory_;
  std::vector<std::size_t> offsets_;
};

// One cycle: gather over all incoming connections of every node.
void dense_step(SimulationState& state, const DenseNetwork& dense, WorkCounters& work);

RunResult dense_run(const DenseNetwork& dense, std::string_view stimulus, TaskMonitor& monitor,
                    const Parameters& params, const RunOptions& options = {});

struct PruneCount {
  Pool pool = Pool::ortho;
  double threshold = 0.0;
  std::size_t kept = 0;
  std::size_t dropped = 0;
};

// For every unordered same-pool pair, keep it when the form-based weight
// IO_multiplier * similarity^3 reaches `threshold` or the two nodes are
// semantically linked: same concept, or concepts sharing a word form.
std::vector<PruneCount> prune_candidates(const Network& network, double threshold, const Parameters& params);

// True when the two nodes' concepts coincide or share a word form.
bool semantic_path(const Network& network, NodeId a, NodeId b);

}  // namespace lexsim
