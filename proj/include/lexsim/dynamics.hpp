#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexsim/monitor.hpp"
#include "lexsim/network.hpp"
#include "lexsim/parameters.hpp"

namespace lexsim {

struct EngineOptions {
  // Apply SS_gamma within the semantic pool.
  bool inhibit_semantics = false;
  // Let an active node inhibit itself.
  bool self_inhibition = false;
};

// Deterministic work counters; used instead of wall clock in tests.
struct WorkCounters {
  std::uint64_t active_node_updates = 0;  // sum over cycles of |active set|
  std::uint64_t connection_visits = 0;    // excitatory connections traversed
  std::uint64_t inhibition_terms = 0;     // same-pool inhibitory terms summed

  std::uint64_t total() const noexcept { return active_node_updates + connection_visits + inhibition_terms; }
  WorkCounters& operator+=(const WorkCounters& o) noexcept {
    active_node_updates += o.active_node_updates;
    connection_visits += o.connection_visits;
    inhibition_terms += o.inhibition_terms;
    return *this;
  }
};

// Per-simulation mutable state over a shared immutable network.
class SimulationState {
 public:
  SimulationState(const Network& network, const Parameters& params);

  // Installs input weights for `stimulus` (upper-cased) and resets to rest.
  void set_stimulus(std::string_view stimulus);
  // Every node back to rest, active set cleared, cycle 0.
  void reset();

  const Network& network() const noexcept { return *network_; }
  const Parameters& params() const noexcept { return params_; }
  const std::string& stimulus() const noexcept { return stimulus_; }
  int cycle() const noexcept { return cycle_; }

  double activation(NodeId id) const { return activation_[id]; }
  std::span<const double> activations() const noexcept { return activation_; }
  // Input weight of an ORTHO node by its offset in the ORTHO pool.
  std::span<const double> input_weights() const noexcept { return input_weights_; }

  // Active nodes (activation > 0), INPUT excluded, in no particular order.
  const std::vector<NodeId>& active() const noexcept { return active_; }
  std::vector<NodeId> active_sorted() const;
  bool is_active(NodeId id) const { return active_pos_[id] != kNotActive; }
  std::size_t active_count(Pool pool) const noexcept { return active_by_pool_[static_cast<std::size_t>(pool)]; }

  // Overwrites one activation and keeps the active set in step.
  void set_activation(NodeId id, double value);

  // Installs the next activations, advances the cycle and updates the
  // active set for every node whose value changed.
  void commit(std::vector<double>& next);

  // Recomputes the active set from scratch; throws InvariantViolation on
  // any mismatch or an activation outside [MIN_ACT, MAX_ACT].
  void verify() const;

 private:
  static constexpr std::uint32_t kNotActive = 0xFFFFFFFFu;

  void insert_active(NodeId id);
  void erase_active(NodeId id);

  const Network* network_;
  Parameters params_;
  std::string stimulus_;
  int cycle_ = 0;
  std::vector<double> activation_;
  std::vector<double> input_weights_;
  std::vector<NodeId> active_;
  std::vector<std::uint32_t> active_pos_;
  std::array<std::size_t, kPoolCount> active_by_pool_{};
};

// IA update with clamping to [MIN_ACT, MAX_ACT].
double update_activation(double a, double net, double rest, const Parameters& params);

// Excitatory net input of `node` from the state's current activations:
// sorted sum of weight * activation over active sources, plus the input term.
double net_input(NodeId node, const SimulationState& state);

// gamma times the summed activation of the other active same-pool nodes.
// `own_activation` is the node's own value; it is skipped once when positive
// unless self inhibition is on.
double apply_lateral_inhibition(std::span<const double> pool_active_activations, double own_activation, double gamma,
                                bool self_inhibition = false);

// Sum of ascending-sorted `products`, leaving out one element equal to
// `skip` when given.
double inhibition_sum(std::span<const double> products, const double* skip);

// Inhibition weight applied within a pool; 0 for pools without a step.
double pool_gamma(Pool pool, const Parameters& params, const EngineOptions& options);

// Sums values in ascending order; the canonical summation both engines use.
double canonical_sum(std::span<double> values);

// One cycle of the active-set engine.
void step(SimulationState& state, const EngineOptions& options, WorkCounters& work);

struct RunOptions {
  EngineOptions engine;
  bool record_history = false;     // keep every cycle's activation vector
  bool stop_on_decision = true;    // false runs all max_cycles regardless
  bool verify_each_cycle = false;  // full active-set recomputation per cycle
};

struct RunResult {
  TaskOutcome outcome;
  int cycles = 0;
  // history[c] holds the activations after cycle c + 1.
  std::vector<std::vector<double>> history;
  // Active-set size per pool after each cycle.
  std::vector<std::array<std::size_t, kPoolCount>> active_counts;
  WorkCounters work;
};

using StepFunction = std::function<void(SimulationState&, WorkCounters&)>;

// Shared driver: set stimulus, step up to max_cycles, feed the monitor.
RunResult drive(SimulationState& state, std::string_view stimulus, TaskMonitor& monitor, const RunOptions& options,
                const StepFunction& step_fn);

RunResult run(const Network& network, std::string_view stimulus, TaskMonitor& monitor, const Parameters& params,
              const RunOptions& options = {});

// Trace CSV: cycle,node_id,pool,language,symbol,activation. With top_k = 0
// every node that rose above rest is sampled; otherwise the k nodes with
// the highest peak activation. A non-empty `trial` adds a leading trial
// column for batch traces.
std::vector<NodeId> trace_nodes(const Network& network, const RunResult& result, std::size_t top_k);
void write_trace_header(std::ostream& out, bool with_trial);
void write_trace_rows(std::ostream& out, const Network& network, const RunResult& result, std::size_t top_k,
                      std::string_view trial = {});

}  // namespace lexsim
