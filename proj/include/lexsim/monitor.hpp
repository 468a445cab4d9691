#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lexsim/network.hpp"

namespace lexsim {

class SimulationState;

enum class ResponseKind { yes, no, symbol, none };

std::string_view response_kind_name(ResponseKind kind);

struct Rejection {
  NodeId node = 0;
  std::string label;
  int cycle = 0;
  std::string reason;  // wrong_language, wrong_concept
};

// A candidate entering a shortlist.
struct ShortlistEntry {
  NodeId node = 0;
  std::string label;
  int cycle = 0;
  double activation = 0.0;
};

struct TaskOutcome {
  ResponseKind kind = ResponseKind::none;
  std::string symbol;  // label of the selected node, if any
  std::optional<NodeId> node;
  int cycle = 0;       // decision cycle; cycles run when there is no decision
  double rt_pred = 0.0;
  std::optional<NodeId> input_node;
  std::string failure;  // empty, timeout, no_input_node or no_output
  std::vector<Rejection> rejected;
  std::vector<ShortlistEntry> input_shortlist;
  std::vector<ShortlistEntry> output_shortlist;

  // True for YES and symbol responses, the trials that carry a usable RT.
  bool responded() const noexcept { return kind == ResponseKind::yes || kind == ResponseKind::symbol; }
};

// Per-trial decision procedure fed the state after every cycle.
class TaskMonitor {
 public:
  virtual ~TaskMonitor() = default;

  // Clears per-trial state. Called once before the first cycle.
  virtual void begin(const SimulationState& state) = 0;
  // Returns true once a decision has been taken.
  virtual bool observe(const SimulationState& state) = 0;
  // Outcome after the last cycle run.
  virtual TaskOutcome finish(const SimulationState& state) = 0;
};

}  // namespace lexsim
