#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lexsim/dynamics.hpp"
#include "lexsim/monitor.hpp"

namespace lexsim {

enum class Task { lexical_decision, naming, word_translation };

// LD, NAME and WT.
std::string_view task_name(Task task);
Task parse_task(std::string_view name);

// Never decides; used for fixed-length runs.
class NullMonitor final : public TaskMonitor {
 public:
  void begin(const SimulationState&) override {}
  bool observe(const SimulationState&) override { return false; }
  TaskOutcome finish(const SimulationState& state) override;
};

// YES once an ORTHO node of the target language reaches criterion_value,
// NO after max_cycles.
class LexicalDecision final : public TaskMonitor {
 public:
  explicit LexicalDecision(int target_language) : target_(target_language) {}

  void begin(const SimulationState& state) override;
  bool observe(const SimulationState& state) override;
  TaskOutcome finish(const SimulationState& state) override;

 private:
  int target_;
  std::optional<TaskOutcome> decision_;
};

// Returns the first PHONO node of the target language reaching criterion.
class Naming final : public TaskMonitor {
 public:
  explicit Naming(int target_language) : target_(target_language) {}

  void begin(const SimulationState& state) override;
  bool observe(const SimulationState& state) override;
  TaskOutcome finish(const SimulationState& state) override;

 private:
  int target_;
  std::optional<TaskOutcome> decision_;
};

// Two-stage translation: an input shortlist identifies the source-language
// reading of the stimulus, an output shortlist admits PHONO candidates and
// accepts the first one in the target language that shares its concept.
class WordTranslation final : public TaskMonitor {
 public:
  WordTranslation(int source_language, int target_language, bool semantic_check = true);

  void begin(const SimulationState& state) override;
  bool observe(const SimulationState& state) override;
  TaskOutcome finish(const SimulationState& state) override;

 private:
  enum class Status { pending, rejected, accepted };

  void identify_input(const SimulationState& state);
  void reject(const SimulationState& state, NodeId id, const char* reason);

  int source_;
  int target_;
  bool semantic_check_;
  std::optional<NodeId> input_node_;
  std::set<NodeId> input_seen_;
  std::set<NodeId> input_rejected_;
  std::map<NodeId, Status> output_;
  TaskOutcome outcome_;
  bool decided_ = false;
};

// Nodes of `pool` in `language` whose activation is at least `threshold`,
// by activation descending then id ascending. Only active nodes qualify.
std::vector<NodeId> ranked_candidates(const SimulationState& state, Pool pool, int language, double threshold);

}  // namespace lexsim
