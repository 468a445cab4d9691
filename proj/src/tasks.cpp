#include "lexsim/tasks.hpp"

#include <algorithm>

#include "lexsim/error.hpp"

namespace lexsim {

std::string_view response_kind_name(ResponseKind kind) {
  switch (kind) {
    case ResponseKind::yes:
      return "YES";
    case ResponseKind::no:
      return "NO";
    case ResponseKind::symbol:
      return "symbol";
    case ResponseKind::none:
      return "none";
  }
  return "none";
}

std::string_view task_name(Task task) {
  switch (task) {
    case Task::lexical_decision:
      return "LD";
    case Task::naming:
      return "NAME";
    case Task::word_translation:
      return "WT";
  }
  return "?";
}

Task parse_task(std::string_view name) {
  if (name == "LD") return Task::lexical_decision;
  if (name == "NAME") return Task::naming;
  if (name == "WT") return Task::word_translation;
  throw ConfigError("unknown task '" + std::string(name) + "' (expected LD, NAME or WT)");
}

std::vector<NodeId> ranked_candidates(const SimulationState& state, Pool pool, int language, double threshold) {
  const auto& net = state.network();
  std::vector<NodeId> out;
  for (NodeId id : state.active()) {
    const auto& node = net.node(id);
    if (node.pool != pool || (language >= 0 && node.language != language)) continue;
    if (state.activation(id) >= threshold) out.push_back(id);
  }
  std::sort(out.begin(), out.end(), [&state](NodeId a, NodeId b) {
    const double x = state.activation(a);
    const double y = state.activation(b);
    return x != y ? x > y : a < b;
  });
  return out;
}

namespace {

TaskOutcome undecided(const SimulationState& state, ResponseKind kind, std::string failure) {
  TaskOutcome out;
  out.kind = kind;
  out.cycle = state.cycle();
  out.failure = std::move(failure);
  return out;
}

TaskOutcome pick(const SimulationState& state, NodeId id, ResponseKind kind) {
  TaskOutcome out;
  out.kind = kind;
  out.node = id;
  out.symbol = state.network().node(id).label;
  out.cycle = state.cycle();
  return out;
}

void check_language(int language) {
  if (language < 0 || language > 1) throw ConfigError("language index out of range");
}

}  // namespace

TaskOutcome NullMonitor::finish(const SimulationState& state) {
  return undecided(state, ResponseKind::none, "timeout");
}

void LexicalDecision::begin(const SimulationState&) {
  check_language(target_);
  decision_.reset();
}

bool LexicalDecision::observe(const SimulationState& state) {
  const auto hits = ranked_candidates(state, Pool::ortho, target_, state.params().criterion);
  if (hits.empty()) return false;
  decision_ = pick(state, hits.front(), ResponseKind::yes);
  return true;
}

TaskOutcome LexicalDecision::finish(const SimulationState& state) {
  return decision_ ? *decision_ : undecided(state, ResponseKind::no, "timeout");
}

void Naming::begin(const SimulationState&) {
  check_language(target_);
  decision_.reset();
}

bool Naming::observe(const SimulationState& state) {
  const auto hits = ranked_candidates(state, Pool::phono, target_, state.params().criterion);
  if (hits.empty()) return false;
  decision_ = pick(state, hits.front(), ResponseKind::symbol);
  return true;
}

TaskOutcome Naming::finish(const SimulationState& state) {
  return decision_ ? *decision_ : undecided(state, ResponseKind::none, "timeout");
}

WordTranslation::WordTranslation(int source_language, int target_language, bool semantic_check)
    : source_(source_language), target_(target_language), semantic_check_(semantic_check) {
  if (source_ == target_) throw ConfigError("word translation needs distinct source and target languages");
}

void WordTranslation::begin(const SimulationState&) {
  check_language(source_);
  check_language(target_);
  input_node_.reset();
  input_seen_.clear();
  input_rejected_.clear();
  output_.clear();
  outcome_ = TaskOutcome{};
  decided_ = false;
}

void WordTranslation::identify_input(const SimulationState& state) {
  const auto& net = state.network();
  const auto shortlist = ranked_candidates(state, Pool::ortho, -1, state.params().shortlist_input_threshold);
  for (NodeId id : shortlist) {
    if (input_seen_.insert(id).second) {
      outcome_.input_shortlist.push_back({id, net.node(id).label, state.cycle(), state.activation(id)});
    }
  }
  for (NodeId id : shortlist) {
    if (net.node(id).language == source_) {
      input_node_ = id;
      outcome_.input_node = id;
      return;
    }
    if (input_rejected_.insert(id).second) {
      outcome_.rejected.push_back({id, net.node(id).label, state.cycle(), "wrong_language"});
    }
  }
}

void WordTranslation::reject(const SimulationState& state, NodeId id, const char* reason) {
  output_[id] = Status::rejected;
  outcome_.rejected.push_back({id, state.network().node(id).label, state.cycle(), reason});
}

bool WordTranslation::observe(const SimulationState& state) {
  if (decided_) return true;
  const auto& net = state.network();
  const auto& params = state.params();
  if (!input_node_) identify_input(state);

  for (NodeId id : ranked_candidates(state, Pool::phono, -1, params.shortlist_output_threshold)) {
    if (output_.emplace(id, Status::pending).second) {
      outcome_.output_shortlist.push_back({id, net.node(id).label, state.cycle(), state.activation(id)});
    }
  }
  if (!input_node_) return false;

  const auto input_concept = net.node(*input_node_).concept_id;
  for (NodeId id : ranked_candidates(state, Pool::phono, -1, params.criterion)) {
    const auto it = output_.find(id);
    if (it == output_.end() || it->second != Status::pending) continue;
    const auto& node = net.node(id);
    if (node.language != target_) {
      reject(state, id, "wrong_language");
      continue;
    }
    if (semantic_check_ && node.concept_id != input_concept) {
      reject(state, id, "wrong_concept");
      continue;
    }
    it->second = Status::accepted;
    outcome_.kind = ResponseKind::symbol;
    outcome_.node = id;
    outcome_.symbol = node.label;
    outcome_.cycle = state.cycle();
    decided_ = true;
    return true;
  }
  return false;
}

TaskOutcome WordTranslation::finish(const SimulationState& state) {
  TaskOutcome out = outcome_;
  if (!decided_) {
    out.kind = ResponseKind::none;
    out.cycle = state.cycle();
    out.failure = input_node_ ? "no_output" : "no_input_node";
  }
  return out;
}

}  // namespace lexsim
