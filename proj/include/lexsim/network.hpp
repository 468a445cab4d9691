#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexsim/lexicon.hpp"
#include "lexsim/parameters.hpp"

namespace lexsim {

using NodeId = std::uint32_t;

enum class Pool : std::uint8_t { input, ortho, phono, sem, lang };

inline constexpr std::size_t kPoolCount = 5;

std::string_view pool_name(Pool pool);

struct Node {
  NodeId id = 0;
  Pool pool = Pool::input;
  std::string symbol;
  std::string label;  // symbol, or symbol#concept for permitted duplicates
  int language = -1;  // 0 = language A, 1 = language B, -1 = none
  double rest = 0.0;
  std::optional<std::size_t> concept_id;  // entry index for ORTHO/PHONO/SEM
};

struct Connection {
  NodeId from = 0;
  NodeId to = 0;
  double weight = 0.0;
};

struct PoolRange {
  NodeId first = 0;
  NodeId last = 0;  // one past the end

  std::size_t size() const noexcept { return last - first; }
  bool contains(NodeId id) const noexcept { return id >= first && id < last; }
};

// Immutable lexical network: node pools plus the sparse excitatory wiring.
// Ids are dense and laid out as INPUT, LANG a, LANG b, then the ORTHO, PHONO
// and SEM pools; ORTHO and PHONO interleave language a and b per entry.
// Same-pool inhibition is never stored here.
class Network {
 public:
  static Network build(const Lexicon& lexicon, const Parameters& params);

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  PoolRange pool(Pool pool) const noexcept { return pools_[static_cast<std::size_t>(pool)]; }
  Pool pool_of(NodeId id) const noexcept { return nodes_[id].pool; }

  static constexpr NodeId input_node() noexcept { return 0; }
  NodeId language_node(int language) const noexcept { return static_cast<NodeId>(1 + language); }

  const std::string& language_tag(int language) const { return languages_.at(static_cast<std::size_t>(language)); }
  // Index of a language tag, or nullopt when unknown.
  std::optional<int> language_index(std::string_view tag) const noexcept;

  std::size_t entry_count() const noexcept { return entry_count_; }
  NodeId ortho_node(std::size_t entry, int language) const noexcept;
  NodeId phono_node(std::size_t entry, int language) const noexcept;
  NodeId sem_node(std::size_t entry) const noexcept;

  // Outgoing connections of a node, looked up by id. Empty when none.
  const std::vector<Connection>& outgoing(NodeId id) const;
  // Incoming connections, sorted by origin id.
  std::span<const Connection> incoming(NodeId id) const;

  std::size_t connection_count() const noexcept { return incoming_.size(); }

  // Finds a node by pool, language and display label.
  std::optional<NodeId> find(Pool pool, int language, std::string_view label) const;

  // Parameters the structure was built with (rest levels and alpha weights).
  const Parameters& build_parameters() const noexcept { return params_; }

 private:
  std::vector<Node> nodes_;
  std::array<PoolRange, kPoolCount> pools_{};
  std::array<std::string, 2> languages_;
  std::size_t entry_count_ = 0;
  std::unordered_map<NodeId, std::vector<Connection>> outgoing_;
  std::vector<Connection> incoming_;
  std::vector<std::size_t> incoming_offsets_;
  Parameters params_;
};

// Unit-cost insert/delete/substitute edit distance over code points.
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

// 1 - distance / max(length). Throws DomainError for an empty symbol.
double levenshtein_similarity(std::string_view a, std::string_view b);

// IO_multiplier * similarity^3 when the similarity is positive, else 0.
double input_weight(std::string_view stimulus, std::string_view ortho_symbol, const Parameters& params);

// Input weights for every ORTHO node, indexed by offset in the ORTHO pool.
std::vector<double> compute_input_weights(const Network& network, std::string_view stimulus,
                                          const Parameters& params);

// Debug dumps; not a stable format.
void write_network_csv(std::ostream& out, const Network& network);
void write_network_json(std::ostream& out, const Network& network);

}  // namespace lexsim
