#include "lexsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "lexsim/error.hpp"
#include "json.hpp"

namespace lexsim {

namespace {

// Decodes UTF-8 into code points; stray bytes are kept as single units.
std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
      out.push_back(c);
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(c);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

const std::vector<Connection> kNoConnections;

}  // namespace

std::string_view pool_name(Pool pool) {
  switch (pool) {
    case Pool::input:
      return "INPUT";
    case Pool::ortho:
      return "ORTHO";
    case Pool::phono:
      return "PHONO";
    case Pool::sem:
      return "SEM";
    case Pool::lang:
      return "LANG";
  }
  return "?";
}

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  const auto s = decode_utf8(a);
  const auto t = decode_utf8(b);
  std::vector<std::size_t> row(t.size() + 1);
  for (std::size_t j = 0; j <= t.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (s[i - 1] == t[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[t.size()];
}

double levenshtein_similarity(std::string_view a, std::string_view b) {
  if (a.empty() || b.empty()) throw DomainError("levenshtein_similarity: empty symbol");
  const auto la = decode_utf8(a).size();
  const auto lb = decode_utf8(b).size();
  const double longest = static_cast<double>(std::max(la, lb));
  return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / longest;
}

double input_weight(std::string_view stimulus, std::string_view ortho_symbol, const Parameters& params) {
  const double score = levenshtein_similarity(stimulus, ortho_symbol);
  return score > 0.0 ? params.io_multiplier * score * score * score : 0.0;
}

std::vector<double> compute_input_weights(const Network& network, std::string_view stimulus,
                                          const Parameters& params) {
  if (stimulus.empty()) throw DomainError("empty stimulus");
  const auto range = network.pool(Pool::ortho);
  std::vector<double> weights(range.size());
  for (NodeId id = range.first; id < range.last; ++id) {
    weights[id - range.first] = input_weight(stimulus, network.node(id).symbol, params);
  }
  return weights;
}

Network Network::build(const Lexicon& lexicon, const Parameters& params) {
  params.validate();
  Network net;
  net.params_ = params;
  net.languages_ = {lexicon.language_a(), lexicon.language_b()};
  const std::size_t n = lexicon.size();
  net.entry_count_ = n;
  const double max_opb = lexicon.effective_max_opb(params);
  const auto formula = lexicon.options().opb_formula;

  auto add = [&net](Pool pool, std::string symbol, int language, double rest, std::optional<std::size_t> concept_id) {
    Node node;
    node.id = static_cast<NodeId>(net.nodes_.size());
    node.pool = pool;
    node.label = symbol;
    node.symbol = std::move(symbol);
    node.language = language;
    node.rest = rest;
    node.concept_id = concept_id;
    net.nodes_.push_back(std::move(node));
  };

  auto mark = [&net](Pool pool, NodeId first) {
    net.pools_[static_cast<std::size_t>(pool)] = {first, static_cast<NodeId>(net.nodes_.size())};
  };

  add(Pool::input, "INPUT", -1, params.input_rest, std::nullopt);
  mark(Pool::input, 0);
  add(Pool::lang, lexicon.language_a(), 0, params.lang_rest, std::nullopt);
  add(Pool::lang, lexicon.language_b(), 1, params.lang_rest, std::nullopt);
  mark(Pool::lang, 1);

  const auto& entries = lexicon.entries();
  NodeId first = static_cast<NodeId>(net.nodes_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = entries[i];
    add(Pool::ortho, e.ortho_a, 0, rest_activation(e.freq_a, max_opb, params, formula), i);
    add(Pool::ortho, e.ortho_b, 1, rest_activation(e.freq_b, max_opb, params, formula), i);
  }
  mark(Pool::ortho, first);
  first = static_cast<NodeId>(net.nodes_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = entries[i];
    add(Pool::phono, e.phono_a, 0, rest_activation(e.freq_a, max_opb, params, formula), i);
    add(Pool::phono, e.phono_b, 1, rest_activation(e.freq_b, max_opb, params, formula), i);
  }
  mark(Pool::phono, first);
  first = static_cast<NodeId>(net.nodes_.size());
  for (std::size_t i = 0; i < n; ++i) {
    add(Pool::sem, entries[i].ortho_b, -1, params.sem_rest, i);
  }
  mark(Pool::sem, first);

  // Repeated (language, orthographic form) pairs get concept-qualified labels.
  if (lexicon.options().duplicates == DuplicatePolicy::allow) {
    std::map<std::pair<int, std::string>, int> counts;
    const auto ortho = net.pool(Pool::ortho);
    for (NodeId id = ortho.first; id < ortho.last; ++id) ++counts[{net.nodes_[id].language, net.nodes_[id].symbol}];
    for (NodeId id = ortho.first; id < ortho.last; ++id) {
      auto& node = net.nodes_[id];
      if (counts[{node.language, node.symbol}] > 1) node.label = node.symbol + "#" + std::to_string(*node.concept_id);
    }
  }

  std::vector<Connection> all;
  all.reserve(n * 20);
  auto link = [&all](NodeId a, NodeId b, double ab, double ba) {
    all.push_back({a, b, ab});
    all.push_back({b, a, ba});
  };
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId s = net.sem_node(i);
    for (int lang = 0; lang < 2; ++lang) {
      const NodeId o = net.ortho_node(i, lang);
      const NodeId p = net.phono_node(i, lang);
      const NodeId l = net.language_node(lang);
      link(o, p, params.op_alpha, params.po_alpha);
      link(o, s, params.os_alpha, params.so_alpha);
      link(p, s, params.ps_alpha, params.sp_alpha);
      link(o, l, params.ol_alpha, params.lo_alpha);
      link(p, l, params.pl_alpha, params.lp_alpha);
    }
  }

  for (const auto& c : all) net.outgoing_[c.from].push_back(c);

  std::sort(all.begin(), all.end(), [](const Connection& x, const Connection& y) {
    return x.to != y.to ? x.to < y.to : x.from < y.from;
  });
  for (std::size_t k = 1; k < all.size(); ++k) {
    if (all[k].to == all[k - 1].to && all[k].from == all[k - 1].from) {
      throw InvariantViolation("duplicate connection " + std::to_string(all[k].from) + "->" +
                               std::to_string(all[k].to));
    }
  }
  net.incoming_offsets_.assign(net.nodes_.size() + 1, 0);
  for (const auto& c : all) ++net.incoming_offsets_[c.to + 1];
  for (std::size_t k = 1; k < net.incoming_offsets_.size(); ++k) {
    net.incoming_offsets_[k] += net.incoming_offsets_[k - 1];
  }
  net.incoming_ = std::move(all);
  return net;
}

std::optional<int> Network::language_index(std::string_view tag) const noexcept {
  for (int k = 0; k < 2; ++k) {
    if (languages_[static_cast<std::size_t>(k)] == tag) return k;
  }
  return std::nullopt;
}

NodeId Network::ortho_node(std::size_t entry, int language) const noexcept {
  return pool(Pool::ortho).first + static_cast<NodeId>(2 * entry + static_cast<std::size_t>(language));
}

NodeId Network::phono_node(std::size_t entry, int language) const noexcept {
  return pool(Pool::phono).first + static_cast<NodeId>(2 * entry + static_cast<std::size_t>(language));
}

NodeId Network::sem_node(std::size_t entry) const noexcept {
  return pool(Pool::sem).first + static_cast<NodeId>(entry);
}

const std::vector<Connection>& Network::outgoing(NodeId id) const {
  const auto it = outgoing_.find(id);
  return it == outgoing_.end() ? kNoConnections : it->second;
}

std::span<const Connection> Network::incoming(NodeId id) const {
  const auto begin = incoming_offsets_.at(id);
  const auto end = incoming_offsets_.at(id + 1);
  return {incoming_.data() + begin, end - begin};
}

std::optional<NodeId> Network::find(Pool pool_kind, int language, std::string_view label) const {
  const auto range = pool(pool_kind);
  for (NodeId id = range.first; id < range.last; ++id) {
    const auto& node = nodes_[id];
    if (node.language == language && node.label == label) return id;
  }
  return std::nullopt;
}

void write_network_csv(std::ostream& out, const Network& network) {
  out << "from,to,from_pool,to_pool,from_label,to_label,weight\n";
  for (NodeId to = 0; to < network.size(); ++to) {
    for (const auto& c : network.incoming(to)) {
      const auto& a = network.node(c.from);
      const auto& b = network.node(c.to);
      out << c.from << ',' << c.to << ',' << pool_name(a.pool) << ',' << pool_name(b.pool) << ',' << a.label << ','
          << b.label << ',' << format_double(c.weight) << '\n';
    }
  }
}

void write_network_json(std::ostream& out, const Network& network) {
  nlohmann::ordered_json doc;
  doc["languages"] = {network.language_tag(0), network.language_tag(1)};
  auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
  for (const auto& node : network.nodes()) {
    nlohmann::ordered_json j;
    j["id"] = node.id;
    j["pool"] = pool_name(node.pool);
    j["label"] = node.label;
    j["language"] = node.language < 0 ? nlohmann::ordered_json() : nlohmann::ordered_json(network.language_tag(node.language));
    j["rest"] = node.rest;
    j["concept"] = node.concept_id ? nlohmann::ordered_json(*node.concept_id) : nlohmann::ordered_json();
    auto& edges = j["outgoing"] = nlohmann::ordered_json::array();
    for (const auto& c : network.outgoing(node.id)) edges.push_back({{"to", c.to}, {"weight", c.weight}});
    nodes.push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace lexsim
