#include "lexsim/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "lexsim/error.hpp"

namespace lexsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

constexpr std::size_t kColumns = 8;

// Reads a `<tag>:O` style header cell.
std::string header_language(std::string_view cell) {
  const auto colon = cell.find(':');
  if (colon == std::string_view::npos || colon == 0) return {};
  return std::string(trim(cell.substr(0, colon)));
}

double read_frequency(std::string_view cell, std::size_t row, const char* column) {
  const auto v = parse_double(cell);
  if (!v) throw ParseError(row, std::string(column) + ": not a number: '" + std::string(cell) + "'");
  if (!std::isfinite(*v)) throw ParseError(row, std::string(column) + ": frequency must be finite");
  if (*v < 0.0) throw ParseError(row, std::string(column) + ": negative frequency");
  return *v;
}

}  // namespace

std::string to_upper(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

double opb(double freq, OpbFormula formula) {
  if (!(freq >= 0.0)) throw DomainError("opb: frequency must be >= 0");
  switch (formula) {
    case OpbFormula::per_billion:
      return std::log10(1.0 + freq * 1000.0);
    case OpbFormula::per_million:
      return std::log10(1.0 + freq);
  }
  throw InvariantViolation("opb: unknown formula");
}

double rest_activation(double freq, double max_opb, const Parameters& params, OpbFormula formula) {
  const double value = opb(freq, formula);
  if (value == 0.0) return params.min_rest;
  if (!(max_opb > 0.0)) throw DomainError("rest_activation: max_opb must be > 0 for non-zero frequency");
  const double rest = params.min_rest + value * (std::abs(params.min_rest) / max_opb);
  return std::clamp(rest, params.min_rest, params.max_rest);
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries, std::string language_a, std::string language_b,
                 LexiconOptions options)
    : entries_(std::move(entries)),
      language_a_(std::move(language_a)),
      language_b_(std::move(language_b)),
      options_(std::move(options)) {
  if (language_a_.empty() || language_b_.empty()) throw ValidationError("language tags must be non-empty");
  if (language_a_ == language_b_) throw ValidationError("the two language tags must differ");

  std::set<std::pair<int, std::string>> seen;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto& e = entries_[i];
    e.ortho_a = to_upper(e.ortho_a);
    e.ortho_b = to_upper(e.ortho_b);
    if (e.ortho_a.empty() || e.phono_a.empty() || e.ortho_b.empty() || e.phono_b.empty()) {
      throw ValidationError("entry " + std::to_string(i) + ": empty symbol");
    }
    for (double f : {e.freq_a, e.freq_b}) {
      if (!std::isfinite(f) || f < 0.0) {
        throw ValidationError("entry " + std::to_string(i) + ": frequency must be finite and >= 0");
      }
    }
    if (options_.duplicates == DuplicatePolicy::reject) {
      if (!seen.emplace(0, e.ortho_a).second) {
        throw ValidationError("entry " + std::to_string(i) + ": duplicate " + language_a_ + " form '" +
                              e.ortho_a + "'");
      }
      if (!seen.emplace(1, e.ortho_b).second) {
        throw ValidationError("entry " + std::to_string(i) + ": duplicate " + language_b_ + " form '" +
                              e.ortho_b + "'");
      }
    }
    max_opb_ = std::max({max_opb_, opb(e.freq_a, options_.opb_formula), opb(e.freq_b, options_.opb_formula)});
  }
}

Lexicon parse_lexicon(std::istream& in, const LexiconOptions& options) {
  std::vector<LexiconEntry> entries;
  std::string language_a = options.language_a;
  std::string language_b = options.language_b;
  std::string line;
  std::size_t row = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++row;
    std::string_view view = trim(line);
    if (row == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (view.empty()) continue;
    const auto cells = split(view, ',');
    if (cells.size() != kColumns) {
      throw ParseError(row, "expected " + std::to_string(kColumns) + " columns, got " +
                                std::to_string(cells.size()));
    }
    if (first_content) {
      first_content = false;
      // A header has a non-numeric frequency column.
      if (!parse_double(cells[1])) {
        if (auto a = header_language(cells[0]); !a.empty()) language_a = a;
        if (auto b = header_language(cells[4]); !b.empty()) language_b = b;
        continue;
      }
    }
    LexiconEntry e;
    e.ortho_a = std::string(cells[0]);
    e.freq_a = read_frequency(cells[1], row, "column 2");
    e.phono_a = std::string(cells[2]);
    read_frequency(cells[3], row, "column 4");
    e.ortho_b = std::string(cells[4]);
    e.freq_b = read_frequency(cells[5], row, "column 6");
    e.phono_b = std::string(cells[6]);
    read_frequency(cells[7], row, "column 8");
    for (std::size_t c : {0u, 2u, 4u, 6u}) {
      if (cells[c].empty()) throw ParseError(row, "column " + std::to_string(c + 1) + ": empty symbol");
    }
    if (options.scale_l2) e.freq_b /= 4.0;
    entries.push_back(std::move(e));
  }
  return Lexicon(std::move(entries), std::move(language_a), std::move(language_b), options);
}

Lexicon parse_lexicon(std::string_view text, const LexiconOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_lexicon(in, options);
}

Lexicon load_lexicon(const std::string& path, const LexiconOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon '" + path + "'");
  return parse_lexicon(in, options);
}

void write_lexicon(std::ostream& out, const Lexicon& lexicon) {
  const auto& a = lexicon.language_a();
  const auto& b = lexicon.language_b();
  out << a << ":O," << a << ":f," << a << ":P," << a << ":f," << b << ":O," << b << ":f," << b << ":P," << b
      << ":f\n";
  for (const auto& e : lexicon.entries()) {
    const auto fa = format_double(e.freq_a);
    const auto fb = format_double(e.freq_b);
    out << e.ortho_a << ',' << fa << ',' << e.phono_a << ',' << fa << ',' << e.ortho_b << ',' << fb << ','
        << e.phono_b << ',' << fb << '\n';
  }
}

}  // namespace lexsim
