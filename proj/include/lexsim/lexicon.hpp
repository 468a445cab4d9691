#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lexsim/parameters.hpp"

namespace lexsim {

// One translation pair. Phonological readings share the frequency of their
// orthographic sibling.
struct LexiconEntry {
  std::string ortho_a;
  double freq_a = 0.0;  // occurrences per million
  std::string phono_a;  // SAMPA
  std::string ortho_b;
  double freq_b = 0.0;
  std::string phono_b;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

enum class DuplicatePolicy {
  reject,  // a (language, orthographic form) pair may occur once
  allow,   // repeated forms become distinct nodes named symbol#concept
};

// How word frequency maps to the OPB quantity behind resting levels.
enum class OpbFormula {
  per_billion,  // log10(1 + 1000 f): log occurrences per billion
  per_million,  // log10(1 + f)
};

struct LexiconOptions {
  DuplicatePolicy duplicates = DuplicatePolicy::reject;
  bool scale_l2 = false;  // divide language-B frequencies by 4 at load
  OpbFormula opb_formula = OpbFormula::per_billion;
  // Language tags used when the file has no `<tag>:O` header.
  std::string language_a = "NL";
  std::string language_b = "EN";
};

class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::vector<LexiconEntry> entries, std::string language_a, std::string language_b,
          LexiconOptions options = {});

  const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::string& language_a() const noexcept { return language_a_; }
  const std::string& language_b() const noexcept { return language_b_; }
  const LexiconOptions& options() const noexcept { return options_; }

  // Maximum OPB over every loaded reading; 0 for an empty lexicon.
  double max_opb() const noexcept { return max_opb_; }

  // The MAX_OPB parameter when set, the lexicon maximum otherwise.
  double effective_max_opb(const Parameters& params) const noexcept {
    return params.max_opb ? *params.max_opb : max_opb_;
  }

  // True when `tag` names one of the two languages.
  bool has_language(std::string_view tag) const noexcept {
    return tag == language_a_ || tag == language_b_;
  }

 private:
  std::vector<LexiconEntry> entries_;
  std::string language_a_ = "NL";
  std::string language_b_ = "EN";
  LexiconOptions options_;
  double max_opb_ = 0.0;
};

// Reads the 8-column CSV (O_a, f, P_a, f, O_b, f, P_b, f) with an optional
// header row. Orthographic forms are upper-cased; phonological forms are
// kept byte-exact.
Lexicon parse_lexicon(std::istream& in, const LexiconOptions& options = {});
Lexicon parse_lexicon(std::string_view text, const LexiconOptions& options = {});
Lexicon load_lexicon(const std::string& path, const LexiconOptions& options = {});

// Writes the lexicon back as CSV, frequencies in shortest round-trip form.
void write_lexicon(std::ostream& out, const Lexicon& lexicon);

// OPB value of a frequency; monotone and zero at zero.
double opb(double freq, OpbFormula formula = OpbFormula::per_billion);

// Resting level in [MIN_REST, MAX_REST].
double rest_activation(double freq, double max_opb, const Parameters& params,
                       OpbFormula formula = OpbFormula::per_billion);

// ASCII upper-casing used for orthographic symbols and stimuli.
std::string to_upper(std::string_view text);

}  // namespace lexsim
