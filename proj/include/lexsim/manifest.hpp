#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "lexsim/lexicon.hpp"
#include "lexsim/parameters.hpp"

namespace lexsim {

inline constexpr std::string_view kVersion = "1.0.0";

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

// Hash of the lexicon as loaded (canonical CSV serialization).
std::string lexicon_hash(const Lexicon& lexicon);

// Everything an output depends on. Thread counts and output paths are
// deliberately absent.
struct RunManifest {
  std::string command;
  Parameters params;
  std::string lexicon_path;
  std::string lexicon_hash;
  std::map<std::string, std::string> options;

  // Canonical JSON: sorted keys, no whitespace.
  std::string to_json() const;
  std::string hash() const;
};

}  // namespace lexsim
