#include "lexsim/manifest.hpp"

#include <array>
#include <sstream>

#include "json.hpp"

namespace lexsim {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
    value >>= 4;
  }
  return out;
}

std::string lexicon_hash(const Lexicon& lexicon) {
  std::ostringstream text;
  write_lexicon(text, lexicon);
  return hex64(fnv1a64(text.str()));
}

std::string RunManifest::to_json() const {
  nlohmann::json doc;
  doc["command"] = command;
  doc["version"] = std::string(kVersion);
  doc["deterministic"] = true;
  doc["lexicon"] = {{"path", lexicon_path}, {"hash", lexicon_hash}};
  auto& p = doc["parameters"] = nlohmann::json::object();
  for (const auto& name : Parameters::names()) {
    const auto v = params.get(name);
    p[name] = v ? format_double(*v) : std::string("auto");
  }
  doc["options"] = options;
  return doc.dump();
}

std::string RunManifest::hash() const { return hex64(fnv1a64(to_json())); }

}  // namespace lexsim
