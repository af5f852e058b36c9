#include "smcsweep/blackbox/wire.hpp"

#include <charconv>
#include <cmath>

namespace smcsweep::blackbox::wire {

std::string encode_reset(std::uint64_t seed) { return "reset " + std::to_string(seed) + "\n"; }

std::string encode_next() { return "next\n"; }

std::string encode_observe(std::string_view name) {
  if (name.empty()) throw ProtocolMisuse("empty observable name");
  for (char c : name) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
      throw ProtocolMisuse("observable name '" + std::string(name) + "' contains whitespace");
    }
  }
  if (name == "next" || name.rfind("reset", 0) == 0) {
    throw ProtocolMisuse("observable name '" + std::string(name) + "' collides with a protocol command");
  }
  return std::string(name) + "\n";
}

std::optional<double> parse_response(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (line.substr(0, kResponsePrefix.size()) != kResponsePrefix) return std::nullopt;
  line.remove_prefix(kResponsePrefix.size());
  if (line.empty()) return std::nullopt;
  double value = 0.0;
  auto [end, ec] = std::from_chars(line.data(), line.data() + line.size(), value, std::chars_format::general);
  if (ec != std::errc() || end != line.data() + line.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace smcsweep::blackbox::wire
