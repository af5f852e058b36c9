#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "smcsweep/blackbox/simulator.hpp"

namespace smcsweep::blackbox::wire {

inline constexpr std::string_view kResponsePrefix = "OUTPUTMV:";

class MalformedResponse : public SimulatorError {
 public:
  using SimulatorError::SimulatorError;
};

std::string encode_reset(std::uint64_t seed);  // "reset <seed>\n"
std::string encode_next();                     // "next\n"

// "<name>\n". Throws ProtocolMisuse for names the server would misread:
// empty, containing whitespace, "next", or starting with "reset".
std::string encode_observe(std::string_view name);

// Parses one response line (without its newline). A trailing '\r' is tolerated.
// Returns nullopt unless the line is exactly `OUTPUTMV:<finite real>`.
std::optional<double> parse_response(std::string_view line);

}  // namespace smcsweep::blackbox::wire
