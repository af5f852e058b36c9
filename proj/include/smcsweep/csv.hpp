#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smcsweep::csv {

// Shortest representation that parses back to the same double; independent of locale.
std::string format_double(double value);

// Strict locale-independent parse of a whole field; nullopt on trailing garbage.
std::optional<double> parse_double(std::string_view text);

std::string escape(std::string_view field);

// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_record(std::string_view line);

}  // namespace smcsweep::csv
