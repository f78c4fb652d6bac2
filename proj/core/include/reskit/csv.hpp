#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace reskit::csv {

/// Shortest round-trip decimal representation of a double. The same value
/// always yields the same bytes, so repeated exports are byte-identical and
/// an export/import cycle reproduces the exact bit pattern.
std::string format_double(double value);

std::string format_int(long value);

/// Strict double parse: the whole field must be consumed. Throws
/// ConfigError on garbage.
double parse_double(std::string_view field);

long parse_int(std::string_view field);

/// Split one CSV line on commas. No quoting; the formats used here never
/// contain embedded commas.
std::vector<std::string> split_line(std::string_view line);

/// Join fields with commas and terminate with LF.
std::string join_line(const std::vector<std::string>& fields);

} // namespace reskit::csv
