#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace covtrend::csv {

using Row = std::vector<std::string>;

/// Splits RFC-4180-style CSV text into rows. Quoted fields may contain commas, quotes ("")
/// and newlines. A trailing '\r' before '\n' is dropped. Blank lines are skipped.
std::vector<Row> parse(std::string_view text);

/// Quotes the field when it contains a delimiter, quote or newline.
std::string escape(std::string_view field);

/// Joins fields with ',' and appends '\n'.
std::string join(const Row& fields);

/// Shortest representation that round-trips exactly.
std::string format_shortest(double value);
/// Fixed notation with `digits` decimals, correctly rounded; "-0" is normalised to "0".
std::string format_fixed(double value, int digits);

/// Strict decimal parse of the whole field; returns false on any trailing garbage.
bool parse_double(std::string_view text, double& out);

} // namespace covtrend::csv
