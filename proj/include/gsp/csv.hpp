#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace gsp::csv {

/// RFC-4180 field: quoted when it contains a comma, quote, CR or LF.
std::string quote(std::string_view field);

/// Twelve significant digits ("%.12g"), identical on every platform. NaN and
/// infinities map to the empty string.
std::string number(double x);
std::string number(std::optional<double> x);

using Row = std::vector<std::string>;

void write_row(std::ostream& out, const Row& row);

/// Parses RFC-4180 text (quoted fields, doubled quotes, CRLF or LF).
std::vector<Row> parse(std::string_view text);

}  // namespace gsp::csv
