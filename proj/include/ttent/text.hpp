#pragma once

// Small text helpers shared by the file readers.

#include <string>
#include <string_view>
#include <vector>

namespace ttent::text {

std::string trim(std::string_view s);
/// Drops everything from the first '#'.
std::string_view strip_comment(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
/// Strict: the whole (trimmed) string must be a finite number.
bool parse_double(std::string_view s, double& out);
/// Throws ParseError when the file cannot be read.
std::string read_file(const std::string& path);
/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace ttent::text
