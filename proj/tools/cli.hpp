#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ttent::cli {

/// Runs the `ttent` command line. Output goes to --out when given, else `out`.
/// Returns the process exit code: 0 ok, 1 usage, 2 input data, 3 numeric.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "lo:hi:n" (n >= 2, inclusive linspace) or a single number.
std::vector<double> parse_grid(const std::string& spec);

/// 64-bit FNV-1a, printed in outputs as a configuration fingerprint.
std::uint64_t fnv1a(const std::string& data);

}  // namespace ttent::cli
