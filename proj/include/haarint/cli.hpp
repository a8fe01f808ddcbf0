#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "haarint/rational_function.hpp"

namespace haarint {

struct CliResult {
  int exitCode = 0;
  std::string out;
  std::string err;
};

/// Runs one CLI invocation (args exclude the program name).  Exit codes:
/// 0 success, 2 parse error, 3 dispatch/measure error, 4 engine error,
/// 5 internal error.
CliResult runCli(const std::vector<std::string>& args);

/// JSON encoding of a rational function: {"num": [[e, "p/q"], ...],
/// "den": ...} with exact decimal coefficient strings (an extra element
/// carries the imaginary part when nonzero).
nlohmann::ordered_json ratToJson(const RationalFunction& r);
RationalFunction ratFromJson(const nlohmann::json& j);

}  // namespace haarint
