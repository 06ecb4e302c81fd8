#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nevschur {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line (without the program name). Reports go to `out`,
/// usage text to `err`; `in` feeds eval batch mode.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

/// One library operation and the command path that reaches it. Arguments may
/// contain the placeholders {system}, {other}, {coupler}, {out}; `evidence`
/// is a JSON pointer that must exist in the command's output.
struct OperationRoute {
  std::string module;
  std::string operation;
  std::vector<std::string> argv;
  std::string evidence;
};

const std::vector<OperationRoute>& operation_table();

}  // namespace nevschur
