#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace dectlink::cli {

// Exit codes: 0 success (including unreachable planning results), 2 usage,
// domain or input errors, 1 internal errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

// args[0] is the program name. Subcommands: model eval, model sweep,
// analyze, fit, plan, report.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace dectlink::cli
