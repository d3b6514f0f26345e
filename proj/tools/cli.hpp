#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace riskml::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericError = 3 };

/// Runs one command. `args` excludes the program name. Errors go to `err` as
/// `error:<usage|data|numeric>: message`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace riskml::cli
