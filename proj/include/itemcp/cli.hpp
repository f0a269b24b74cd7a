#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace itemcp::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { ok = 0, error = 1, timeout = 2 };

/// Entry point of the `itemcp` tool; `args` excludes the program name.
///   mine    --data F --query F [--item-cats F] [--trans-cats F] [--item-labels F]
///           [--engine cp|baseline|oracle] [--out F] [--timeout S] [--parallel K] [--materialize]
///   verify  (--data F --query F ... | --seeds K [--seed S]) [--inject-fault ENGINE]
///   bench   --suite F [--timeout S] [--out F]
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace itemcp::cli
