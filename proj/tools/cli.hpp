#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cylbill::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitConstruction = 3;

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads `key = value` lines ('#' starts a comment) into command-line
/// arguments, skipping keys already present in `given`.
std::vector<std::string> config_arguments(const std::string& path, const std::vector<std::string>& given);

}  // namespace cylbill::cli
