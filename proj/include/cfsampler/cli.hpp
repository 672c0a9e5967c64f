#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cfsampler::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240229;

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kInvalidInput = 2,
  kIterationLimit = 3,
  kNumericalFailure = 4,
};

/// Runs the command line front end; args[0] is the program name.
/// Subcommands: sample, table, validate, envelope.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfsampler::cli
