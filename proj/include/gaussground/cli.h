#ifndef GAUSSGROUND_CLI_H_
#define GAUSSGROUND_CLI_H_

#include <ostream>

namespace gg::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;
inline constexpr int kDataError = 3;
inline constexpr int kNumericalError = 4;

// Entry point for the `gaussground` tool: subcommands reward, score, train
// and sweep. Default output root comes from $GAUSSGROUND_OUT (else "runs").
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace gg::cli

#endif  // GAUSSGROUND_CLI_H_
