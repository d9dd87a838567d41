#pragma once

#include <atomic>
#include <ostream>
#include <string>
#include <vector>

namespace ddp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `ddp` binary. `args` excludes the program name.
/// `cancel` is polled by `run` between queries (set from SIGINT/SIGTERM).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* cancel = nullptr);

}  // namespace ddp::cli
