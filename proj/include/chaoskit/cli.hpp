#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chaoskit::cli {

// Exit codes: 0 success, 1 validation or usage error, 2 I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// args excludes the program name. Output that has no -o path goes to `out`;
// diagnostics and usage text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

// Worker count for per-record parallelism: CHAOSKIT_THREADS when set to a
// positive integer, else the hardware concurrency.
unsigned thread_budget();

}  // namespace chaoskit::cli
