#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twistrank::cli {

// exit codes: 0 success, 1 domain error or failed verification,
// 2 config error (bad flags, degenerate curve, malformed window)
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitConfigError = 2;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twistrank::cli
