#ifndef PARIKH_CLI_HPP
#define PARIKH_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace parikh {

inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInput = 65;

// Runs one command line (without the program name). Prints exactly one
// `VERDICT <result> WITNESS <monomial|->` line to out; diagnostics go to err.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parikh

#endif  // PARIKH_CLI_HPP
