#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace sqz::cli {

// Exit codes.
inline constexpr int kExitOk = 0;            // decided / verified
inline constexpr int kExitUsage = 1;         // bad arguments, precondition or resource cap
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitNumerical = 3;     // internal numerical failure
inline constexpr int kExitCheckFailed = 4;   // a verification ran and did not hold

inline constexpr const char* kSchemaVersion = "1.0";

// "1+0.5i", "-2i", "0.3", "i", "1-i"
std::complex<double> parse_complex(const std::string& s);
std::vector<int> parse_int_list(const std::string& s);

// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

// Runs the tool; report goes to `out` (or --output), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sqz::cli
