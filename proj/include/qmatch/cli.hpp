#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qmatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitInvariant = 2;

/// Runs one command line (program name excluded). Reports go to out (or the
/// --out file), diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ThetaRange {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    std::vector<double> points() const;
};

/// "a:b:step" with a <= b and step > 0.
ThetaRange parse_theta_range(const std::string& text);

} // namespace qmatch::cli
