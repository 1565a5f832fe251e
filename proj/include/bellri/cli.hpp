#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bellri::cli {

struct Command {
    std::string verb;
    std::string input = "-";  ///< path, or "-" for stdin
    double tol = 1e-9;
    std::uint64_t seed = 0;
    int restarts = 32;
    std::string out;              ///< empty: write to the output stream
    std::optional<double> eta;    ///< optimize: pin eta_A to this value
};

const std::vector<std::string>& verbs();

/// Exit status: 0 pass/feasible, 1 fail/infeasible, 2 input error.
int run(const Command& cmd, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace bellri::cli
