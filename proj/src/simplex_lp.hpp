#pragma once

#include <cstddef>
#include <vector>

namespace crrd::detail {

// minimize c.z subject to A z = b, z >= 0. Dense two-phase simplex with
// Bland's rule; meant for problems with a few dozen rows.
struct LinearProgram {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a; // rows x cols, row-major
    std::vector<double> b;
    std::vector<double> c;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    std::vector<double> z;
};

LpSolution solve_lp(const LinearProgram& lp);

} // namespace crrd::detail
