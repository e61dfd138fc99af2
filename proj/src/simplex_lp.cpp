#include "simplex_lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crrd::detail {
namespace {

constexpr double kPivotEps = 1e-12;

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), t_(rows * (cols + 1), 0.0) {}

    double& at(std::size_t i, std::size_t j) { return t_[i * (cols_ + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return t_[i * (cols_ + 1) + j]; }
    double& rhs(std::size_t i) { return at(i, cols_); }
    double rhs(std::size_t i) const { return at(i, cols_); }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t r, std::size_t col) {
        const double inv = 1.0 / at(r, col);
        for (std::size_t j = 0; j <= cols_; ++j) at(r, j) *= inv;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r) continue;
            const double f = at(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
        }
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> t_;
};

// Runs the simplex method on `tab` with cost vector `cost` until optimal or
// unbounded. Columns with allowed[j] == false never enter.
LpStatus run_simplex(Tableau& tab, std::vector<std::size_t>& basis, const std::vector<double>& cost,
                     const std::vector<bool>& allowed) {
    const std::size_t m = tab.rows();
    const std::size_t n = tab.cols();
    for (std::size_t iter = 0; iter < 100000; ++iter) {
        std::size_t entering = n;
        for (std::size_t j = 0; j < n && entering == n; ++j) {
            if (!allowed[j]) continue;
            double reduced = cost[j];
            for (std::size_t i = 0; i < m; ++i) reduced -= cost[basis[i]] * tab.at(i, j);
            if (reduced < -kPivotEps) entering = j;
        }
        if (entering == n) return LpStatus::optimal;

        std::size_t leaving = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double coef = tab.at(i, entering);
            if (coef <= kPivotEps) continue;
            const double ratio = tab.rhs(i) / coef;
            if (ratio < best_ratio - kPivotEps ||
                (std::abs(ratio - best_ratio) <= kPivotEps && leaving < m && basis[i] < basis[leaving])) {
                best_ratio = ratio;
                leaving = i;
            }
        }
        if (leaving == m) return LpStatus::unbounded;
        tab.pivot(leaving, entering);
        basis[leaving] = entering;
    }
    throw std::runtime_error("simplex iteration limit reached");
}

} // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    const std::size_t m = lp.rows;
    const std::size_t n = lp.cols;
    if (lp.a.size() != m * n || lp.b.size() != m || lp.c.size() != n)
        throw std::invalid_argument("linear program shape mismatch");

    // Columns: n structural, then m artificials.
    Tableau tab(m, n + m);
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = sign * lp.a[i * n + j];
        tab.at(i, n + i) = 1.0;
        tab.rhs(i) = sign * lp.b[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    std::vector<double> phase1_cost(n + m, 0.0);
    for (std::size_t i = 0; i < m; ++i) phase1_cost[n + i] = 1.0;
    std::vector<bool> allowed(n + m, true);
    run_simplex(tab, basis, phase1_cost, allowed);

    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] >= n) infeasibility += tab.rhs(i);
    LpSolution sol;
    if (infeasibility > 1e-9) {
        sol.status = LpStatus::infeasible;
        return sol;
    }

    // Drive zero-valued artificials out of the basis where possible; rows
    // where that fails are redundant and keep their artificial at zero.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(tab.at(i, j)) > 1e-9) {
                tab.pivot(i, j);
                basis[i] = j;
                break;
            }
        }
    }
    for (std::size_t j = n; j < n + m; ++j) allowed[j] = false;

    std::vector<double> cost(n + m, 0.0);
    for (std::size_t j = 0; j < n; ++j) cost[j] = lp.c[j];
    sol.status = run_simplex(tab, basis, cost, allowed);
    if (sol.status != LpStatus::optimal) return sol;

    sol.z.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) sol.z[basis[i]] = std::max(0.0, tab.rhs(i));
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.objective += lp.c[j] * sol.z[j];
    return sol;
}

} // namespace crrd::detail
