#pragma once

#include <span>
#include <vector>

#include "crrd/grid.hpp"

namespace crrd::rd::detail {

/// Euclidean projection onto the probability simplex, in place.
void project_simplex(std::span<double> v);

/// Projection onto {allowed support, x-slices in the simplex, linear budgets}
/// by Dykstra's alternating scheme (halfspaces, then the simplex product),
/// stopped once a full cycle moves less than `tol`.
std::vector<double> project_feasible(const ChannelProblem& p, std::span<const double> v, double tol = 1e-10,
                                     int max_cycles = 20000);

/// Smallest expected value of each budget: every slice picks its cheapest
/// allowed cell for that budget independently.
std::vector<double> budget_floor(const ChannelProblem& p);

/// Channel that puts each slice on the cell minimizing the budgets in
/// lexicographic order; meets every budget whenever any channel does.
std::vector<double> cheapest_channel(const ChannelProblem& p);

/// Pulls `w` toward cheapest_channel until every budget holds within 1e-12.
void repair_budgets(const ChannelProblem& p, std::vector<double>& w);

double budget_value(const LinearBudget& b, std::span<const double> w);

} // namespace crrd::rd::detail
