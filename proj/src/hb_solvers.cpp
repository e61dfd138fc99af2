#include "crrd/hb_solvers.hpp"

#include <vector>

#include "crrd/errors.hpp"
#include "projection.hpp"

namespace crrd::rd {

namespace {

void check_floors(const ChannelProblem& p) {
    const auto floor = detail::budget_floor(p);
    for (std::size_t j = 0; j < floor.size(); ++j)
        if (floor[j] > p.budgets[j].budget + 1e-12)
            throw InfeasibleBudget("distortion budget " + std::to_string(j + 1) + " below its floor " +
                                   std::to_string(floor[j]));
}

RateWitness on_grid(const ChannelProblem& p, const EntropyCombination& f, double step, std::uint64_t guard) {
    GridEngine g(p, step, guard);
    const auto r = g.minimize(f);
    if (!r.found) throw InfeasibleBudget("no grid channel meets the budgets");
    const TestChannel ch = g.channel_at(r.index);
    return {std::max(0.0, f.value(p.source, ch)), ch};
}

} // namespace

prob::JointSource point_source(const prob::FinitePmf& pxy) {
    if (pxy.rank() != 2) throw std::invalid_argument("point source needs a pmf over (X, Y)");
    return prob::JointSource(prob::FinitePmf({pxy.size(0), 1, pxy.size(1)},
                                             std::vector<double>(pxy.mass().begin(), pxy.mass().end())));
}

ChannelProblem hb_problem(const prob::JointSource& source, const prob::DistortionMetric& m1,
                          const prob::DistortionMetric& m2, DistortionPair pair) {
    if (!(pair.d1 >= 0.0) || !(pair.d2 >= 0.0)) throw std::invalid_argument("budgets must be nonnegative");
    ChannelProblem p = reconstruction_problem(source, m1, m2, pair.d1, pair.d2);
    check_floors(p);
    return p;
}

ChannelProblem point_problem(const prob::FinitePmf& pxy, const prob::DistortionMetric& m, double d) {
    const prob::JointSource s = point_source(pxy);
    return hb_problem(s, prob::DistortionMetric::zero(s.nx(), 1), m, {0.0, d});
}

RateWitness grid_oracle_point_cr(const prob::FinitePmf& pxy, const prob::DistortionMetric& m, double d, double step,
                                 std::uint64_t guard) {
    return on_grid(point_problem(pxy, m, d), functional::hb_cr(), step, guard);
}

RateWitness grid_oracle_hb_cr(const prob::JointSource& source, const prob::DistortionMetric& m1,
                              const prob::DistortionMetric& m2, DistortionPair pair, double step, std::uint64_t guard) {
    return on_grid(hb_problem(source, m1, m2, pair), functional::hb_cr(), step, guard);
}

RateWitness descent_hb_cr(const prob::JointSource& source, const prob::DistortionMetric& m1,
                          const prob::DistortionMetric& m2, DistortionPair pair, const DescentOptions& opt,
                          std::span<const TestChannel> seeds) {
    const ChannelProblem p = hb_problem(source, m1, m2, pair);
    auto r = multistart(p, functional::hb_cr(), seeds, opt);
    return {std::max(0.0, r.value), std::move(r.channel)};
}

RateWitness descent_point_cr(const prob::FinitePmf& pxy, const prob::DistortionMetric& m, double d,
                             const DescentOptions& opt, std::span<const TestChannel> seeds) {
    const ChannelProblem p = point_problem(pxy, m, d);
    auto r = multistart(p, functional::hb_cr(), seeds, opt);
    return {std::max(0.0, r.value), std::move(r.channel)};
}

RateWitness solve_hb_cr(const ChannelProblem& p, const EntropyCombination& f, double step, std::uint64_t guard,
                        const DescentOptions& opt, std::span<const TestChannel> seeds) {
    check_floors(p);
    RateWitness grid = on_grid(p, f, step, guard);
    std::vector<TestChannel> all(seeds.begin(), seeds.end());
    all.push_back(grid.witness);
    auto r = multistart(p, f, all, opt);
    if (r.value < grid.rate - 1e-12) return {std::max(0.0, r.value), std::move(r.channel)};
    return grid;
}

} // namespace crrd::rd
