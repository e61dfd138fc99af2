#pragma once

// Numerical minimization of the CR rate expressions over reconstruction
// channels: point-to-point (a trivial first decoder) and two-decoder.

#include <cstdint>
#include <span>

#include "crrd/closed_forms.hpp"
#include "crrd/descent.hpp"
#include "crrd/grid.hpp"

namespace crrd::rd {

using closed::DistortionPair;

inline constexpr std::uint64_t kPointGridGuard = 10'000'000ULL;

struct RateWitness {
    double rate = 0.0;
    TestChannel witness;
};

/// (X, Y1, Y2) with a single-letter Y1 and Y2 = Y, from a pmf p(x, y).
prob::JointSource point_source(const prob::FinitePmf& pxy);

/// Checks both budgets against their floors and throws InfeasibleBudget when
/// either is out of reach.
ChannelProblem hb_problem(const prob::JointSource& source, const prob::DistortionMetric& m1,
                          const prob::DistortionMetric& m2, DistortionPair pair);

/// Point-to-point problem on point_source(pxy): A has one letter.
ChannelProblem point_problem(const prob::FinitePmf& pxy, const prob::DistortionMetric& m, double d);

/// min I(X; Xhat | Y) over grid channels p(xhat | x) with E d <= d. The
/// witness has a single-letter first reconstruction.
RateWitness grid_oracle_point_cr(const prob::FinitePmf& pxy, const prob::DistortionMetric& m, double d,
                                 double step = 0.02, std::uint64_t guard = kPointGridGuard);

RateWitness grid_oracle_hb_cr(const prob::JointSource& source, const prob::DistortionMetric& m1,
                              const prob::DistortionMetric& m2, DistortionPair pair, double step = 0.02,
                              std::uint64_t guard = kDefaultGridGuard);

RateWitness descent_hb_cr(const prob::JointSource& source, const prob::DistortionMetric& m1,
                          const prob::DistortionMetric& m2, DistortionPair pair, const DescentOptions& opt = {},
                          std::span<const TestChannel> seeds = {});

RateWitness descent_point_cr(const prob::FinitePmf& pxy, const prob::DistortionMetric& m, double d,
                             const DescentOptions& opt = {}, std::span<const TestChannel> seeds = {});

/// Grid oracle, then descent seeded with the grid witness and `seeds`; the
/// smaller of the two.
RateWitness solve_hb_cr(const ChannelProblem& p, const EntropyCombination& f, double step, std::uint64_t guard,
                        const DescentOptions& opt, std::span<const TestChannel> seeds = {});

} // namespace crrd::rd
