#pragma once

// Sampled lower boundaries of two-rate regions built from per-channel rate
// bounds, and the inner/outer comparison for the cascade setting.

#include <optional>
#include <string>
#include <vector>

#include "crrd/closed_forms.hpp"
#include "crrd/descent.hpp"
#include "crrd/grid.hpp"

namespace crrd::rd {

struct RatePoint {
    double r1 = 0.0;
    double r2 = 0.0;
    std::optional<TestChannel> witness;
    std::string provenance;
    bool r2_unbounded = false; // the boundary continues upward from (r1, r2) without end
};

struct RateRegion {
    std::vector<RatePoint> boundary; // sorted by r1, no point dominates another
    bool dominance_closed = true;
};

/// Keeps the non-dominated points, sorted by (r1, r2). Idempotent. Points
/// flagged r2_unbounded are kept after the finite point they extend.
std::vector<RatePoint> dominance_filter(std::vector<RatePoint> points);

enum class SamplerMode {
    exhaustive, // full non-dominated set of the grid cloud
    scalarized, // minimizers of lambda r1 + (1 - lambda) r2 for each lambda
};

struct SamplerConfig {
    double step = 0.05;
    std::uint64_t guard = kDefaultGridGuard;
    SamplerMode mode = SamplerMode::scalarized;
    std::size_t lambdas = 21; // evenly spaced on [0, 1]
    bool polish = true;       // descent from each scalarized minimizer where the bounds are smooth
    DescentOptions descent{0, 1, 1e-10, 2000};
    std::vector<TestChannel> seeds;
    double scalar_step = 0.02; // grid step for the scalar minima
};

/// Requires X - Y1 - Y2. Points (f_a, max(0, f_b - f_a)) for f_a = I(X;AB|Y1)
/// and f_b = I(X;B|Y2) + I(X;A|Y1 B).
RateRegion coop_region_xy1y2(const prob::JointSource& source, const prob::DistortionMetric& m1,
                             const prob::DistortionMetric& m2, closed::DistortionPair pair,
                             const SamplerConfig& cfg = {});

/// Requires X - Y2 - Y1. The region {R1 >= rho, R2 >= 0}: boundary points
/// (rho, 0) and an unbounded marker at (rho, 0).
RateRegion coop_region_xy2y1(const prob::JointSource& source, const prob::DistortionMetric& m1,
                             const prob::DistortionMetric& m2, closed::DistortionPair pair,
                             const SamplerConfig& cfg = {});

/// Requires X - Y1 - Y2. Points (I(X;AB|Y1), I(X;B|Y2)).
RateRegion cascade_region_xy1y2(const prob::JointSource& source, const prob::DistortionMetric& m1,
                                const prob::DistortionMetric& m2, closed::DistortionPair pair,
                                const SamplerConfig& cfg = {});

struct CascadeBounds {
    RateRegion outer; // a single corner
    RateRegion inner;
    /// Smallest L-infinity distance from the outer corner to a point of the
    /// inner boundary that sits at or above it; 0 when the corner is inner.
    double gap = 0.0;
};

/// Requires X - Y2 - Y1. Outer corner (HB rate, point rate at Decoder 2),
/// inner points (I(X;A|Y1) + I(X;B|Y2 A), I(X;AB|Y2)).
CascadeBounds cascade_bounds_xy2y1(const prob::JointSource& source, const prob::DistortionMetric& m1,
                                   const prob::DistortionMetric& m2, closed::DistortionPair pair,
                                   const SamplerConfig& cfg = {});

/// Gaussian sources: closed forms, inner and outer coincide.
CascadeBounds cascade_bounds_xy2y1(closed::DistortionPair pair, const prob::GaussianSpec& spec);

double cascade_gap(const RatePoint& corner, const RateRegion& inner);

} // namespace crrd::rd
