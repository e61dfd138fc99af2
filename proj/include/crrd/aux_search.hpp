#pragma once

// Brute-force upper bounds for rate expressions with auxiliary variables:
// the two-decoder problem without reconstruction constraints, its
// constrained-reconstruction relaxation, and the single-decoder side
// information problem. The search set is a grid over p(u1, u2 | x) plus any
// caller-supplied seed channels; decoder and encoder maps are optimized
// exactly for each candidate.

#include <cstdint>
#include <span>

#include "crrd/channel.hpp"
#include "crrd/closed_forms.hpp"
#include "crrd/grid.hpp"

namespace crrd::rd {

struct AuxCaps {
    std::size_t u1 = 2;
    std::size_t u2 = 2;
};

/// Caps at which the constrained problem is exact: |X| + 4 and (|X| + 2)^2.
AuxCaps conr_exact_caps(std::size_t nx);

struct ConRConstraint {
    double de1 = 0.0;
    double de2 = 0.0;
    prob::DistortionMetric me1;
    prob::DistortionMetric me2;

    /// Metrics must be square over the reconstruction alphabets.
    void validate(std::size_t nxhat1, std::size_t nxhat2) const;
};

struct AuxOptions {
    double step = 0.02;
    std::uint64_t guard = kDefaultGridGuard;
    std::uint64_t map_budget = 1'000'000;
    std::span<const TestChannel> seeds; // p(u1, u2 | x), shaped by the caps
};

struct AuxResult {
    double rate = 0.0;
    AuxChannel witness;
    bool heuristic = false;
    AuxCaps caps;
};

/// Places a reconstruction channel into auxiliary alphabets of the given
/// caps (U = Xhat), padding unused letters with zero mass.
TestChannel embed_reconstruction(const TestChannel& ch, AuxCaps caps);

AuxResult brute_force_hb_nocr(const prob::JointSource& source, const prob::DistortionMetric& m1,
                              const prob::DistortionMetric& m2, closed::DistortionPair pair, AuxCaps caps,
                              const AuxOptions& opt = {});

/// Single decoder: U1 trivial, the cap applies to U.
AuxResult brute_force_wz(const prob::FinitePmf& pxy, const prob::DistortionMetric& m, double d, std::size_t cap,
                         const AuxOptions& opt = {});

/// `heuristic` is set when the caps are below conr_exact_caps or some
/// candidate needed more map combinations than opt.map_budget.
AuxResult brute_force_conr(const prob::JointSource& source, const prob::DistortionMetric& m1,
                           const prob::DistortionMetric& m2, closed::DistortionPair pair, const ConRConstraint& conr,
                           AuxCaps caps, const AuxOptions& opt = {});

} // namespace crrd::rd
