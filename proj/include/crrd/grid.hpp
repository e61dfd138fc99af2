#pragma once

// Exhaustive search over channels whose x-slices are compositions of
// 1/step over the allowed cells. Slices are enumerated in lexicographic
// order, x = 0 most significant, so the first minimizer found is the
// lexicographically smallest channel tensor among near-ties.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "crrd/channel.hpp"
#include "crrd/objectives.hpp"
#include "crrd/prob_core.hpp"

namespace crrd::rd {

/// sum over (x, a, b) of coef * cond(x, a, b) <= budget.
struct LinearBudget {
    std::vector<double> coef;
    double budget = 0.0;
};

struct ChannelProblem {
    prob::JointSource source;
    std::size_t na = 1;
    std::size_t nb = 1;
    std::vector<char> allowed; // [(x * na + a) * nb + b]
    std::vector<LinearBudget> budgets;
};

/// Reconstruction channel for two metrics: forbidden pairs excluded from the
/// support, expected distortions bounded by d1, d2 (each within 1e-9).
ChannelProblem reconstruction_problem(const prob::JointSource& source, const prob::DistortionMetric& m1,
                                      const prob::DistortionMetric& m2, double d1, double d2);

/// Auxiliary channel p(u1, u2 | x): all cells allowed, no linear budgets.
ChannelProblem auxiliary_problem(const prob::JointSource& source, std::size_t nu1, std::size_t nu2);

inline constexpr std::uint64_t kDefaultGridGuard = 1'000'000'000ULL;

struct GridIndex {
    std::vector<std::uint32_t> cand; // per slice
};

class GridEngine {
public:
    /// 1/step must be an integer. Throws GuardExceeded when the grid holds
    /// more than `guard` channels.
    GridEngine(ChannelProblem problem, double step, std::uint64_t guard = kDefaultGridGuard);

    const ChannelProblem& problem() const noexcept { return problem_; }
    std::uint64_t size() const noexcept { return size_; }
    std::uint32_t resolution() const noexcept { return n_; }
    TestChannel channel_at(const GridIndex& index) const;

    using Predicate = std::function<bool(std::span<const double>)>;

    struct Result {
        bool found = false;
        double value = 0.0;
        GridIndex index;
    };

    /// Smallest value of `f` over grid channels meeting the linear budgets
    /// and, when given, the predicate. The predicate sees the dense channel
    /// tensor and is only consulted for candidates that would improve the
    /// incumbent. With `nonnegative`, the search stops at the first zero.
    Result minimize(const EntropyCombination& f, const Predicate& pred = {}, bool nonnegative = true) const;

    using Visitor = std::function<void(double, double, const GridIndex&)>;

    /// Calls `visit(f1, f2, index)` for every budget-feasible grid channel.
    void sweep(const EntropyCombination& f1, const EntropyCombination& f2, const Visitor& visit) const;

private:
    struct Slot {
        std::vector<double> weight; // per x
        std::vector<double> coef;   // per functional
    };
    struct Compiled;

    Compiled compile(std::span<const EntropyCombination> fs) const;
    template <std::size_t K, class OnPoint>
    void run(const Compiled& c, OnPoint&& on_point) const;

    ChannelProblem problem_;
    std::uint32_t n_ = 0;
    std::uint64_t size_ = 0;
    std::vector<std::vector<std::uint32_t>> cells_;   // allowed cells per slice
    std::vector<std::vector<std::uint16_t>> counts_;  // [cand * ncells + i]
    std::vector<std::vector<std::vector<double>>> dist_; // [x][budget][cand]
};

} // namespace crrd::rd
