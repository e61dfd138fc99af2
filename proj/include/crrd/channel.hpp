#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "crrd/prob_core.hpp"

namespace crrd::rd {

inline constexpr double kFeasibilityTol = 1e-9;

/// Conditional pmf p(a, b | x) of two reconstructions (or two auxiliaries)
/// given the source letter, stored as cond[(x * na + a) * nb + b].
class TestChannel {
public:
    /// Throws std::invalid_argument unless every x-slice is a pmf to 1e-9;
    /// slices are then renormalized exactly.
    TestChannel(std::size_t nx, std::size_t na, std::size_t nb, std::vector<double> cond);

    std::size_t nx() const noexcept { return nx_; }
    std::size_t na() const noexcept { return na_; }
    std::size_t nb() const noexcept { return nb_; }
    double operator()(std::size_t x, std::size_t a, std::size_t b) const { return cond_[(x * na_ + a) * nb_ + b]; }
    std::span<const double> values() const noexcept { return cond_; }
    std::span<const double> slice(std::size_t x) const { return std::span(cond_).subspan(x * na_ * nb_, na_ * nb_); }

    /// Deterministic channel a = fa(x), b = fb(x).
    static TestChannel deterministic(std::size_t na, std::size_t nb, const std::vector<std::size_t>& fa,
                                     const std::vector<std::size_t>& fb);

    /// True if some (x, a) with d1(x,a) forbidden, or (x, b) with d2
    /// forbidden, carries mass.
    bool touches_forbidden(const prob::DistortionMetric& d1, const prob::DistortionMetric& d2) const;

    friend bool operator==(const TestChannel&, const TestChannel&) = default;

private:
    std::size_t nx_, na_, nb_;
    std::vector<double> cond_;
};

/// The joint p(x, y1, y2, a, b) = p(x, y1, y2) p(a, b | x) as a five-axis pmf.
prob::FinitePmf compose(const prob::JointSource& source, const TestChannel& channel);

/// Channel with auxiliary alphabets plus deterministic decoder maps
/// dec_j(u_j, y_j) and encoder reproduction maps enc_j(u_j, x).
struct AuxChannel {
    TestChannel cond; // p(u1, u2 | x)
    std::vector<std::size_t> dec1; // [u1 * ny1 + y1]
    std::vector<std::size_t> dec2; // [u2 * ny2 + y2]
    std::vector<std::size_t> enc1; // [u1 * nx + x], empty when unused
    std::vector<std::size_t> enc2; // [u2 * nx + x]
};

} // namespace crrd::rd
