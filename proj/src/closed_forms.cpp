#include "crrd/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crrd::closed {

namespace {

void require_finite_nonneg(DistortionPair pair) {
    if (!std::isfinite(pair.d1) || !std::isfinite(pair.d2) || pair.d1 < 0.0 || pair.d2 < 0.0)
        throw std::invalid_argument("distortions must be finite and nonnegative");
}

void require_positive(DistortionPair pair) {
    require_finite_nonneg(pair);
    if (pair.d1 <= 0.0 || pair.d2 <= 0.0)
        throw std::invalid_argument("quadratic distortion must be positive (zero needs unbounded rate)");
}

// Case list shared by both families; `t` is the level at which a single
// distortion becomes free.
RegionLabel classify(DistortionPair pair, double t) {
    if (pair.d1 >= t && pair.d2 >= t) return RegionLabel::both_trivial;
    if (pair.d1 <= t && pair.d2 >= std::min(pair.d1, t)) return RegionLabel::only_d1_active;
    if (pair.d1 >= t && pair.d2 <= t) return RegionLabel::only_d2_active;
    return RegionLabel::both_active;
}

double trivial_level(BinaryMetric metric) { return metric == BinaryMetric::hamming ? 0.5 : 1.0; }

} // namespace

std::string_view to_string(RegionLabel label) {
    switch (label) {
    case RegionLabel::both_trivial: return "both_trivial";
    case RegionLabel::only_d1_active: return "only_d1_active";
    case RegionLabel::only_d2_active: return "only_d2_active";
    case RegionLabel::both_active: return "both_active";
    }
    return "?";
}

double rcr_point_gaussian(double d, double sigma_x2, double n) {
    if (!(sigma_x2 > 0.0) || !std::isfinite(sigma_x2)) throw std::invalid_argument("source variance must be positive");
    if (!(n >= 0.0) || !std::isfinite(n)) throw std::invalid_argument("noise variance must be nonnegative");
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("quadratic distortion must be positive");
    if (d >= sigma_x2) return 0.0;
    return 0.5 * std::log2(sigma_x2 / (sigma_x2 + n) * (d + n) / d);
}

double rhb_tilde_gaussian(DistortionPair pair, const prob::GaussianSpec& spec) {
    spec.validate();
    require_positive(pair);
    const double s = spec.sigma_x2, n1 = spec.n1, n2 = spec.n2;
    const double num = (pair.d1 + n1 + n2) * (pair.d2 + n2);
    const double den = (pair.d1 + n2) * pair.d2;
    return 0.5 * std::log2(s / (s + n1 + n2) * num / den);
}

RegionRate rhb_cr_gaussian(DistortionPair pair, const prob::GaussianSpec& spec) {
    spec.validate();
    require_positive(pair);
    const double s = spec.sigma_x2;
    RegionRate out;
    out.region = classify(pair, s);
    switch (out.region) {
    case RegionLabel::both_trivial: out.rate = 0.0; break;
    case RegionLabel::only_d1_active: out.rate = rcr_point_gaussian(pair.d1, s, spec.n1 + spec.n2); break;
    case RegionLabel::only_d2_active: out.rate = rcr_point_gaussian(pair.d2, s, spec.n2); break;
    case RegionLabel::both_active: out.rate = rhb_tilde_gaussian(pair, spec); break;
    }
    return out;
}

double rcr_point_binary(double d, double p, BinaryMetric metric) {
    if (!std::isfinite(d) || d < 0.0) throw std::invalid_argument("distortion must be nonnegative");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("erasure probability must lie in [0,1]");
    if (metric == BinaryMetric::hamming) return d >= 0.5 ? 0.0 : p * (1.0 - prob::binary_entropy(d));
    return d >= 1.0 ? 0.0 : p * (1.0 - d);
}

double rhb_tilde_binary(DistortionPair pair, const prob::BinaryErasureSpec& spec, BinaryMetric metric) {
    spec.validate();
    require_finite_nonneg(pair);
    if (metric == BinaryMetric::hamming) {
        const double h1 = prob::binary_entropy(std::min(pair.d1, 0.5));
        const double h2 = prob::binary_entropy(std::min(pair.d2, 0.5));
        return spec.p1 * (1.0 - h1) + spec.p2 * (h1 - h2);
    }
    return spec.p1 * (1.0 - pair.d1) + spec.p2 * (pair.d1 - pair.d2);
}

RegionRate rhb_cr_binary(DistortionPair pair, const prob::BinaryErasureSpec& spec, BinaryMetric metric) {
    spec.validate();
    require_finite_nonneg(pair);
    RegionRate out;
    out.region = classify(pair, trivial_level(metric));
    switch (out.region) {
    case RegionLabel::both_trivial: out.rate = 0.0; break;
    case RegionLabel::only_d1_active: out.rate = rcr_point_binary(pair.d1, spec.p1, metric); break;
    case RegionLabel::only_d2_active: out.rate = rcr_point_binary(pair.d2, spec.p2, metric); break;
    case RegionLabel::both_active: out.rate = rhb_tilde_binary(pair, spec, metric); break;
    }
    return out;
}

RateThresholds cascade_region_gaussian(DistortionPair pair, const prob::GaussianSpec& spec) {
    return {rhb_cr_gaussian(pair, spec).rate, rcr_point_gaussian(pair.d2, spec.sigma_x2, spec.n2)};
}

RateThresholds cascade_region_binary(DistortionPair pair, const prob::BinaryErasureSpec& spec, BinaryMetric metric) {
    return {rhb_cr_binary(pair, spec, metric).rate, rcr_point_binary(pair.d2, spec.p2, metric)};
}

double binary_convolution(double a, double b) { return a * (1.0 - b) + b * (1.0 - a); }

rd::TestChannel binary_hb_test_channel(DistortionPair pair, const prob::BinaryErasureSpec& spec) {
    spec.validate();
    require_finite_nonneg(pair);
    if (!(pair.d2 <= pair.d1 && pair.d1 <= 0.5 && pair.d2 < 0.5))
        throw std::invalid_argument("test channel needs D2 <= D1 <= 1/2 and D2 < 1/2");
    const double q = (pair.d1 - pair.d2) / (1.0 - 2.0 * pair.d2);
    auto ber = [](double t, std::size_t bit) { return bit ? t : 1.0 - t; };
    std::vector<double> cond(8);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) cond[(x * 2 + a) * 2 + b] = ber(q, a ^ b) * ber(pair.d2, b ^ x);
    return rd::TestChannel(2, 2, 2, std::move(cond));
}

namespace {

// p(a, b | x) with both reconstructions over {0, 1, e}: Xhat2 keeps X with
// probability 1 - e2, Xhat1 further erases a kept Xhat2 so that its total
// erasure probability is e1 >= e2.
rd::TestChannel erasure_chain(double e1, double e2) {
    const double extra = e2 >= 1.0 ? 0.0 : (e1 - e2) / (1.0 - e2);
    std::vector<double> cond(18, 0.0);
    for (std::size_t x = 0; x < 2; ++x) {
        auto at = [&](std::size_t a, std::size_t b) -> double& { return cond[(x * 3 + a) * 3 + b]; };
        at(x, x) = (1.0 - e2) * (1.0 - extra);
        at(2, x) += (1.0 - e2) * extra;
        at(2, 2) += e2;
    }
    return rd::TestChannel(2, 3, 3, std::move(cond));
}

// a = x + Ber(t1) and b = x + Ber(t2) with a, b not coupled beyond x.
rd::TestChannel hamming_product(std::optional<double> t1, std::optional<double> t2, bool merged) {
    auto row = [](std::optional<double> t, std::size_t x, std::size_t v) {
        if (!t) return v == 0 ? 1.0 : 0.0;
        return (v ^ x) ? *t : 1.0 - *t;
    };
    std::vector<double> cond(8, 0.0);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) {
                double v = merged ? (a == b ? row(t1, x, a) : 0.0) : row(t1, x, a) * row(t2, x, b);
                cond[(x * 2 + a) * 2 + b] = v;
            }
    return rd::TestChannel(2, 2, 2, std::move(cond));
}

} // namespace

rd::TestChannel binary_region_witness(DistortionPair pair, const prob::BinaryErasureSpec& spec, BinaryMetric metric) {
    spec.validate();
    require_finite_nonneg(pair);
    const RegionLabel region = classify(pair, trivial_level(metric));
    if (metric == BinaryMetric::erasure) {
        const double e1 = std::min(pair.d1, 1.0), e2 = std::min(pair.d2, 1.0);
        switch (region) {
        case RegionLabel::both_trivial: return erasure_chain(1.0, 1.0);
        case RegionLabel::only_d1_active: return erasure_chain(e1, e1);
        case RegionLabel::only_d2_active: return erasure_chain(1.0, e2);
        case RegionLabel::both_active: return erasure_chain(e1, e2);
        }
    }
    switch (region) {
    case RegionLabel::both_trivial: return hamming_product(std::nullopt, std::nullopt, false);
    case RegionLabel::only_d1_active: return hamming_product(pair.d1, pair.d1, true);
    case RegionLabel::only_d2_active: return hamming_product(std::nullopt, pair.d2, false);
    case RegionLabel::both_active: break;
    }
    return binary_hb_test_channel(pair, spec);
}

GaussianChannelParams gaussian_hb_test_channel_params(DistortionPair pair, const prob::GaussianSpec& spec) {
    spec.validate();
    require_finite_nonneg(pair);
    if (!(pair.d2 <= pair.d1 && pair.d1 <= spec.sigma_x2))
        throw std::invalid_argument("test channel needs D2 <= D1 <= source variance");
    return {spec.sigma_x2 - pair.d1, pair.d1 - pair.d2, pair.d2};
}

} // namespace crrd::closed
