#pragma once

// Analytic rates for the two source families with closed forms: the
// Gaussian source with degraded additive-noise side information, and the
// uniform binary source with erased side information.

#include <string_view>

#include "crrd/channel.hpp"
#include "crrd/prob_core.hpp"

namespace crrd::closed {

struct DistortionPair {
    double d1 = 0.0;
    double d2 = 0.0;
};

enum class RegionLabel { both_trivial, only_d1_active, only_d2_active, both_active };

std::string_view to_string(RegionLabel label);

enum class BinaryMetric { hamming, erasure };

struct RegionRate {
    double rate = 0.0;
    RegionLabel region = RegionLabel::both_trivial;
};

struct RateThresholds {
    double r1_min = 0.0;
    double r2_min = 0.0;
};

/// 0.5 log2(s/(s+N) (D+N)/D) below s, else 0. Throws for d <= 0.
double rcr_point_gaussian(double d, double sigma_x2, double n);

/// The both-active expression, evaluated literally (no region logic).
double rhb_tilde_gaussian(DistortionPair pair, const prob::GaussianSpec& spec);

/// Piecewise rate. Cases are tried in the printed order, so a pair on a
/// boundary takes the first matching label.
RegionRate rhb_cr_gaussian(DistortionPair pair, const prob::GaussianSpec& spec);

/// Hamming: p(1 - H(d)) for d <= 1/2. Erasure: p(1 - d) for d <= 1.
double rcr_point_binary(double d, double p, BinaryMetric metric);

double rhb_tilde_binary(DistortionPair pair, const prob::BinaryErasureSpec& spec, BinaryMetric metric);

/// Same case order as the Gaussian version with threshold 1/2 (Hamming) or
/// 1 (erasure).
RegionRate rhb_cr_binary(DistortionPair pair, const prob::BinaryErasureSpec& spec,
                         BinaryMetric metric = BinaryMetric::hamming);

/// Outer corner of the cascade region: (HB rate, point rate at Decoder 2).
RateThresholds cascade_region_gaussian(DistortionPair pair, const prob::GaussianSpec& spec);
RateThresholds cascade_region_binary(DistortionPair pair, const prob::BinaryErasureSpec& spec,
                                     BinaryMetric metric = BinaryMetric::hamming);

/// a(1-b) + b(1-a).
double binary_convolution(double a, double b);

/// X = Xhat2 + Q2, Xhat2 = Xhat1 + Q1 (mod 2), Xhat1 ~ Ber(1/2),
/// Q2 ~ Ber(D2), Q1 ~ Ber(q) with q chosen so that Q1 + Q2 ~ Ber(D1):
/// q = (D1 - D2) / (1 - 2 D2). Requires D2 <= D1 <= 1/2 and D2 < 1/2.
rd::TestChannel binary_hb_test_channel(DistortionPair pair, const prob::BinaryErasureSpec& spec);

/// Achieving channel for whichever region `pair` falls in. Hamming uses
/// binary reconstructions; erasure uses {0, 1, e}.
rd::TestChannel binary_region_witness(DistortionPair pair, const prob::BinaryErasureSpec& spec,
                                      BinaryMetric metric = BinaryMetric::hamming);

struct GaussianChannelParams {
    double var_xhat1 = 0.0;
    double var_q1 = 0.0;
    double var_q2 = 0.0;
};

/// Variances of Xhat1, Q1, Q2 in X = Xhat1 + Q1 + Q2. Requires D2 <= D1 <= s.
GaussianChannelParams gaussian_hb_test_channel_params(DistortionPair pair, const prob::GaussianSpec& spec);

} // namespace crrd::closed
