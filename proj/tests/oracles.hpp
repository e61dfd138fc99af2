#pragma once

// Reference values computed the slow, obvious way. Nothing here calls into
// the library's entropy or closed-form code.

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "crrd/channel.hpp"
#include "crrd/prob_core.hpp"

namespace oracle {

inline double h2(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

inline double rcr_bin(double d, double p) { return d >= 0.5 ? 0.0 : p * (1 - h2(d)); }
inline double rcr_bin_erasure(double d, double p) { return d >= 1.0 ? 0.0 : p * (1 - d); }

// Four-case rate for the erased binary source, Hamming distortion.
inline double rhb_bin(double d1, double d2, double p1, double p2) {
    if (d1 >= 0.5 && d2 >= 0.5) return 0.0;
    if (d1 <= 0.5 && d2 >= std::min(d1, 0.5)) return rcr_bin(d1, p1);
    if (d1 >= 0.5 && d2 <= 0.5) return rcr_bin(d2, p2);
    return p1 * (1 - h2(d1)) + p2 * (h2(d1) - h2(d2));
}

inline double rhb_bin_erasure(double d1, double d2, double p1, double p2) {
    if (d1 >= 1 && d2 >= 1) return 0.0;
    if (d1 <= 1 && d2 >= std::min(d1, 1.0)) return rcr_bin_erasure(d1, p1);
    if (d1 >= 1 && d2 <= 1) return rcr_bin_erasure(d2, p2);
    return p1 * (1 - d1) + p2 * (d1 - d2);
}

inline double rcr_gauss(double d, double s, double n) {
    if (d >= s) return 0.0;
    return 0.5 * std::log2(s / (s + n) * (d + n) / d);
}

inline double rhb_gauss_tilde(double d1, double d2, double s, double n1, double n2) {
    return 0.5 * std::log2(s / (s + n1 + n2) * (d1 + n1 + n2) * (d2 + n2) / ((d1 + n2) * d2));
}

inline double rhb_gauss(double d1, double d2, double s, double n1, double n2) {
    if (d1 >= s && d2 >= s) return 0.0;
    if (d1 <= s && d2 >= std::min(d1, s)) return rcr_gauss(d1, s, n1 + n2);
    if (d1 >= s && d2 <= s) return rcr_gauss(d2, s, n2);
    return rhb_gauss_tilde(d1, d2, s, n1, n2);
}

// Five-axis joint (x, y1, y2, a, b) as a sparse map.
using Key = std::array<std::size_t, 5>;
using Joint = std::map<Key, double>;

inline Joint joint_of(const crrd::prob::JointSource& s, const crrd::rd::TestChannel& ch) {
    Joint j;
    for (std::size_t x = 0; x < s.nx(); ++x)
        for (std::size_t y1 = 0; y1 < s.ny1(); ++y1)
            for (std::size_t y2 = 0; y2 < s.ny2(); ++y2)
                for (std::size_t a = 0; a < ch.na(); ++a)
                    for (std::size_t b = 0; b < ch.nb(); ++b) {
                        const double m = s.p(x, y1, y2) * ch(x, a, b);
                        if (m > 0) j[{x, y1, y2, a, b}] += m;
                    }
    return j;
}

inline std::map<std::vector<std::size_t>, double> marg(const Joint& j, const std::vector<int>& axes) {
    std::map<std::vector<std::size_t>, double> out;
    for (const auto& [k, m] : j) {
        std::vector<std::size_t> key;
        for (int a : axes) key.push_back(k[a]);
        out[key] += m;
    }
    return out;
}

inline double H(const Joint& j, const std::vector<int>& axes) {
    double h = 0;
    for (const auto& [k, m] : marg(j, axes))
        if (m > 0) h -= m * std::log2(m);
    return h;
}

inline std::vector<int> cat(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C)
inline double I(const Joint& j, const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& c = {}) {
    return H(j, cat(a, c)) + H(j, cat(b, c)) - H(j, cat(cat(a, b), c)) - H(j, c);
}

enum { X = 0, Y1 = 1, Y2 = 2, A = 3, B = 4 };

inline double hb_cr(const crrd::prob::JointSource& s, const crrd::rd::TestChannel& ch) {
    const Joint j = joint_of(s, ch);
    return I(j, {X}, {A}, {Y1}) + I(j, {X}, {B}, {Y2, A});
}

inline std::array<double, 2> distortions(const crrd::prob::JointSource& s, const crrd::rd::TestChannel& ch,
                                         const crrd::prob::DistortionMetric& m1,
                                         const crrd::prob::DistortionMetric& m2) {
    std::array<double, 2> d{0, 0};
    for (const auto& [k, m] : joint_of(s, ch)) {
        d[0] += m * m1.value(k[X], k[A]);
        d[1] += m * m2.value(k[X], k[B]);
    }
    return d;
}

inline crrd::prob::JointSource random_source(std::mt19937_64& rng, std::size_t nx, std::size_t ny1, std::size_t ny2) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> m(nx * ny1 * ny2);
    for (auto& v : m) v = e(rng) + 1e-3;
    return crrd::prob::JointSource(crrd::prob::FinitePmf({nx, ny1, ny2}, m));
}

inline crrd::rd::TestChannel random_channel(std::mt19937_64& rng, std::size_t nx, std::size_t na, std::size_t nb) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(nx * na * nb);
    for (std::size_t x = 0; x < nx; ++x) {
        double s = 0;
        for (std::size_t i = 0; i < na * nb; ++i) s += (w[x * na * nb + i] = e(rng));
        for (std::size_t i = 0; i < na * nb; ++i) w[x * na * nb + i] /= s;
    }
    return crrd::rd::TestChannel(nx, na, nb, w);
}

} // namespace oracle
