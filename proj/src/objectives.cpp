#include "crrd/objectives.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace crrd::rd {

namespace {

prob::AxisSet axes_of(unsigned mask) {
    prob::AxisSet out;
    for (std::size_t i = 0; i < 5; ++i)
        if (mask & (1u << i)) out.push_back(i);
    return out;
}

// Flat offsets of the masked marginal for each of the five coordinates.
std::array<std::size_t, 5> marginal_strides(unsigned mask, const std::array<std::size_t, 5>& sz) {
    std::array<std::size_t, 5> st{};
    std::size_t s = 1;
    for (std::size_t i = 5; i-- > 0;) {
        if (mask & (1u << i)) {
            st[i] = s;
            s *= sz[i];
        }
    }
    return st;
}

} // namespace

EntropyCombination& EntropyCombination::add_entropy(unsigned mask, double coef) {
    if (mask >= 32u) throw std::invalid_argument("entropy mask out of range");
    raw_.push_back({mask, coef});
    return *this;
}

EntropyCombination& EntropyCombination::add_cmi(unsigned a, unsigned b, unsigned c, double coef) {
    if ((a & b) || (a & c) || (b & c)) throw std::invalid_argument("mutual information sets overlap");
    add_entropy(a | c, coef);
    add_entropy(b | c, coef);
    add_entropy(a | b | c, -coef);
    add_entropy(c, -coef);
    return *this;
}

EntropyCombination EntropyCombination::operator+(const EntropyCombination& other) const {
    EntropyCombination out = *this;
    out.raw_.insert(out.raw_.end(), other.raw_.begin(), other.raw_.end());
    return out;
}

EntropyCombination EntropyCombination::scaled(double s) const {
    EntropyCombination out = *this;
    for (auto& t : out.raw_) t.coef *= s;
    return out;
}

std::vector<EntropyTerm> EntropyCombination::terms() const {
    std::map<unsigned, double> merged;
    for (const auto& t : raw_)
        if (t.mask != 0) merged[t.mask] += t.coef;
    std::vector<EntropyTerm> out;
    for (auto [mask, coef] : merged)
        if (std::abs(coef) > 1e-15) out.push_back({mask, coef});
    return out;
}

double EntropyCombination::value(const prob::FinitePmf& joint) const {
    if (joint.rank() != 5) throw std::invalid_argument("functional needs a five-axis joint");
    double v = 0.0;
    for (const auto& t : terms()) v += t.coef * prob::entropy(joint.marginal(axes_of(t.mask)));
    return v;
}

double EntropyCombination::value(const prob::JointSource& source, const TestChannel& ch) const {
    return value(compose(source, ch));
}

std::vector<double> EntropyCombination::gradient(const prob::JointSource& source, const TestChannel& ch) const {
    if (ch.nx() != source.nx()) throw std::invalid_argument("channel input alphabet does not match source");
    const std::array<std::size_t, 5> sz{source.nx(), source.ny1(), source.ny2(), ch.na(), ch.nb()};
    const prob::FinitePmf joint = compose(source, ch);
    const auto mass = joint.mass();
    std::vector<double> grad(ch.values().size(), 0.0);
    const double inv_ln2 = 1.0 / std::numbers::ln2;

    for (const auto& t : terms()) {
        const auto st = marginal_strides(t.mask, sz);
        std::size_t msize = 1;
        for (std::size_t i = 0; i < 5; ++i)
            if (t.mask & (1u << i)) msize *= sz[i];
        std::vector<double> marg(msize, 0.0);
        std::size_t flat = 0;
        for (std::size_t x = 0; x < sz[0]; ++x)
            for (std::size_t y1 = 0; y1 < sz[1]; ++y1)
                for (std::size_t y2 = 0; y2 < sz[2]; ++y2)
                    for (std::size_t a = 0; a < sz[3]; ++a)
                        for (std::size_t b = 0; b < sz[4]; ++b)
                            marg[x * st[0] + y1 * st[1] + y2 * st[2] + a * st[3] + b * st[4]] += mass[flat++];
        for (std::size_t x = 0; x < sz[0]; ++x)
            for (std::size_t y1 = 0; y1 < sz[1]; ++y1)
                for (std::size_t y2 = 0; y2 < sz[2]; ++y2) {
                    const double p = source.p(x, y1, y2);
                    if (p == 0.0) continue;
                    for (std::size_t a = 0; a < sz[3]; ++a)
                        for (std::size_t b = 0; b < sz[4]; ++b) {
                            const double q = marg[x * st[0] + y1 * st[1] + y2 * st[2] + a * st[3] + b * st[4]];
                            grad[(x * sz[3] + a) * sz[4] + b] -=
                                t.coef * p * (std::log2(std::max(q, 1e-300)) + inv_ln2);
                        }
                }
    }
    return grad;
}

namespace functional {

EntropyCombination hb_cr() {
    EntropyCombination f;
    f.add_cmi(kX, kA, kY1).add_cmi(kX, kB, kY2 | kA);
    return f;
}

EntropyCombination hb_cr_alt() {
    EntropyCombination f;
    f.add_cmi(kX, kA | kB, kY2).add_cmi(kA, kY2, kY1);
    return f;
}

EntropyCombination both_given_y1() {
    EntropyCombination f;
    f.add_cmi(kX, kA | kB, kY1);
    return f;
}

EntropyCombination both_given_y2() {
    EntropyCombination f;
    f.add_cmi(kX, kA | kB, kY2);
    return f;
}

EntropyCombination second_given_y2() {
    EntropyCombination f;
    f.add_cmi(kX, kB, kY2);
    return f;
}

EntropyCombination coop_sum() {
    EntropyCombination f;
    f.add_cmi(kX, kB, kY2).add_cmi(kX, kA, kY1 | kB);
    return f;
}

} // namespace functional

double eval_hb_cr_objective(const prob::JointSource& source, const TestChannel& ch) {
    const prob::FinitePmf joint = compose(source, ch);
    // axes: 0 X, 1 Y1, 2 Y2, 3 A, 4 B
    return prob::conditional_mutual_information(joint, {0}, {3}, {1}) +
           prob::conditional_mutual_information(joint, {0}, {4}, {2, 3});
}

double eval_hb_cr_alt_objective(const prob::JointSource& source, const TestChannel& ch) {
    if (!prob::check_markov_chain(source, {prob::Axis::x, prob::Axis::y2, prob::Axis::y1}))
        throw std::invalid_argument("alternate form needs X - Y2 - Y1");
    const prob::FinitePmf joint = compose(source, ch);
    return prob::conditional_mutual_information(joint, {0}, {3, 4}, {2}) +
           prob::conditional_mutual_information(joint, {3}, {2}, {1});
}

ExpectedDistortions eval_distortions(const prob::JointSource& source, const TestChannel& ch,
                                     const prob::DistortionMetric& m1, const prob::DistortionMetric& m2) {
    if (ch.nx() != source.nx() || m1.rows() != source.nx() || m2.rows() != source.nx() || m1.cols() != ch.na() ||
        m2.cols() != ch.nb())
        throw std::invalid_argument("distortion shapes do not match channel");
    const prob::FinitePmf px = source.pmf().marginal({0});
    ExpectedDistortions out;
    for (std::size_t x = 0; x < ch.nx(); ++x)
        for (std::size_t a = 0; a < ch.na(); ++a)
            for (std::size_t b = 0; b < ch.nb(); ++b) {
                const double w = ch(x, a, b);
                if (w == 0.0) continue;
                if (m1.forbidden(x, a) || m2.forbidden(x, b))
                    throw std::invalid_argument("channel puts mass on a forbidden reconstruction");
                out.d1 += px.mass()[x] * w * m1.value(x, a);
                out.d2 += px.mass()[x] * w * m2.value(x, b);
            }
    return out;
}

} // namespace crrd::rd
