#include "crrd/descent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "projection.hpp"

namespace crrd::rd {

namespace {

// Value and gradient of an entropy combination straight from the channel
// tensor, reusing scratch buffers.
class Evaluator {
public:
    Evaluator(const ChannelProblem& p, const EntropyCombination& f) : p_(p) {
        const auto& s = p.source;
        sz_ = {s.nx(), s.ny1(), s.ny2(), p.na, p.nb};
        for (const auto& t : f.terms()) {
            Term term{t.coef, {}, 1};
            std::size_t stride = 1;
            for (std::size_t i = 5; i-- > 0;) {
                if (t.mask & (1u << i)) {
                    term.stride[i] = stride;
                    stride *= sz_[i];
                }
            }
            term.size = stride;
            terms_.push_back(term);
        }
        joint_.resize(sz_[0] * sz_[1] * sz_[2] * sz_[3] * sz_[4]);
    }

    double value(std::span<const double> w) {
        compose(w);
        double v = 0.0;
        for (const auto& t : terms_) {
            marginal(t);
            double h = 0.0;
            for (double q : marg_)
                if (q > 0.0) h -= q * std::log2(q);
            v += t.coef * h;
        }
        return v;
    }

    void gradient(std::span<const double> w, std::vector<double>& g) {
        compose(w);
        g.assign(w.size(), 0.0);
        const double inv_ln2 = 1.0 / std::numbers::ln2;
        for (const auto& t : terms_) {
            marginal(t);
            for (std::size_t x = 0; x < sz_[0]; ++x)
                for (std::size_t y1 = 0; y1 < sz_[1]; ++y1)
                    for (std::size_t y2 = 0; y2 < sz_[2]; ++y2) {
                        const double px = p_.source.p(x, y1, y2);
                        if (px == 0.0) continue;
                        const std::size_t o = x * t.stride[0] + y1 * t.stride[1] + y2 * t.stride[2];
                        for (std::size_t a = 0; a < sz_[3]; ++a)
                            for (std::size_t b = 0; b < sz_[4]; ++b) {
                                const double q = marg_[o + a * t.stride[3] + b * t.stride[4]];
                                g[(x * sz_[3] + a) * sz_[4] + b] -=
                                    t.coef * px * (std::log2(std::max(q, 1e-300)) + inv_ln2);
                            }
                    }
        }
        for (std::size_t i = 0; i < g.size(); ++i)
            if (!p_.allowed[i]) g[i] = 0.0;
    }

private:
    struct Term {
        double coef;
        std::array<std::size_t, 5> stride;
        std::size_t size;
    };

    void compose(std::span<const double> w) {
        std::size_t o = 0;
        for (std::size_t x = 0; x < sz_[0]; ++x)
            for (std::size_t y1 = 0; y1 < sz_[1]; ++y1)
                for (std::size_t y2 = 0; y2 < sz_[2]; ++y2) {
                    const double px = p_.source.p(x, y1, y2);
                    const double* row = w.data() + x * sz_[3] * sz_[4];
                    for (std::size_t c = 0; c < sz_[3] * sz_[4]; ++c) joint_[o++] = px * row[c];
                }
    }

    void marginal(const Term& t) {
        marg_.assign(t.size, 0.0);
        std::size_t o = 0;
        for (std::size_t x = 0; x < sz_[0]; ++x)
            for (std::size_t y1 = 0; y1 < sz_[1]; ++y1)
                for (std::size_t y2 = 0; y2 < sz_[2]; ++y2) {
                    const std::size_t base = x * t.stride[0] + y1 * t.stride[1] + y2 * t.stride[2];
                    for (std::size_t a = 0; a < sz_[3]; ++a)
                        for (std::size_t b = 0; b < sz_[4]; ++b) marg_[base + a * t.stride[3] + b * t.stride[4]] += joint_[o++];
                }
    }

    const ChannelProblem& p_;
    std::array<std::size_t, 5> sz_{};
    std::vector<Term> terms_;
    std::vector<double> joint_, marg_;
};

TestChannel to_channel(const ChannelProblem& p, const std::vector<double>& w) {
    return TestChannel(p.source.nx(), p.na, p.nb, w);
}

std::vector<double> feasible_point(const ChannelProblem& p, std::span<const double> v) {
    std::vector<double> w = detail::project_feasible(p, v);
    detail::repair_budgets(p, w);
    return w;
}

bool lex_less(std::span<const double> a, std::span<const double> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace

double evaluate(const ChannelProblem& p, const EntropyCombination& f, std::span<const double> w) {
    Evaluator ev(p, f);
    return ev.value(w);
}

DescentResult descend_from(const ChannelProblem& p, const EntropyCombination& f, std::span<const double> start,
                           const DescentOptions& opt) {
    if (start.size() != p.allowed.size()) throw std::invalid_argument("start channel has the wrong size");
    Evaluator ev(p, f);
    std::vector<double> w = feasible_point(p, start), g, trial, step_vec(w.size());
    double fw = ev.value(w);
    double t = 1.0;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        ev.gradient(w, g);
        bool accepted = false;
        double gain = 0.0;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < w.size(); ++i) step_vec[i] = w[i] - t * g[i];
            trial = feasible_point(p, step_vec);
            double dir = 0.0, moved = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                dir += g[i] * (w[i] - trial[i]);
                moved = std::max(moved, std::abs(w[i] - trial[i]));
            }
            if (moved < 1e-15) break;
            const double ft = ev.value(trial);
            if (ft <= fw - 1e-4 * std::max(dir, 0.0) && ft < fw) {
                gain = fw - ft;
                w.swap(trial);
                fw = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted || gain < opt.tol) break;
        t = std::min(t * 4.0, 1e3);
    }
    return {fw, to_channel(p, w), it};
}

DescentResult multistart(const ChannelProblem& p, const EntropyCombination& f, std::span<const TestChannel> seeds,
                         const DescentOptions& opt) {
    const std::size_t nx = p.source.nx(), k = p.na * p.nb;
    std::optional<DescentResult> best;
    auto consider = [&](DescentResult r) {
        if (!best || r.value < best->value - 1e-12 ||
            (std::abs(r.value - best->value) <= 1e-12 && lex_less(r.channel.values(), best->channel.values())))
            best = std::move(r);
    };
    for (const auto& s : seeds) {
        if (s.nx() != nx || s.na() != p.na || s.nb() != p.nb) throw std::invalid_argument("seed channel shape mismatch");
        consider(descend_from(p, f, s.values(), opt));
    }
    std::mt19937_64 rng(opt.seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(nx * k);
    for (int r = 0; r < opt.restarts; ++r) {
        for (std::size_t x = 0; x < nx; ++x) {
            double tot = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                const double e = p.allowed[x * k + c] ? expo(rng) : 0.0;
                w[x * k + c] = e;
                tot += e;
            }
            for (std::size_t c = 0; c < k; ++c) w[x * k + c] /= tot;
        }
        consider(descend_from(p, f, w, opt));
    }
    if (!best) consider(descend_from(p, f, detail::cheapest_channel(p), opt));
    return std::move(*best);
}

} // namespace crrd::rd
