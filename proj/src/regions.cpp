#include "crrd/regions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "crrd/hb_solvers.hpp"

namespace crrd::rd {

namespace {

enum class Mapping { direct, coop };

std::pair<double, double> map_rates(Mapping m, double f1, double f2) {
    f1 = std::max(0.0, f1);
    f2 = std::max(0.0, f2);
    if (m == Mapping::coop) return {f1, std::max(0.0, f2 - f1)};
    return {f1, f2};
}

void require_chain(const prob::JointSource& s, std::array<prob::Axis, 3> order, const char* what) {
    if (!prob::check_markov_chain(s, order)) throw std::invalid_argument(std::string("source fails ") + what);
}

bool seed_feasible(const ChannelProblem& p, const TestChannel& ch) {
    const auto w = ch.values();
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] > 0.0 && !p.allowed[i]) return false;
    for (const auto& b : p.budgets) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += b.coef[i] * w[i];
        if (s > b.budget + kFeasibilityTol) return false;
    }
    return true;
}

struct Candidate {
    double r1, r2;
    GridIndex index;
    const TestChannel* seed = nullptr;
};

RateRegion sample(const ChannelProblem& p, const EntropyCombination& f1, const EntropyCombination& f2, Mapping mapping,
                  const SamplerConfig& cfg) {
    const GridEngine g(p, cfg.step, cfg.guard);
    const std::size_t L = std::max<std::size_t>(cfg.lambdas, 2);
    std::vector<double> lambda(L);
    for (std::size_t i = 0; i < L; ++i) lambda[i] = static_cast<double>(i) / static_cast<double>(L - 1);

    std::map<double, Candidate> front;
    std::vector<std::optional<Candidate>> best(L);
    std::vector<double> best_score(L, INFINITY);

    auto offer = [&](double r1, double r2, const GridIndex* idx, const TestChannel* seed) {
        if (cfg.mode == SamplerMode::exhaustive) {
            auto it = front.upper_bound(r1);
            if (it != front.begin() && std::prev(it)->second.r2 <= r2) return;
            Candidate c{r1, r2, idx ? *idx : GridIndex{}, seed};
            front[r1] = std::move(c);
            it = front.upper_bound(r1);
            while (it != front.end() && it->second.r2 >= r2) it = front.erase(it);
            return;
        }
        for (std::size_t i = 0; i < L; ++i) {
            const double s = lambda[i] * r1 + (1.0 - lambda[i]) * r2;
            const bool better = s < best_score[i] - 1e-12 ||
                                (s <= best_score[i] + 1e-12 && best[i] && r1 + r2 < best[i]->r1 + best[i]->r2 - 1e-12);
            if (better) {
                best_score[i] = std::min(s, best_score[i]);
                best[i] = Candidate{r1, r2, idx ? *idx : GridIndex{}, seed};
            }
        }
    };

    g.sweep(f1, f2, [&](double v1, double v2, const GridIndex& idx) {
        const auto [r1, r2] = map_rates(mapping, v1, v2);
        offer(r1, r2, &idx, nullptr);
    });
    for (const auto& s : cfg.seeds) {
        if (s.nx() != p.source.nx() || s.na() != p.na || s.nb() != p.nb)
            throw std::invalid_argument("seed channel shape mismatch");
        if (!seed_feasible(p, s)) continue;
        const auto [r1, r2] = map_rates(mapping, f1.value(p.source, s), f2.value(p.source, s));
        offer(r1, r2, nullptr, &s);
    }

    std::vector<RatePoint> points;
    auto to_point = [&](const Candidate& c) {
        RatePoint pt{c.r1, c.r2, c.seed ? *c.seed : g.channel_at(c.index), c.seed ? "seed" : "grid", false};
        return pt;
    };
    if (cfg.mode == SamplerMode::exhaustive) {
        for (const auto& [r1, c] : front) points.push_back(to_point(c));
    } else {
        for (std::size_t i = 0; i < L; ++i) {
            if (!best[i]) continue;
            RatePoint pt = to_point(*best[i]);
            if (cfg.polish && mapping == Mapping::direct) {
                const EntropyCombination h = f1.scaled(lambda[i]) + f2.scaled(1.0 - lambda[i]);
                const TestChannel start = *pt.witness;
                const auto r = multistart(p, h, std::span(&start, 1), cfg.descent);
                const auto [q1, q2] = map_rates(mapping, f1.value(p.source, r.channel), f2.value(p.source, r.channel));
                points.push_back({q1, q2, r.channel, "descent", false});
            }
            points.push_back(std::move(pt));
        }
    }
    return {dominance_filter(std::move(points)), true};
}

} // namespace

std::vector<RatePoint> dominance_filter(std::vector<RatePoint> points) {
    std::vector<RatePoint> finite, unbounded;
    for (auto& p : points) (p.r2_unbounded ? unbounded : finite).push_back(std::move(p));
    std::stable_sort(finite.begin(), finite.end(), [](const RatePoint& a, const RatePoint& b) {
        return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 < b.r2);
    });
    std::vector<RatePoint> out;
    double r2min = INFINITY;
    for (auto& p : finite)
        if (p.r2 < r2min) {
            r2min = p.r2;
            out.push_back(std::move(p));
        }
    std::stable_sort(unbounded.begin(), unbounded.end(),
                     [](const RatePoint& a, const RatePoint& b) { return a.r1 < b.r1; });
    for (auto& p : unbounded)
        if (out.empty() || !out.back().r2_unbounded || out.back().r1 != p.r1) out.push_back(std::move(p));
    return out;
}

RateRegion coop_region_xy1y2(const prob::JointSource& source, const prob::DistortionMetric& m1,
                             const prob::DistortionMetric& m2, closed::DistortionPair pair, const SamplerConfig& cfg) {
    require_chain(source, {prob::Axis::x, prob::Axis::y1, prob::Axis::y2}, "X - Y1 - Y2");
    const ChannelProblem p = hb_problem(source, m1, m2, pair);
    return sample(p, functional::both_given_y1(), functional::coop_sum(), Mapping::coop, cfg);
}

RateRegion coop_region_xy2y1(const prob::JointSource& source, const prob::DistortionMetric& m1,
                             const prob::DistortionMetric& m2, closed::DistortionPair pair, const SamplerConfig& cfg) {
    require_chain(source, {prob::Axis::x, prob::Axis::y2, prob::Axis::y1}, "X - Y2 - Y1");
    const ChannelProblem p = hb_problem(source, m1, m2, pair);
    const RateWitness rho = solve_hb_cr(p, functional::hb_cr(), cfg.scalar_step, cfg.guard, cfg.descent, cfg.seeds);
    RateRegion region;
    region.boundary.push_back({rho.rate, 0.0, rho.witness, "hb_minimum", false});
    region.boundary.push_back({rho.rate, 0.0, std::nullopt, "hb_minimum", true});
    return region;
}

RateRegion cascade_region_xy1y2(const prob::JointSource& source, const prob::DistortionMetric& m1,
                                const prob::DistortionMetric& m2, closed::DistortionPair pair,
                                const SamplerConfig& cfg) {
    require_chain(source, {prob::Axis::x, prob::Axis::y1, prob::Axis::y2}, "X - Y1 - Y2");
    const ChannelProblem p = hb_problem(source, m1, m2, pair);
    return sample(p, functional::both_given_y1(), functional::second_given_y2(), Mapping::direct, cfg);
}

double cascade_gap(const RatePoint& corner, const RateRegion& inner) {
    double gap = INFINITY;
    for (const auto& q : inner.boundary) {
        if (q.r2_unbounded) continue;
        gap = std::min(gap, std::max({q.r1 - corner.r1, q.r2 - corner.r2, 0.0}));
    }
    return gap;
}

CascadeBounds cascade_bounds_xy2y1(const prob::JointSource& source, const prob::DistortionMetric& m1,
                                   const prob::DistortionMetric& m2, closed::DistortionPair pair,
                                   const SamplerConfig& cfg) {
    require_chain(source, {prob::Axis::x, prob::Axis::y2, prob::Axis::y1}, "X - Y2 - Y1");
    const ChannelProblem p = hb_problem(source, m1, m2, pair);
    const RateWitness r1 = solve_hb_cr(p, functional::hb_cr(), cfg.scalar_step, cfg.guard, cfg.descent, cfg.seeds);

    // Decoder 2 alone: the B-marginal of each seed is a point seed.
    const prob::FinitePmf pxy2 = source.pmf().marginal({0, 2});
    const ChannelProblem pp = point_problem(pxy2, m2, pair.d2);
    std::vector<TestChannel> point_seeds;
    for (const auto& s : cfg.seeds) {
        std::vector<double> w(s.nx() * s.nb(), 0.0);
        for (std::size_t x = 0; x < s.nx(); ++x)
            for (std::size_t a = 0; a < s.na(); ++a)
                for (std::size_t b = 0; b < s.nb(); ++b) w[x * s.nb() + b] += s(x, a, b);
        point_seeds.emplace_back(s.nx(), 1, s.nb(), std::move(w));
    }
    const RateWitness r2 =
        solve_hb_cr(pp, functional::hb_cr(), cfg.scalar_step, kPointGridGuard, cfg.descent, point_seeds);

    CascadeBounds out;
    out.outer.boundary.push_back({r1.rate, r2.rate, std::nullopt, "outer", false});
    out.inner = sample(p, functional::hb_cr(), functional::both_given_y2(), Mapping::direct, cfg);
    out.gap = cascade_gap(out.outer.boundary.front(), out.inner);
    return out;
}

CascadeBounds cascade_bounds_xy2y1(closed::DistortionPair pair, const prob::GaussianSpec& spec) {
    const auto t = closed::cascade_region_gaussian(pair, spec);
    CascadeBounds out;
    out.outer.boundary.push_back({t.r1_min, t.r2_min, std::nullopt, "closed_form", false});
    out.inner.boundary.push_back({t.r1_min, t.r2_min, std::nullopt, "closed_form", false});
    out.gap = 0.0;
    return out;
}

} // namespace crrd::rd
