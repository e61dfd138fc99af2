#include "crrd/aux_search.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "crrd/descent.hpp"
#include "crrd/errors.hpp"
#include "crrd/hb_solvers.hpp"

namespace crrd::rd {

namespace {

constexpr double kSlack = 1e-12;

struct Side {
    const prob::DistortionMetric* metric;
    double budget;
    const prob::DistortionMetric* enc_metric = nullptr; // null: no encoder constraint
    double enc_budget = 0.0;
};

// p(x, y_j, u_j) for decoder j, flattened [(x * ny + y) * nu + u].
std::vector<double> side_joint(const prob::JointSource& s, std::span<const double> w, std::size_t nu1,
                               std::size_t nu2, int j) {
    const std::size_t nx = s.nx(), ny = j == 1 ? s.ny1() : s.ny2(), nu = j == 1 ? nu1 : nu2;
    std::vector<double> out(nx * ny * nu, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y1 = 0; y1 < s.ny1(); ++y1)
            for (std::size_t y2 = 0; y2 < s.ny2(); ++y2) {
                const double p = s.p(x, y1, y2);
                if (p == 0.0) continue;
                const std::size_t y = j == 1 ? y1 : y2;
                for (std::size_t u1 = 0; u1 < nu1; ++u1)
                    for (std::size_t u2 = 0; u2 < nu2; ++u2) {
                        const double v = w[(x * nu1 + u1) * nu2 + u2];
                        if (v != 0.0) out[(x * ny + y) * nu + (j == 1 ? u1 : u2)] += p * v;
                    }
            }
    return out;
}

struct Maps {
    std::vector<std::size_t> dec; // [u * ny + y]
    std::vector<std::size_t> enc; // [u * nx + x]
};

// Cost of reconstruction `xh` on the cell (y, u); infinite if some source
// letter with mass there forbids it.
double cell_cost(const prob::DistortionMetric& m, const std::vector<double>& pj, std::size_t nx, std::size_t ny,
                 std::size_t nu, std::size_t y, std::size_t u, std::size_t xh) {
    double c = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
        const double p = pj[(x * ny + y) * nu + u];
        if (p == 0.0) continue;
        if (m.forbidden(x, xh)) return INFINITY;
        c += p * m.value(x, xh);
    }
    return c;
}

// Decoder maps minimizing the expected distortion: per (u, y) argmin.
double best_decoder(const Side& side, const std::vector<double>& pj, std::size_t nx, std::size_t ny, std::size_t nu,
                    Maps* maps) {
    const std::size_t nxh = side.metric->cols();
    double total = 0.0;
    if (maps) maps->dec.assign(nu * ny, 0);
    for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t y = 0; y < ny; ++y) {
            double best = INFINITY;
            std::size_t arg = 0;
            for (std::size_t xh = 0; xh < nxh; ++xh) {
                const double c = cell_cost(*side.metric, pj, nx, ny, nu, y, u, xh);
                if (c < best) {
                    best = c;
                    arg = xh;
                }
            }
            if (best == INFINITY) {
                bool empty = true;
                for (std::size_t x = 0; x < nx; ++x) empty = empty && pj[(x * ny + y) * nu + u] == 0.0;
                if (!empty) return INFINITY;
                best = 0.0;
            }
            total += best;
            if (maps) maps->dec[u * ny + y] = arg;
        }
    return total;
}

struct FrontPoint {
    double a, b;
    std::vector<std::uint32_t> rows; // chosen row per u so far
};

void prune(std::vector<FrontPoint>& f) {
    std::sort(f.begin(), f.end(), [](const FrontPoint& l, const FrontPoint& r) {
        return l.a < r.a || (l.a == r.a && l.b < r.b);
    });
    std::vector<FrontPoint> kept;
    double bmin = INFINITY;
    for (auto& p : f)
        if (p.b < bmin) {
            bmin = p.b;
            kept.push_back(std::move(p));
        }
    f.swap(kept);
}

struct Row {
    double a, b;
    std::vector<std::size_t> dec;
    std::vector<std::size_t> enc;
};

// Decoder row r over the y support of u, and the encoder letters that best
// match it for each x.
Row evaluate_row(const Side& side, const std::vector<double>& pj, std::size_t nx, std::size_t ny, std::size_t nu,
                 std::size_t u, const std::vector<std::size_t>& dec) {
    const auto& me = *side.enc_metric;
    const std::size_t nxh = me.cols();
    Row r{0.0, 0.0, dec, std::vector<std::size_t>(nx, 0)};
    for (std::size_t y = 0; y < ny; ++y) {
        const double c = cell_cost(*side.metric, pj, nx, ny, nu, y, u, dec[y]);
        if (c == INFINITY) {
            r.a = INFINITY;
            return r;
        }
        r.a += c;
    }
    for (std::size_t x = 0; x < nx; ++x) {
        double best = INFINITY;
        for (std::size_t xe = 0; xe < nxh; ++xe) {
            double c = 0.0;
            for (std::size_t y = 0; y < ny && c < INFINITY; ++y) {
                const double p = pj[(x * ny + y) * nu + u];
                if (p == 0.0) continue;
                c = me.forbidden(dec[y], xe) ? INFINITY : c + p * me.value(dec[y], xe);
            }
            if (c < best) {
                best = c;
                r.enc[x] = xe;
            }
        }
        r.b += best;
    }
    return r;
}

// Exact decision over all decoder/encoder maps when their number is within
// budget; otherwise the argmin decoder is tried alone and `heuristic` set.
bool conr_side_feasible(const Side& side, const std::vector<double>& pj, std::size_t nx, std::size_t ny,
                        std::size_t nu, std::uint64_t map_budget, bool& heuristic, Maps* maps) {
    const std::size_t nxh = side.metric->cols();
    std::vector<std::vector<std::size_t>> support(nu);
    double combos = 1.0;
    for (std::size_t u = 0; u < nu; ++u) {
        for (std::size_t y = 0; y < ny; ++y) {
            double m = 0.0;
            for (std::size_t x = 0; x < nx; ++x) m += pj[(x * ny + y) * nu + u];
            if (m > 0.0) support[u].push_back(y);
        }
        combos *= std::pow(static_cast<double>(nxh), static_cast<double>(support[u].size()));
    }
    if (maps) {
        maps->dec.assign(nu * ny, 0);
        maps->enc.assign(nu * nx, 0);
    }

    if (combos > static_cast<double>(map_budget)) {
        heuristic = true;
        Maps greedy;
        if (best_decoder(side, pj, nx, ny, nu, &greedy) > side.budget + kSlack) return false;
        double b = 0.0;
        for (std::size_t u = 0; u < nu; ++u) {
            std::vector<std::size_t> dec(greedy.dec.begin() + u * ny, greedy.dec.begin() + (u + 1) * ny);
            const Row r = evaluate_row(side, pj, nx, ny, nu, u, dec);
            b += r.b;
            if (maps) std::copy(r.enc.begin(), r.enc.end(), maps->enc.begin() + u * nx);
        }
        if (maps) maps->dec = greedy.dec;
        return b <= side.enc_budget + kSlack;
    }

    std::vector<std::vector<Row>> rows(nu);
    std::vector<FrontPoint> front{{0.0, 0.0, {}}};
    for (std::size_t u = 0; u < nu; ++u) {
        const std::size_t k = support[u].size();
        std::vector<std::size_t> digits(k, 0), dec(ny, 0);
        while (true) {
            for (std::size_t i = 0; i < k; ++i) dec[support[u][i]] = digits[i];
            Row r = evaluate_row(side, pj, nx, ny, nu, u, dec);
            if (r.a <= side.budget + kSlack && r.b <= side.enc_budget + kSlack) rows[u].push_back(std::move(r));
            std::size_t i = k;
            while (i-- > 0) {
                if (++digits[i] < nxh) break;
                digits[i] = 0;
            }
            if (i == SIZE_MAX) break;
        }
        std::vector<FrontPoint> next;
        for (const auto& f : front)
            for (std::uint32_t ri = 0; ri < rows[u].size(); ++ri) {
                const double a = f.a + rows[u][ri].a, b = f.b + rows[u][ri].b;
                if (a > side.budget + kSlack || b > side.enc_budget + kSlack) continue;
                FrontPoint q{a, b, f.rows};
                q.rows.push_back(ri);
                next.push_back(std::move(q));
            }
        prune(next);
        front.swap(next);
        if (front.empty()) return false;
    }
    if (maps) {
        const auto& pick = front.front();
        for (std::size_t u = 0; u < nu; ++u) {
            const Row& r = rows[u][pick.rows[u]];
            std::copy(r.dec.begin(), r.dec.end(), maps->dec.begin() + u * ny);
            std::copy(r.enc.begin(), r.enc.end(), maps->enc.begin() + u * nx);
        }
    }
    return true;
}

bool vacuous(const prob::DistortionMetric& me, double de) {
    double mx = 0.0;
    for (const auto& e : me.entries()) {
        if (!e) return false;
        mx = std::max(mx, *e);
    }
    return de >= mx;
}

struct SearchSpec {
    const prob::JointSource* source;
    AuxCaps caps;
    Side side1, side2;
    std::uint64_t map_budget;
};

bool side_feasible(const SearchSpec& s, int j, std::span<const double> w, bool& heuristic, Maps* maps) {
    const Side& side = j == 1 ? s.side1 : s.side2;
    const std::size_t nx = s.source->nx(), ny = j == 1 ? s.source->ny1() : s.source->ny2();
    const std::size_t nu = j == 1 ? s.caps.u1 : s.caps.u2;
    const auto pj = side_joint(*s.source, w, s.caps.u1, s.caps.u2, j);
    if (!side.enc_metric) return best_decoder(side, pj, nx, ny, nu, maps) <= side.budget + kSlack;
    return conr_side_feasible(side, pj, nx, ny, nu, s.map_budget, heuristic, maps);
}

// Per-letter expected cost p(x) E[d(x, dec(Y))|x] of one decoder row, for
// every map y -> xhat. Rows dominated entrywise by another are dropped:
// anything they allow, the dominating row allows too.
std::vector<std::vector<double>> decoder_rows(const prob::JointSource& src, const prob::DistortionMetric& m, int j) {
    const std::size_t nx = src.nx(), ny = j == 1 ? src.ny1() : src.ny2(), nxh = m.cols();
    const prob::FinitePmf pxy = src.pmf().marginal({0, static_cast<std::size_t>(j)});
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> dec(ny, 0);
    while (true) {
        std::vector<double> c(nx, 0.0);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y) {
                const double p = pxy.mass()[x * ny + y];
                if (p == 0.0) continue;
                c[x] = m.forbidden(x, dec[y]) || c[x] == INFINITY ? INFINITY : c[x] + p * m.value(x, dec[y]);
            }
        rows.push_back(std::move(c));
        std::size_t i = ny;
        while (i-- > 0) {
            if (++dec[i] < nxh) break;
            dec[i] = 0;
        }
        if (i == SIZE_MAX) break;
    }
    std::vector<std::vector<double>> kept;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        bool dominated = false;
        for (std::size_t q = 0; q < rows.size() && !dominated; ++q) {
            if (q == r) continue;
            bool le = true, lt = false;
            for (std::size_t x = 0; x < nx; ++x) {
                le = le && rows[q][x] <= rows[r][x];
                lt = lt || rows[q][x] < rows[r][x];
            }
            // equal rows: keep the first
            dominated = le && (lt || q < r);
        }
        if (!dominated) kept.push_back(rows[r]);
    }
    return kept;
}

// Nondecreasing row assignments u -> row; relabelling U maps a channel onto
// another grid channel with the same value, so sorted assignments suffice.
std::vector<std::vector<std::size_t>> multisets(std::size_t rows, std::size_t nu) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(nu, 0);
    while (true) {
        out.push_back(cur);
        std::size_t i = nu;
        while (i-- > 0) {
            if (++cur[i] < rows) {
                for (std::size_t k = i + 1; k < nu; ++k) cur[k] = cur[i];
                break;
            }
        }
        if (i == SIZE_MAX) break;
    }
    return out;
}

constexpr std::size_t kMaxMapProblems = 20000;

// Same minimum as the joint search when neither side has an encoder
// constraint: fixing the decoder maps makes both budgets linear in the
// channel, so each map pair is a budgeted grid problem with pruning.
std::optional<std::vector<double>> search_by_maps(const SearchSpec& s, const AuxOptions& opt) {
    const auto& src = *s.source;
    const std::size_t nx = src.nx(), nu1 = s.caps.u1, nu2 = s.caps.u2;
    const auto rows1 = decoder_rows(src, *s.side1.metric, 1), rows2 = decoder_rows(src, *s.side2.metric, 2);
    const auto sets1 = multisets(rows1.size(), nu1), sets2 = multisets(rows2.size(), nu2);
    if (sets1.size() * sets2.size() > kMaxMapProblems) return std::nullopt;

    const EntropyCombination f = functional::hb_cr();
    std::optional<std::vector<double>> best_w;
    double best = INFINITY;
    for (const auto& a : sets1)
        for (const auto& b : sets2) {
            ChannelProblem p{src, nu1, nu2, std::vector<char>(nx * nu1 * nu2, 1), {}};
            LinearBudget l1{std::vector<double>(p.allowed.size(), 0.0), s.side1.budget};
            LinearBudget l2{std::vector<double>(p.allowed.size(), 0.0), s.side2.budget};
            for (std::size_t x = 0; x < nx; ++x)
                for (std::size_t u1 = 0; u1 < nu1; ++u1)
                    for (std::size_t u2 = 0; u2 < nu2; ++u2) {
                        const std::size_t i = (x * nu1 + u1) * nu2 + u2;
                        const double c1 = rows1[a[u1]][x], c2 = rows2[b[u2]][x];
                        if (c1 == INFINITY || c2 == INFINITY) {
                            p.allowed[i] = 0;
                            continue;
                        }
                        l1.coef[i] = c1;
                        l2.coef[i] = c2;
                    }
            p.budgets = {std::move(l1), std::move(l2)};
            bool reachable = true;
            for (std::size_t x = 0; x < nx && reachable; ++x) {
                bool any = false;
                for (std::size_t k = 0; k < nu1 * nu2; ++k) any = any || p.allowed[x * nu1 * nu2 + k];
                reachable = any;
            }
            if (!reachable) continue;
            const GridEngine g(std::move(p), opt.step, opt.guard);
            const auto r = g.minimize(f);
            if (!r.found) continue;
            const TestChannel ch = g.channel_at(r.index);
            const double v = std::max(0.0, r.value);
            const bool tie = best_w && std::abs(v - best) <= 1e-12 &&
                             std::lexicographical_compare(ch.values().begin(), ch.values().end(), best_w->begin(),
                                                          best_w->end());
            if (v < best - 1e-12 || tie) {
                best = std::min(best, v);
                best_w.emplace(ch.values().begin(), ch.values().end());
            }
            if (best == 0.0) return best_w;
        }
    if (!best_w) return std::vector<double>{}; // searched, nothing feasible
    return best_w;
}

AuxResult search(const SearchSpec& s, const AuxOptions& opt) {
    const auto& src = *s.source;
    const prob::FinitePmf px = src.pmf().marginal({0});
    for (const Side* side : {&s.side1, &s.side2}) {
        double floor = 0.0;
        for (std::size_t x = 0; x < src.nx(); ++x) {
            double best = INFINITY;
            for (std::size_t xh = 0; xh < side->metric->cols(); ++xh)
                if (!side->metric->forbidden(x, xh)) best = std::min(best, side->metric->value(x, xh));
            floor += px.mass()[x] * best;
        }
        if (floor > side->budget + kSlack) throw InfeasibleBudget("distortion budget below its floor");
    }

    const ChannelProblem p = auxiliary_problem(src, s.caps.u1, s.caps.u2);
    const EntropyCombination f = functional::hb_cr();
    GridEngine g(p, opt.step, opt.guard); // also enforces the guard on the full grid
    bool heuristic = false;
    auto feasible = [&](std::span<const double> w) {
        return side_feasible(s, 1, w, heuristic, nullptr) && side_feasible(s, 2, w, heuristic, nullptr);
    };

    std::optional<std::vector<double>> best_w;
    double best = INFINITY;
    std::optional<std::vector<double>> by_maps;
    if (!s.side1.enc_metric && !s.side2.enc_metric) by_maps = search_by_maps(s, opt);
    if (by_maps) {
        if (!by_maps->empty()) best_w = std::move(by_maps);
    } else {
        const auto r = g.minimize(f, feasible);
        if (r.found) {
            const TestChannel ch = g.channel_at(r.index);
            best_w.emplace(ch.values().begin(), ch.values().end());
        }
    }
    if (best_w) best = std::max(0.0, evaluate(p, f, *best_w));
    for (const auto& seed : opt.seeds) {
        if (seed.nx() != src.nx() || seed.na() != s.caps.u1 || seed.nb() != s.caps.u2)
            throw std::invalid_argument("seed channel does not match the auxiliary caps");
        const double v = std::max(0.0, evaluate(p, f, seed.values()));
        if (v < best - 1e-12 && feasible(seed.values())) {
            best = v;
            best_w.emplace(seed.values().begin(), seed.values().end());
        }
    }
    if (!best_w) throw InfeasibleBudget("no auxiliary channel in the search set meets the budgets");

    Maps m1, m2;
    side_feasible(s, 1, *best_w, heuristic, &m1);
    side_feasible(s, 2, *best_w, heuristic, &m2);
    AuxChannel witness{TestChannel(src.nx(), s.caps.u1, s.caps.u2, *best_w), m1.dec, m2.dec, m1.enc, m2.enc};
    return {best, std::move(witness), heuristic, s.caps};
}

void check_metric_rows(const prob::JointSource& source, const prob::DistortionMetric& m1,
                       const prob::DistortionMetric& m2) {
    if (m1.rows() != source.nx() || m2.rows() != source.nx())
        throw std::invalid_argument("metric rows must match the source alphabet");
}

} // namespace

AuxCaps conr_exact_caps(std::size_t nx) { return {nx + 4, (nx + 2) * (nx + 2)}; }

void ConRConstraint::validate(std::size_t nxhat1, std::size_t nxhat2) const {
    if (me1.rows() != nxhat1 || me1.cols() != nxhat1 || me2.rows() != nxhat2 || me2.cols() != nxhat2)
        throw std::invalid_argument("encoder metrics must be square over the reconstruction alphabets");
    if (!(de1 >= 0.0) || !(de2 >= 0.0)) throw std::invalid_argument("encoder budgets must be nonnegative");
}

TestChannel embed_reconstruction(const TestChannel& ch, AuxCaps caps) {
    if (caps.u1 < ch.na() || caps.u2 < ch.nb()) throw std::invalid_argument("caps smaller than the reconstruction alphabets");
    std::vector<double> w(ch.nx() * caps.u1 * caps.u2, 0.0);
    for (std::size_t x = 0; x < ch.nx(); ++x)
        for (std::size_t a = 0; a < ch.na(); ++a)
            for (std::size_t b = 0; b < ch.nb(); ++b) w[(x * caps.u1 + a) * caps.u2 + b] = ch(x, a, b);
    return TestChannel(ch.nx(), caps.u1, caps.u2, std::move(w));
}

AuxResult brute_force_hb_nocr(const prob::JointSource& source, const prob::DistortionMetric& m1,
                              const prob::DistortionMetric& m2, closed::DistortionPair pair, AuxCaps caps,
                              const AuxOptions& opt) {
    check_metric_rows(source, m1, m2);
    SearchSpec s{&source, caps, {&m1, pair.d1}, {&m2, pair.d2}, opt.map_budget};
    return search(s, opt);
}

AuxResult brute_force_wz(const prob::FinitePmf& pxy, const prob::DistortionMetric& m, double d, std::size_t cap,
                         const AuxOptions& opt) {
    const prob::JointSource source = point_source(pxy);
    const prob::DistortionMetric zero = prob::DistortionMetric::zero(source.nx(), 1);
    check_metric_rows(source, zero, m);
    SearchSpec s{&source, {1, cap}, {&zero, 0.0}, {&m, d}, opt.map_budget};
    return search(s, opt);
}

AuxResult brute_force_conr(const prob::JointSource& source, const prob::DistortionMetric& m1,
                           const prob::DistortionMetric& m2, closed::DistortionPair pair, const ConRConstraint& conr,
                           AuxCaps caps, const AuxOptions& opt) {
    check_metric_rows(source, m1, m2);
    conr.validate(m1.cols(), m2.cols());
    SearchSpec s{&source, caps, {&m1, pair.d1}, {&m2, pair.d2}, opt.map_budget};
    if (!vacuous(conr.me1, conr.de1)) {
        s.side1.enc_metric = &conr.me1;
        s.side1.enc_budget = conr.de1;
    }
    if (!vacuous(conr.me2, conr.de2)) {
        s.side2.enc_metric = &conr.me2;
        s.side2.enc_budget = conr.de2;
    }
    AuxResult r = search(s, opt);
    const AuxCaps exact = conr_exact_caps(source.nx());
    if (caps.u1 < exact.u1 || caps.u2 < exact.u2) r.heuristic = true;
    return r;
}

} // namespace crrd::rd
