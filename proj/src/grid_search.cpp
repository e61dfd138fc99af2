#include "crrd/grid.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "crrd/errors.hpp"

namespace crrd::rd {

namespace {

constexpr double kBudgetSlack = 1e-12;

inline double xlog2x(double v) { return v > 0.0 ? v * std::log2(v) : 0.0; }

double composition_count(std::size_t n, std::size_t parts) {
    // C(n + parts - 1, parts - 1)
    double c = 1.0;
    for (std::size_t i = 1; i < parts; ++i) c = c * static_cast<double>(n + i) / static_cast<double>(i);
    return std::round(c);
}

// All compositions of n into `parts` nonnegative parts, lexicographically
// ascending, appended flat.
void compositions(std::uint32_t n, std::size_t parts, std::vector<std::uint16_t>& out) {
    std::vector<std::uint16_t> cur(parts, 0);
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t left) {
        if (i + 1 == parts) {
            cur[i] = static_cast<std::uint16_t>(left);
            out.insert(out.end(), cur.begin(), cur.end());
            return;
        }
        for (std::uint32_t v = 0; v <= left; ++v) {
            cur[i] = static_cast<std::uint16_t>(v);
            rec(i + 1, left - v);
        }
    };
    rec(0, n);
}

} // namespace

ChannelProblem reconstruction_problem(const prob::JointSource& source, const prob::DistortionMetric& m1,
                                      const prob::DistortionMetric& m2, double d1, double d2) {
    const std::size_t nx = source.nx();
    if (m1.rows() != nx || m2.rows() != nx) throw std::invalid_argument("metric rows must match the source alphabet");
    ChannelProblem p{source, m1.cols(), m2.cols(), {}, {}};
    const prob::FinitePmf px = source.pmf().marginal({0});
    p.allowed.assign(nx * p.na * p.nb, 0);
    LinearBudget b1{std::vector<double>(p.allowed.size(), 0.0), d1};
    LinearBudget b2{std::vector<double>(p.allowed.size(), 0.0), d2};
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t a = 0; a < p.na; ++a)
            for (std::size_t b = 0; b < p.nb; ++b) {
                const std::size_t i = (x * p.na + a) * p.nb + b;
                if (m1.forbidden(x, a) || m2.forbidden(x, b)) continue;
                p.allowed[i] = 1;
                b1.coef[i] = px.mass()[x] * m1.value(x, a);
                b2.coef[i] = px.mass()[x] * m2.value(x, b);
            }
    p.budgets = {std::move(b1), std::move(b2)};
    return p;
}

ChannelProblem auxiliary_problem(const prob::JointSource& source, std::size_t nu1, std::size_t nu2) {
    if (nu1 == 0 || nu2 == 0) throw std::invalid_argument("auxiliary alphabets must be non-empty");
    ChannelProblem p{source, nu1, nu2, std::vector<char>(source.nx() * nu1 * nu2, 1), {}};
    return p;
}

struct GridEngine::Compiled {
    std::size_t k = 1;
    std::vector<double> constant;                                // [k]
    std::vector<Slot> slots;
    std::vector<std::vector<std::uint16_t>> slot_cnt;            // [x][cand * S + s]
    std::vector<std::vector<std::vector<double>>> sep;           // [x][k][cand]
};

GridEngine::GridEngine(ChannelProblem problem, double step, std::uint64_t guard) : problem_(std::move(problem)) {
    if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("grid step must lie in (0, 1]");
    const double inv = 1.0 / step;
    const double rounded = std::round(inv);
    if (std::abs(inv - rounded) > 1e-6 * rounded || rounded > 65535.0)
        throw std::invalid_argument("grid step must be 1/n for an integer n");
    n_ = static_cast<std::uint32_t>(rounded);

    const std::size_t nx = problem_.source.nx(), k = problem_.na * problem_.nb;
    if (problem_.allowed.size() != nx * k) throw std::invalid_argument("allowed mask has the wrong size");
    for (const auto& b : problem_.budgets)
        if (b.coef.size() != nx * k) throw std::invalid_argument("budget coefficients have the wrong size");

    double total = 1.0;
    cells_.resize(nx);
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t c = 0; c < k; ++c)
            if (problem_.allowed[x * k + c]) cells_[x].push_back(static_cast<std::uint32_t>(c));
        if (cells_[x].empty()) throw InfeasibleBudget("every reconstruction is forbidden for some source letter");
        const double m = composition_count(n_, cells_[x].size());
        total *= m;
        if (total > static_cast<double>(guard))
            throw GuardExceeded("channel grid too large", static_cast<std::uint64_t>(std::min(total, 1.8e19)), guard);
    }
    size_ = static_cast<std::uint64_t>(total);

    counts_.resize(nx);
    dist_.resize(nx);
    for (std::size_t x = 0; x < nx; ++x) {
        const std::size_t nc = cells_[x].size();
        compositions(n_, nc, counts_[x]);
        const std::size_t m = counts_[x].size() / nc;
        dist_[x].assign(problem_.budgets.size(), std::vector<double>(m, 0.0));
        for (std::size_t j = 0; j < problem_.budgets.size(); ++j) {
            const auto& coef = problem_.budgets[j].coef;
            for (std::size_t c = 0; c < m; ++c) {
                double d = 0.0;
                for (std::size_t i = 0; i < nc; ++i)
                    d += coef[x * k + cells_[x][i]] * (static_cast<double>(counts_[x][c * nc + i]) / n_);
                dist_[x][j][c] = d;
            }
        }
    }
}

TestChannel GridEngine::channel_at(const GridIndex& index) const {
    const std::size_t nx = problem_.source.nx(), k = problem_.na * problem_.nb;
    if (index.cand.size() != nx) throw std::invalid_argument("grid index rank mismatch");
    std::vector<double> cond(nx * k, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
        const std::size_t nc = cells_[x].size();
        for (std::size_t i = 0; i < nc; ++i)
            cond[x * k + cells_[x][i]] = static_cast<double>(counts_[x].at(index.cand[x] * nc + i)) / n_;
    }
    return TestChannel(nx, problem_.na, problem_.nb, std::move(cond));
}

GridEngine::Compiled GridEngine::compile(std::span<const EntropyCombination> fs) const {
    const auto& src = problem_.source;
    const std::size_t nx = src.nx(), ny1 = src.ny1(), ny2 = src.ny2(), na = problem_.na, nb = problem_.nb;
    Compiled c;
    c.k = fs.size();
    c.constant.assign(c.k, 0.0);

    std::map<unsigned, std::vector<double>> coefs;
    for (std::size_t f = 0; f < fs.size(); ++f)
        for (const auto& t : fs[f].terms()) {
            auto& v = coefs[t.mask];
            v.resize(c.k, 0.0);
            v[f] += t.coef;
        }

    struct SepItem {
        std::size_t x;
        double w;
        std::vector<std::size_t> cells; // flat (a, b) cells
        std::vector<double> coef;
    };
    std::vector<SepItem> sep_items;
    std::vector<std::vector<std::size_t>> slot_cells;

    for (const auto& [mask, cf] : coefs) {
        const bool has_x = mask & kX, in_y1 = mask & kY1, in_y2 = mask & kY2, in_a = mask & kA, in_b = mask & kB;
        if (!in_a && !in_b) {
            prob::AxisSet axes;
            if (has_x) axes.push_back(0);
            if (in_y1) axes.push_back(1);
            if (in_y2) axes.push_back(2);
            const double h = prob::entropy(src.pmf().marginal(axes));
            for (std::size_t f = 0; f < c.k; ++f) c.constant[f] += cf[f] * h;
            continue;
        }
        for (std::size_t y1c = 0; y1c < (in_y1 ? ny1 : 1); ++y1c)
            for (std::size_t y2c = 0; y2c < (in_y2 ? ny2 : 1); ++y2c) {
                std::vector<double> w(nx, 0.0);
                std::size_t nonzero = 0;
                for (std::size_t x = 0; x < nx; ++x) {
                    for (std::size_t y1 = 0; y1 < ny1; ++y1)
                        for (std::size_t y2 = 0; y2 < ny2; ++y2)
                            if ((!in_y1 || y1 == y1c) && (!in_y2 || y2 == y2c)) w[x] += src.p(x, y1, y2);
                    if (w[x] > 0.0) ++nonzero;
                }
                if (nonzero == 0) continue;
                for (std::size_t av = 0; av < (in_a ? na : 1); ++av)
                    for (std::size_t bv = 0; bv < (in_b ? nb : 1); ++bv) {
                        std::vector<std::size_t> cells;
                        for (std::size_t a = 0; a < na; ++a)
                            for (std::size_t b = 0; b < nb; ++b)
                                if ((!in_a || a == av) && (!in_b || b == bv)) cells.push_back(a * nb + b);
                        if (has_x || nonzero == 1) {
                            for (std::size_t x = 0; x < nx; ++x)
                                if (w[x] > 0.0) sep_items.push_back({x, w[x], cells, cf});
                        } else {
                            c.slots.push_back({w, cf});
                            slot_cells.push_back(std::move(cells));
                        }
                    }
            }
    }

    const std::size_t S = c.slots.size();
    c.slot_cnt.resize(nx);
    c.sep.resize(nx);
    for (std::size_t x = 0; x < nx; ++x) {
        const std::size_t nc = cells_[x].size(), m = counts_[x].size() / nc;
        // position of each flat cell within the allowed list, or npos
        std::vector<std::size_t> pos(na * nb, SIZE_MAX);
        for (std::size_t i = 0; i < nc; ++i) pos[cells_[x][i]] = i;
        auto mass_of = [&](std::size_t cand, const std::vector<std::size_t>& cells) {
            std::uint32_t s = 0;
            for (std::size_t cell : cells)
                if (pos[cell] != SIZE_MAX) s += counts_[x][cand * nc + pos[cell]];
            return s;
        };
        c.slot_cnt[x].assign(m * S, 0);
        for (std::size_t cand = 0; cand < m; ++cand)
            for (std::size_t s = 0; s < S; ++s)
                c.slot_cnt[x][cand * S + s] = static_cast<std::uint16_t>(mass_of(cand, slot_cells[s]));
        c.sep[x].assign(c.k, std::vector<double>(m, 0.0));
        for (const auto& item : sep_items) {
            if (item.x != x) continue;
            for (std::size_t cand = 0; cand < m; ++cand) {
                const double phi = xlog2x(item.w * static_cast<double>(mass_of(cand, item.cells)) / n_);
                for (std::size_t f = 0; f < c.k; ++f) c.sep[x][f][cand] -= item.coef[f] * phi;
            }
        }
    }
    return c;
}

template <std::size_t K, class OnPoint>
void GridEngine::run(const Compiled& c, OnPoint&& on_point) const {
    const std::size_t nx = problem_.source.nx(), last = nx - 1, S = c.slots.size(), N1 = n_ + 1;
    const std::size_t J = problem_.budgets.size();
    const std::size_t m_last = counts_[last].size() / cells_[last].size();
    const double inv_n = 1.0 / n_;

    std::vector<std::uint32_t> off(m_last * S);
    for (std::size_t cand = 0; cand < m_last; ++cand)
        for (std::size_t s = 0; s < S; ++s)
            off[cand * S + s] = static_cast<std::uint32_t>(s * N1 + c.slot_cnt[last][cand * S + s]);
    std::vector<double> min_last(J, 0.0), limit(J, 0.0), pdist(J, 0.0);
    for (std::size_t j = 0; j < J; ++j) {
        double mn = INFINITY;
        for (double d : dist_[last][j]) mn = std::min(mn, d);
        min_last[j] = mn;
    }

    std::vector<double> table(K * S * N1);
    std::vector<std::uint32_t> pre(nx, 0);
    std::array<double, K> base{}, vals{};
    while (true) {
        bool skip = false;
        for (std::size_t j = 0; j < J; ++j) {
            double d = 0.0;
            for (std::size_t x = 0; x < last; ++x) d += dist_[x][j][pre[x]];
            pdist[j] = d;
            limit[j] = problem_.budgets[j].budget + kBudgetSlack - d;
            if (min_last[j] > limit[j]) skip = true;
        }
        if (!skip) {
            for (std::size_t f = 0; f < K; ++f) {
                double b = c.constant[f];
                for (std::size_t x = 0; x < last; ++x) b += c.sep[x][f][pre[x]];
                base[f] = b;
            }
            for (std::size_t s = 0; s < S; ++s) {
                double arg = 0.0;
                for (std::size_t x = 0; x < last; ++x)
                    arg += c.slots[s].weight[x] * (c.slot_cnt[x][pre[x] * S + s] * inv_n);
                const double wl = c.slots[s].weight[last] * inv_n;
                for (std::size_t kk = 0; kk < N1; ++kk) {
                    const double phi = xlog2x(arg + wl * static_cast<double>(kk));
                    for (std::size_t f = 0; f < K; ++f) table[(f * S + s) * N1 + kk] = -c.slots[s].coef[f] * phi;
                }
            }
            for (std::size_t cand = 0; cand < m_last; ++cand) {
                bool ok = true;
                for (std::size_t j = 0; j < J; ++j)
                    if (dist_[last][j][cand] > limit[j]) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                const std::uint32_t* o = off.data() + cand * S;
                for (std::size_t f = 0; f < K; ++f) {
                    const double* t = table.data() + f * S * N1;
                    double v = base[f] + c.sep[last][f][cand];
                    for (std::size_t s = 0; s < S; ++s) v += t[o[s]];
                    vals[f] = v;
                }
                pre[last] = static_cast<std::uint32_t>(cand);
                if (!on_point(vals, pre)) return;
            }
        }
        // advance the prefix odometer; slice last - 1 runs fastest
        std::size_t x = last;
        while (x-- > 0) {
            const std::size_t m = counts_[x].size() / cells_[x].size();
            if (++pre[x] < m) break;
            pre[x] = 0;
        }
        if (x == SIZE_MAX) return;
    }
}

GridEngine::Result GridEngine::minimize(const EntropyCombination& f, const Predicate& pred, bool nonnegative) const {
    const EntropyCombination fs[1] = {f};
    const Compiled c = compile(fs);
    Result best;
    best.value = INFINITY;
    const std::size_t nx = problem_.source.nx(), k = problem_.na * problem_.nb;
    std::vector<double> dense(nx * k, 0.0);
    run<1>(c, [&](const std::array<double, 1>& v, const std::vector<std::uint32_t>& pre) {
        if (!(v[0] < best.value - 1e-12)) return true;
        if (pred) {
            std::fill(dense.begin(), dense.end(), 0.0);
            for (std::size_t x = 0; x < nx; ++x) {
                const std::size_t nc = cells_[x].size();
                for (std::size_t i = 0; i < nc; ++i)
                    dense[x * k + cells_[x][i]] = static_cast<double>(counts_[x][pre[x] * nc + i]) / n_;
            }
            if (!pred(dense)) return true;
        }
        best.found = true;
        best.value = v[0];
        best.index.cand = pre;
        return !(nonnegative && best.value <= 1e-12);
    });
    if (best.found && nonnegative) best.value = std::max(0.0, best.value);
    return best;
}

void GridEngine::sweep(const EntropyCombination& f1, const EntropyCombination& f2, const Visitor& visit) const {
    const EntropyCombination fs[2] = {f1, f2};
    const Compiled c = compile(fs);
    GridIndex index;
    run<2>(c, [&](const std::array<double, 2>& v, const std::vector<std::uint32_t>& pre) {
        index.cand = pre;
        visit(v[0], v[1], index);
        return true;
    });
}

} // namespace crrd::rd
