#include "crrd/prob_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "simplex_lp.hpp"

namespace crrd::prob {
namespace {

double xlog2x(double v) { return v > 0.0 ? v * std::log2(v) : 0.0; }

std::vector<std::size_t> strides_for(const std::vector<std::size_t>& sizes) {
    std::vector<std::size_t> strides(sizes.size(), 1);
    for (std::size_t i = sizes.size(); i-- > 1;) strides[i - 1] = strides[i] * sizes[i];
    return strides;
}

std::size_t product(const std::vector<std::size_t>& sizes) {
    return std::accumulate(sizes.begin(), sizes.end(), std::size_t{1}, std::multiplies<>());
}

AxisSet join(const AxisSet& a, const AxisSet& b) {
    AxisSet out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

double joint_entropy(const FinitePmf& joint, const AxisSet& axes) {
    if (axes.empty()) return 0.0;
    return entropy(joint.marginal(axes));
}

} // namespace

FinitePmf::FinitePmf(std::vector<std::size_t> sizes, std::vector<double> mass)
    : sizes_(std::move(sizes)), mass_(std::move(mass)) {
    for (std::size_t s : sizes_)
        if (s == 0) throw std::invalid_argument("alphabet sizes must be positive");
    if (mass_.size() != product(sizes_)) throw std::invalid_argument("pmf size does not match alphabets");
    double total = 0.0;
    for (double v : mass_) {
        if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("pmf entries must be finite and >= 0");
        total += v;
    }
    if (total <= 0.0) throw std::invalid_argument("pmf has zero total mass");
    for (double& v : mass_) v /= total;
    strides_ = strides_for(sizes_);
}

std::size_t FinitePmf::flat_index(std::span<const std::size_t> idx) const {
    if (idx.size() != sizes_.size()) throw std::invalid_argument("index rank mismatch");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= sizes_[i]) throw std::out_of_range("pmf index out of range");
        flat += idx[i] * strides_[i];
    }
    return flat;
}

FinitePmf FinitePmf::marginal(const AxisSet& axes) const {
    std::vector<bool> seen(rank(), false);
    std::vector<std::size_t> out_sizes;
    for (std::size_t a : axes) {
        if (a >= rank()) throw std::invalid_argument("marginal axis out of range");
        if (seen[a]) throw std::invalid_argument("marginal axes must be distinct");
        seen[a] = true;
        out_sizes.push_back(sizes_[a]);
    }
    if (axes.empty()) return FinitePmf({1}, {1.0});

    const auto out_strides = strides_for(out_sizes);
    std::vector<double> out(product(out_sizes), 0.0);
    std::vector<std::size_t> idx(rank(), 0);
    for (std::size_t flat = 0; flat < mass_.size(); ++flat) {
        std::size_t o = 0;
        for (std::size_t k = 0; k < axes.size(); ++k) o += idx[axes[k]] * out_strides[k];
        out[o] += mass_[flat];
        for (std::size_t i = rank(); i-- > 0;) {
            if (++idx[i] < sizes_[i]) break;
            idx[i] = 0;
        }
    }
    return FinitePmf(std::move(out_sizes), std::move(out));
}

FinitePmf FinitePmf::relabelled(std::size_t axis, const std::vector<std::size_t>& perm) const {
    if (axis >= rank() || perm.size() != sizes_[axis]) throw std::invalid_argument("bad relabelling");
    std::vector<double> out(mass_.size(), 0.0);
    std::vector<std::size_t> idx(rank(), 0);
    for (std::size_t flat = 0; flat < mass_.size(); ++flat) {
        std::size_t o = flat - idx[axis] * strides_[axis] + perm.at(idx[axis]) * strides_[axis];
        out[o] = mass_[flat];
        for (std::size_t i = rank(); i-- > 0;) {
            if (++idx[i] < sizes_[i]) break;
            idx[i] = 0;
        }
    }
    return FinitePmf(sizes_, std::move(out));
}

double entropy(const FinitePmf& pmf) {
    double h = 0.0;
    for (double v : pmf.mass()) h -= xlog2x(v);
    return std::max(0.0, h);
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p outside [0,1]");
    return -xlog2x(p) - xlog2x(1.0 - p);
}

double relative_entropy(const FinitePmf& p, const FinitePmf& q) {
    if (p.sizes() != q.sizes()) throw std::invalid_argument("relative_entropy: shape mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.mass().size(); ++i) {
        const double pi = p.mass()[i];
        const double qi = q.mass()[i];
        if (pi == 0.0) continue;
        if (qi == 0.0) throw std::invalid_argument("relative_entropy: p has mass where q has none");
        d += pi * std::log2(pi / qi);
    }
    return std::max(0.0, d);
}

double conditional_mutual_information(const FinitePmf& joint, const AxisSet& a, const AxisSet& b,
                                      const AxisSet& c) {
    std::vector<bool> seen(joint.rank(), false);
    for (const AxisSet* set : {&a, &b, &c}) {
        for (std::size_t axis : *set) {
            if (axis >= joint.rank()) throw std::invalid_argument("axis out of range");
            if (seen[axis]) throw std::invalid_argument("axis sets must be disjoint");
            seen[axis] = true;
        }
    }
    const AxisSet ac = join(a, c);
    const AxisSet bc = join(b, c);
    const AxisSet abc = join(a, bc);
    const double value =
        joint_entropy(joint, ac) + joint_entropy(joint, bc) - joint_entropy(joint, abc) - joint_entropy(joint, c);
    return std::max(0.0, value);
}

JointSource::JointSource(FinitePmf pmf, Labels labels) : pmf_({1}, {1.0}), labels_(std::move(labels)) {
    if (pmf.rank() != 3) throw std::invalid_argument("JointSource needs exactly three axes (X, Y1, Y2)");
    for (std::size_t axis = 0; axis < 3; ++axis) {
        auto& names = labels_[axis];
        if (names.empty()) {
            for (std::size_t s = 0; s < pmf.size(axis); ++s) names.push_back(std::to_string(s));
        } else if (names.size() != pmf.size(axis)) {
            throw std::invalid_argument("label count does not match alphabet size");
        }
    }

    const std::size_t ny = pmf.size(1) * pmf.size(2);
    std::vector<double> kept;
    std::vector<std::string> kept_labels;
    for (std::size_t x = 0; x < pmf.size(0); ++x) {
        const auto row = pmf.mass().subspan(x * ny, ny);
        const double px = std::accumulate(row.begin(), row.end(), 0.0);
        if (px <= 0.0) continue;
        kept.insert(kept.end(), row.begin(), row.end());
        kept_labels.push_back(labels_[0][x]);
    }
    labels_[0] = std::move(kept_labels);
    pmf_ = FinitePmf({labels_[0].size(), pmf.size(1), pmf.size(2)}, std::move(kept));
}

JointSource JointSource::with_side_information_swapped() const {
    std::vector<double> out(pmf_.mass().size());
    for (std::size_t x = 0; x < nx(); ++x)
        for (std::size_t a = 0; a < ny1(); ++a)
            for (std::size_t b = 0; b < ny2(); ++b) out[(x * ny2() + b) * ny1() + a] = p(x, a, b);
    return JointSource(FinitePmf({nx(), ny2(), ny1()}, std::move(out)), {labels_[0], labels_[2], labels_[1]});
}

DistortionMetric::DistortionMetric(std::size_t rows, std::size_t cols, std::vector<std::optional<double>> entries,
                                   std::optional<double> d_max)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("distortion metric must be non-empty");
    if (entries_.size() != rows * cols) throw std::invalid_argument("distortion entries do not match shape");
    double largest = 0.0;
    for (std::size_t x = 0; x < rows; ++x) {
        bool any_finite = false;
        for (std::size_t j = 0; j < cols; ++j) {
            const auto& e = entries_[x * cols + j];
            if (!e) continue;
            if (!std::isfinite(*e) || *e < 0.0)
                throw std::invalid_argument("finite distortion entries must be >= 0");
            any_finite = true;
            largest = std::max(largest, *e);
        }
        if (!any_finite) throw std::invalid_argument("every distortion row needs a finite entry");
    }
    d_max_ = d_max.value_or(largest > 0.0 ? largest : 1.0);
    if (!(d_max_ > 0.0) || largest > d_max_) throw std::invalid_argument("d_max must bound all finite entries");
}

DistortionMetric DistortionMetric::hamming(std::size_t n) {
    std::vector<std::optional<double>> e(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e[i * n + j] = i == j ? 0.0 : 1.0;
    return DistortionMetric(n, n, std::move(e), 1.0);
}

DistortionMetric DistortionMetric::binary_erasure() {
    return DistortionMetric(2, 3, {0.0, std::nullopt, 1.0, std::nullopt, 0.0, 1.0}, 1.0);
}

DistortionMetric DistortionMetric::zero(std::size_t rows, std::size_t cols) {
    return DistortionMetric(rows, cols, std::vector<std::optional<double>>(rows * cols, 0.0), 1.0);
}

double DistortionMetric::value(std::size_t x, std::size_t xhat) const {
    const auto& e = entries_.at(x * cols_ + xhat);
    if (!e) throw std::invalid_argument("forbidden distortion pair");
    return *e;
}

void BinaryErasureSpec::validate() const {
    if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0))
        throw std::invalid_argument("erasure probabilities must lie in [0,1]");
    if (!(p1 > p2)) throw std::invalid_argument("erased side information needs p1 > p2");
}

double BinaryErasureSpec::p1_tilde() const {
    validate();
    return (p1 - p2) / (1.0 - p2);
}

void GaussianSpec::validate() const {
    if (!std::isfinite(sigma_x2) || !std::isfinite(n1) || !std::isfinite(n2))
        throw std::invalid_argument("Gaussian parameters must be finite");
    if (!(sigma_x2 > 0.0)) throw std::invalid_argument("source variance must be positive");
    if (n1 < 0.0 || n2 < 0.0) throw std::invalid_argument("noise variances must be >= 0");
}

JointSource build_erased_source(const BinaryErasureSpec& spec) {
    const double pt = spec.p1_tilde();
    constexpr std::size_t e = 2;
    std::vector<double> mass(2 * 3 * 3, 0.0);
    auto cell = [&](std::size_t x, std::size_t y1, std::size_t y2) -> double& { return mass[(x * 3 + y1) * 3 + y2]; };
    for (std::size_t x = 0; x < 2; ++x) {
        // Y2 = x, then Y1 keeps it or erases it.
        cell(x, x, x) += 0.5 * (1.0 - spec.p2) * (1.0 - pt);
        cell(x, e, x) += 0.5 * (1.0 - spec.p2) * pt;
        // Y2 = e forces Y1 = e.
        cell(x, e, e) += 0.5 * spec.p2;
    }
    JointSource::Labels labels{std::vector<std::string>{"0", "1"}, {"0", "1", "e"}, {"0", "1", "e"}};
    return JointSource(FinitePmf({2, 3, 3}, std::move(mass)), std::move(labels));
}

DegradednessVerdict check_stochastic_degradedness(const JointSource& source) {
    const std::size_t nx = source.nx(), n1 = source.ny1(), n2 = source.ny2();
    const FinitePmf xy1 = source.pmf().marginal({0, 1});
    const FinitePmf xy2 = source.pmf().marginal({0, 2});

    // Variables: kernel K[y1][y2], then u[x][y1], v[x][y1] with
    // sum_y2 p(x,y2) K[y1][y2] + u - v = p(x,y1); columns of K sum to one.
    const std::size_t nk = n1 * n2;
    const std::size_t nr = nx * n1;
    detail::LinearProgram lp;
    lp.cols = nk + 2 * nr;
    lp.rows = nr + n2;
    lp.a.assign(lp.rows * lp.cols, 0.0);
    lp.b.assign(lp.rows, 0.0);
    lp.c.assign(lp.cols, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y1 = 0; y1 < n1; ++y1) {
            const std::size_t row = x * n1 + y1;
            for (std::size_t y2 = 0; y2 < n2; ++y2) lp.a[row * lp.cols + y1 * n2 + y2] = xy2.mass()[x * n2 + y2];
            lp.a[row * lp.cols + nk + row] = 1.0;
            lp.a[row * lp.cols + nk + nr + row] = -1.0;
            lp.b[row] = xy1.mass()[x * n1 + y1];
            lp.c[nk + row] = 0.5;
            lp.c[nk + nr + row] = 0.5;
        }
    }
    for (std::size_t y2 = 0; y2 < n2; ++y2) {
        const std::size_t row = nr + y2;
        for (std::size_t y1 = 0; y1 < n1; ++y1) lp.a[row * lp.cols + y1 * n2 + y2] = 1.0;
        lp.b[row] = 1.0;
    }

    const auto sol = detail::solve_lp(lp);
    if (sol.status != detail::LpStatus::optimal) throw std::runtime_error("degradedness LP did not solve");

    std::vector<double> kernel(sol.z.begin(), sol.z.begin() + static_cast<std::ptrdiff_t>(nk));
    for (std::size_t y2 = 0; y2 < n2; ++y2) {
        double col = 0.0;
        for (std::size_t y1 = 0; y1 < n1; ++y1) col += kernel[y1 * n2 + y2];
        for (std::size_t y1 = 0; y1 < n1; ++y1) kernel[y1 * n2 + y2] /= col;
    }
    double tv = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y1 = 0; y1 < n1; ++y1) {
            double mix = 0.0;
            for (std::size_t y2 = 0; y2 < n2; ++y2) mix += xy2.mass()[x * n2 + y2] * kernel[y1 * n2 + y2];
            tv += std::abs(mix - xy1.mass()[x * n1 + y1]);
        }
    }
    DegradednessVerdict verdict;
    verdict.violation = 0.5 * tv;
    verdict.feasible = verdict.violation <= kDegradednessThreshold;
    verdict.ny1 = n1;
    verdict.ny2 = n2;
    if (verdict.feasible) verdict.kernel = std::move(kernel);
    return verdict;
}

bool check_markov_chain(const JointSource& source, std::array<Axis, 3> order) {
    const AxisSet axes{static_cast<std::size_t>(order[0]), static_cast<std::size_t>(order[1]),
                       static_cast<std::size_t>(order[2])};
    if (axes[0] == axes[1] || axes[1] == axes[2] || axes[0] == axes[2])
        throw std::invalid_argument("Markov order must be a permutation of (X, Y1, Y2)");
    const FinitePmf abc = source.pmf().marginal(axes);
    const FinitePmf ab = source.pmf().marginal({axes[0], axes[1]});
    const FinitePmf bc = source.pmf().marginal({axes[1], axes[2]});
    const FinitePmf b = source.pmf().marginal({axes[1]});
    const std::size_t na = abc.size(0), nb = abc.size(1), nc = abc.size(2);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            const double pb = b.mass()[j];
            for (std::size_t k = 0; k < nc; ++k) {
                const double lhs = abc.mass()[(i * nb + j) * nc + k];
                const double rhs = pb > 0.0 ? ab.mass()[i * nb + j] * bc.mass()[j * nc + k] / pb : 0.0;
                if (std::abs(lhs - rhs) > 1e-10) return false;
            }
        }
    }
    return true;
}

} // namespace crrd::prob
