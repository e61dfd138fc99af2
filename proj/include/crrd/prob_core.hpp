#pragma once

// Finite probability arithmetic. All information quantities are in bits.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace crrd::prob {

using AxisSet = std::vector<std::size_t>;

/// Dense joint pmf over a product of finite alphabets, stored row-major
/// (last axis fastest).
class FinitePmf {
public:
    /// Normalizes `mass` to unit total. Throws std::invalid_argument on
    /// negative or non-finite entries, zero total, or a size mismatch.
    FinitePmf(std::vector<std::size_t> sizes, std::vector<double> mass);

    std::size_t rank() const noexcept { return sizes_.size(); }
    const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
    std::span<const double> mass() const noexcept { return mass_; }
    std::size_t size(std::size_t axis) const { return sizes_.at(axis); }

    std::size_t flat_index(std::span<const std::size_t> idx) const;
    double at(std::span<const std::size_t> idx) const { return mass_[flat_index(idx)]; }
    double at(std::initializer_list<std::size_t> idx) const {
        return at(std::span<const std::size_t>(idx.begin(), idx.size()));
    }

    /// Marginal over `axes`, in the order given. Axes must be distinct.
    FinitePmf marginal(const AxisSet& axes) const;

    /// Same distribution with the symbols of `axis` relabelled: new symbol
    /// perm[s] carries the mass of old symbol s.
    FinitePmf relabelled(std::size_t axis, const std::vector<std::size_t>& perm) const;

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> strides_;
    std::vector<double> mass_;
};

double entropy(const FinitePmf& pmf);

/// H(p) for p in [0,1].
double binary_entropy(double p);

/// D(p || q) in bits over a common shape. A cell with p > 0 and q = 0 is a
/// malformed comparison and throws std::invalid_argument.
double relative_entropy(const FinitePmf& p, const FinitePmf& q);

/// I(A;B|C) on the marginal of `joint` over A u B u C. Empty C gives I(A;B).
/// Throws std::invalid_argument when the sets overlap or an axis is out of range.
double conditional_mutual_information(const FinitePmf& joint, const AxisSet& a, const AxisSet& b,
                                      const AxisSet& c = {});

enum class Axis : std::size_t { x = 0, y1 = 1, y2 = 2 };

/// p(x, y1, y2). Source symbols with zero marginal are dropped on construction.
class JointSource {
public:
    using Labels = std::array<std::vector<std::string>, 3>;

    explicit JointSource(FinitePmf pmf, Labels labels = {});

    const FinitePmf& pmf() const noexcept { return pmf_; }
    const Labels& labels() const noexcept { return labels_; }
    std::size_t nx() const noexcept { return pmf_.size(0); }
    std::size_t ny1() const noexcept { return pmf_.size(1); }
    std::size_t ny2() const noexcept { return pmf_.size(2); }
    double p(std::size_t x, std::size_t y1, std::size_t y2) const {
        return pmf_.mass()[(x * ny1() + y1) * ny2() + y2];
    }

    /// The source with the roles of Y1 and Y2 exchanged.
    JointSource with_side_information_swapped() const;

private:
    FinitePmf pmf_;
    Labels labels_;
};

/// Per-letter distortion matrix d(x, xhat). Forbidden entries are explicit,
/// not large finite numbers.
class DistortionMetric {
public:
    /// `entries` is row-major, nullopt marks a forbidden pair. When `d_max`
    /// is omitted it is the largest finite entry (or 1 if all are zero).
    DistortionMetric(std::size_t rows, std::size_t cols, std::vector<std::optional<double>> entries,
                     std::optional<double> d_max = std::nullopt);

    static DistortionMetric hamming(std::size_t n);
    /// Binary source, reconstruction alphabet {0, 1, e}: 0 on a match, 1 for
    /// e, forbidden otherwise.
    static DistortionMetric binary_erasure();
    /// Every reconstruction free: rows x cols of zeros.
    static DistortionMetric zero(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double d_max() const noexcept { return d_max_; }
    bool forbidden(std::size_t x, std::size_t xhat) const { return !entries_.at(x * cols_ + xhat); }
    /// Finite entry; throws std::invalid_argument for a forbidden pair.
    double value(std::size_t x, std::size_t xhat) const;
    const std::vector<std::optional<double>>& entries() const noexcept { return entries_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::optional<double>> entries_;
    double d_max_;
};

struct BinaryErasureSpec {
    double p1;
    double p2;

    /// Throws std::invalid_argument unless 0 <= p2 < p1 <= 1.
    void validate() const;
    /// Erasure probability of the Y2 -> Y1 stage: (p1 - p2) / (1 - p2).
    double p1_tilde() const;
};

struct GaussianSpec {
    double sigma_x2;
    double n1;
    double n2;

    void validate() const;
};

/// X ~ Ber(1/2); Y2 erases X with probability p2 and Y1 further erases a
/// non-erased Y2 with probability p1_tilde. Symbols ordered {0, 1, e}.
JointSource build_erased_source(const BinaryErasureSpec& spec);

/// Column-stochastic kernel stored as kernel[y1 * ny2 + y2] = p~(y1 | y2).
struct DegradednessVerdict {
    bool feasible = false;
    /// Minimal total-variation distance between p(x, y1) and the mixture
    /// sum_y2 p(x, y2) p~(y1 | y2) over all kernels.
    double violation = 0.0;
    std::size_t ny1 = 0;
    std::size_t ny2 = 0;
    std::optional<std::vector<double>> kernel;

    double kernel_at(std::size_t y1, std::size_t y2) const { return kernel.value()[y1 * ny2 + y2]; }
};

inline constexpr double kDegradednessThreshold = 1e-9;

/// Decides whether Y1 is a stochastically degraded version of Y2 by solving
/// the linear feasibility problem for p~(y1 | y2) exactly.
DegradednessVerdict check_stochastic_degradedness(const JointSource& source);

/// True iff a - b - c is a Markov chain: p(a,b,c) = p(a,b) p(c|b) entrywise
/// to within 1e-10.
bool check_markov_chain(const JointSource& source, std::array<Axis, 3> order);

} // namespace crrd::prob
