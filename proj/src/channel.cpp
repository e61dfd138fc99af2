#include "crrd/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace crrd::rd {

TestChannel::TestChannel(std::size_t nx, std::size_t na, std::size_t nb, std::vector<double> cond)
    : nx_(nx), na_(na), nb_(nb), cond_(std::move(cond)) {
    if (nx == 0 || na == 0 || nb == 0) throw std::invalid_argument("channel alphabets must be non-empty");
    if (cond_.size() != nx * na * nb) throw std::invalid_argument("channel tensor size mismatch");
    const std::size_t k = na * nb;
    for (std::size_t x = 0; x < nx; ++x) {
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double v = cond_[x * k + i];
            if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("channel entries must be >= 0");
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("channel slice does not sum to one");
        for (std::size_t i = 0; i < k; ++i) cond_[x * k + i] /= total;
    }
}

TestChannel TestChannel::deterministic(std::size_t na, std::size_t nb, const std::vector<std::size_t>& fa,
                                       const std::vector<std::size_t>& fb) {
    if (fa.size() != fb.size()) throw std::invalid_argument("deterministic maps differ in length");
    std::vector<double> cond(fa.size() * na * nb, 0.0);
    for (std::size_t x = 0; x < fa.size(); ++x) {
        if (fa[x] >= na || fb[x] >= nb) throw std::invalid_argument("deterministic map out of range");
        cond[(x * na + fa[x]) * nb + fb[x]] = 1.0;
    }
    return TestChannel(fa.size(), na, nb, std::move(cond));
}

bool TestChannel::touches_forbidden(const prob::DistortionMetric& d1, const prob::DistortionMetric& d2) const {
    for (std::size_t x = 0; x < nx_; ++x)
        for (std::size_t a = 0; a < na_; ++a)
            for (std::size_t b = 0; b < nb_; ++b)
                if ((*this)(x, a, b) > 0.0 && (d1.forbidden(x, a) || d2.forbidden(x, b))) return true;
    return false;
}

prob::FinitePmf compose(const prob::JointSource& source, const TestChannel& channel) {
    if (channel.nx() != source.nx()) throw std::invalid_argument("channel input alphabet does not match source");
    const std::size_t ny1 = source.ny1(), ny2 = source.ny2(), na = channel.na(), nb = channel.nb();
    std::vector<double> joint(source.nx() * ny1 * ny2 * na * nb);
    std::size_t o = 0;
    for (std::size_t x = 0; x < source.nx(); ++x)
        for (std::size_t y1 = 0; y1 < ny1; ++y1)
            for (std::size_t y2 = 0; y2 < ny2; ++y2) {
                const double p = source.p(x, y1, y2);
                for (std::size_t a = 0; a < na; ++a)
                    for (std::size_t b = 0; b < nb; ++b) joint[o++] = p * channel(x, a, b);
            }
    return prob::FinitePmf({source.nx(), ny1, ny2, na, nb}, std::move(joint));
}

} // namespace crrd::rd
