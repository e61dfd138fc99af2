#include "projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crrd::rd::detail {

void project_simplex(std::span<double> v) {
    if (v.empty()) return;
    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0, theta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cum += u[i];
        const double t = (cum - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    for (double& x : v) x = std::max(0.0, x - theta);
}

double budget_value(const LinearBudget& b, std::span<const double> w) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += b.coef[i] * w[i];
    return s;
}

namespace {

void project_product_simplex(const ChannelProblem& p, std::vector<double>& w) {
    const std::size_t k = p.na * p.nb;
    std::vector<double> buf;
    for (std::size_t x = 0; x < p.source.nx(); ++x) {
        buf.clear();
        for (std::size_t c = 0; c < k; ++c)
            if (p.allowed[x * k + c]) buf.push_back(w[x * k + c]);
        project_simplex(buf);
        std::size_t j = 0;
        for (std::size_t c = 0; c < k; ++c) w[x * k + c] = p.allowed[x * k + c] ? buf[j++] : 0.0;
    }
}

void project_halfspace(const LinearBudget& b, const std::vector<char>& allowed, std::vector<double>& w) {
    const double excess = budget_value(b, w) - b.budget;
    if (excess <= 0.0) return;
    double nrm = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (allowed[i]) nrm += b.coef[i] * b.coef[i];
    if (nrm == 0.0) return;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (allowed[i]) w[i] -= excess / nrm * b.coef[i];
}

} // namespace

std::vector<double> project_feasible(const ChannelProblem& p, std::span<const double> v, double tol, int max_cycles) {
    std::vector<double> w(v.begin(), v.end());
    const std::size_t sets = p.budgets.size() + 1;
    std::vector<std::vector<double>> incr(sets, std::vector<double>(w.size(), 0.0));
    std::vector<double> y(w.size()), prev;
    for (int cycle = 0; cycle < max_cycles; ++cycle) {
        prev = w;
        for (std::size_t s = 0; s < sets; ++s) {
            for (std::size_t i = 0; i < w.size(); ++i) y[i] = w[i] + incr[s][i];
            w = y;
            if (s + 1 < sets)
                project_halfspace(p.budgets[s], p.allowed, w);
            else
                project_product_simplex(p, w);
            for (std::size_t i = 0; i < w.size(); ++i) incr[s][i] = y[i] - w[i];
        }
        double move = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) move = std::max(move, std::abs(w[i] - prev[i]));
        if (move < tol) break;
        if (p.budgets.empty()) break;
    }
    return w;
}

std::vector<double> budget_floor(const ChannelProblem& p) {
    const std::size_t k = p.na * p.nb;
    std::vector<double> out;
    for (const auto& b : p.budgets) {
        double total = 0.0;
        for (std::size_t x = 0; x < p.source.nx(); ++x) {
            double best = INFINITY;
            for (std::size_t c = 0; c < k; ++c)
                if (p.allowed[x * k + c]) best = std::min(best, b.coef[x * k + c]);
            total += best;
        }
        out.push_back(total);
    }
    return out;
}

std::vector<double> cheapest_channel(const ChannelProblem& p) {
    const std::size_t k = p.na * p.nb;
    std::vector<double> w(p.source.nx() * k, 0.0);
    for (std::size_t x = 0; x < p.source.nx(); ++x) {
        std::size_t arg = k;
        double best = INFINITY;
        for (std::size_t c = 0; c < k; ++c) {
            if (!p.allowed[x * k + c]) continue;
            double s = 0.0;
            for (const auto& b : p.budgets) s += b.coef[x * k + c];
            if (s < best) {
                best = s;
                arg = c;
            }
        }
        if (arg < k) w[x * k + arg] = 1.0;
    }
    return w;
}

void repair_budgets(const ChannelProblem& p, std::vector<double>& w) {
    const std::vector<double> base = cheapest_channel(p);
    double theta = 0.0;
    for (const auto& b : p.budgets) {
        const double cur = budget_value(b, w), lo = budget_value(b, base);
        if (cur <= b.budget) continue;
        if (cur - lo <= 0.0) {
            theta = 1.0;
            break;
        }
        theta = std::max(theta, (cur - b.budget) / (cur - lo));
    }
    if (theta <= 0.0) return;
    theta = std::min(1.0, theta * (1.0 + 1e-9) + 1e-15);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = (1.0 - theta) * w[i] + theta * base[i];
}

} // namespace crrd::rd::detail
