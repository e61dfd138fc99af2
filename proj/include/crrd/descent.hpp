#pragma once

// Multistart projected-gradient descent over channels, with exact
// projection onto the budget polytope.

#include <cstdint>
#include <span>
#include <vector>

#include "crrd/grid.hpp"

namespace crrd::rd {

struct DescentOptions {
    int restarts = 20;
    std::uint64_t seed = 1;
    double tol = 1e-10; // stop when an accepted step gains less than this
    int max_iterations = 2000;
};

struct DescentResult {
    double value = 0.0;
    TestChannel channel;
    int iterations = 0;
};

/// One local run. `start` is projected onto the feasible set first.
DescentResult descend_from(const ChannelProblem& p, const EntropyCombination& f, std::span<const double> start,
                           const DescentOptions& opt = {});

/// Best local result over every seed, then `restarts` Dirichlet(1) starts
/// drawn from mt19937_64(seed). Ties within 1e-12 go to the
/// lexicographically smaller channel.
DescentResult multistart(const ChannelProblem& p, const EntropyCombination& f, std::span<const TestChannel> seeds,
                         const DescentOptions& opt = {});

/// Value of `f` at a dense channel tensor for this problem.
double evaluate(const ChannelProblem& p, const EntropyCombination& f, std::span<const double> w);

} // namespace crrd::rd
