#include <doctest.h>

#include <random>
#include <stdexcept>

#include "crrd/json_io.hpp"
#include "crrd/prob_core.hpp"
#include "oracles.hpp"

using namespace crrd::prob;

TEST_CASE("entropy of small pmfs") {
    CHECK(entropy(FinitePmf({4}, {1, 1, 1, 1})) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(entropy(FinitePmf({3}, {0, 5, 0})) == 0.0);
    for (double p : {0.0, 0.05, 0.11, 0.5, 0.93, 1.0}) CHECK(binary_entropy(p) == doctest::Approx(oracle::h2(p)));
    CHECK(binary_entropy(0.11) == doctest::Approx(0.4999).epsilon(1e-3));
}

TEST_CASE("pmf construction rejects bad mass and normalizes the rest") {
    CHECK_THROWS_AS(FinitePmf({2}, {0.5, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(FinitePmf({2}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(FinitePmf({2, 2}, {1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(FinitePmf({2}, {1, NAN}), std::invalid_argument);
    const FinitePmf p({2, 2}, {1, 1, 2, 0});
    CHECK(p.at({1, 0}) == doctest::Approx(0.5));
    const auto m = p.marginal({1});
    CHECK(m.at({0}) == doctest::Approx(0.75));
    CHECK(m.at({1}) == doctest::Approx(0.25));
}

TEST_CASE("relative entropy") {
    const FinitePmf p({2}, {0.5, 0.5}), q({2}, {0.25, 0.75});
    CHECK(relative_entropy(p, q) == doctest::Approx(0.5 * std::log2(2.0) + 0.5 * std::log2(2.0 / 3.0)));
    CHECK(relative_entropy(p, p) == 0.0);
    CHECK_THROWS_AS(relative_entropy(p, FinitePmf({2}, {1, 0})), std::invalid_argument);
}

TEST_CASE("conditional mutual information against a direct sum") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::exponential_distribution<double> e(1.0);
        std::vector<double> m(2 * 3 * 2);
        for (auto& v : m) v = e(rng);
        const FinitePmf joint({2, 3, 2}, m);
        // I(0;1|2) = sum p(a,b,c) log p(a,b,c) p(c) / (p(a,c) p(b,c))
        double ref = 0;
        const auto pc = joint.marginal({2}), pac = joint.marginal({0, 2}), pbc = joint.marginal({1, 2});
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 3; ++b)
                for (std::size_t c = 0; c < 2; ++c) {
                    const double p = joint.at({a, b, c});
                    ref += p * std::log2(p * pc.at({c}) / (pac.at({a, c}) * pbc.at({b, c})));
                }
        CHECK(conditional_mutual_information(joint, {0}, {1}, {2}) == doctest::Approx(ref).epsilon(1e-12));
        CHECK(conditional_mutual_information(joint, {0}, {1}, {2}) >= -1e-15);
        // relabelling a symbol changes nothing
        const auto r = joint.relabelled(1, {2, 0, 1});
        CHECK(conditional_mutual_information(r, {0}, {1}, {2}) == doctest::Approx(ref).epsilon(1e-12));
    }
    const FinitePmf j({2, 2}, {1, 0, 0, 1});
    CHECK(conditional_mutual_information(j, {0}, {1}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(conditional_mutual_information(j, {0}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(conditional_mutual_information(j, {0}, {5}), std::invalid_argument);
}

TEST_CASE("joint source drops unused symbols") {
    const JointSource s(FinitePmf({3, 1, 2}, {0.5, 0, 0, 0, 0.25, 0.25}));
    CHECK(s.nx() == 2);
    CHECK(s.ny2() == 2);
    CHECK(s.p(1, 0, 1) == doctest::Approx(0.25));
}

TEST_CASE("distortion metrics") {
    const auto h = DistortionMetric::hamming(3);
    CHECK(h.value(0, 0) == 0.0);
    CHECK(h.value(2, 1) == 1.0);
    const auto e = DistortionMetric::binary_erasure();
    CHECK(e.rows() == 2);
    CHECK(e.cols() == 3);
    CHECK(e.forbidden(0, 1));
    CHECK(e.value(1, 2) == 1.0);
    CHECK_THROWS_AS(e.value(1, 0), std::invalid_argument);
    CHECK(e.d_max() == 1.0);
    CHECK(DistortionMetric::zero(2, 1).d_max() == 1.0);
}

TEST_CASE("erased binary source") {
    const BinaryErasureSpec spec{0.5, 0.35};
    CHECK(spec.p1_tilde() == doctest::Approx(0.15 / 0.65).epsilon(1e-14));
    const auto s = build_erased_source(spec);
    const auto p = s.pmf();
    CHECK(p.marginal({2}).at({2}) == doctest::Approx(0.35));
    CHECK(p.marginal({1}).at({2}) == doctest::Approx(0.5));
    CHECK(p.marginal({0}).at({1}) == doctest::Approx(0.5));
    CHECK(check_markov_chain(s, {Axis::x, Axis::y2, Axis::y1}));
    CHECK_FALSE(check_markov_chain(s, {Axis::x, Axis::y1, Axis::y2}));
    CHECK_THROWS_AS((BinaryErasureSpec{0.3, 0.35}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BinaryErasureSpec{1.2, 0.35}.validate()), std::invalid_argument);
    CHECK_NOTHROW((BinaryErasureSpec{1.0, 0.35}.validate()));
}

TEST_CASE("stochastic degradedness verdicts") {
    const auto s = build_erased_source({0.5, 0.35});
    const auto v = check_stochastic_degradedness(s);
    REQUIRE(v.feasible);
    CHECK(v.violation <= kDegradednessThreshold);
    CHECK(v.kernel_at(2, 0) == doctest::Approx(0.230769).epsilon(1e-6));
    // The kernel reproduces p(x, y1) from p(x, y2).
    const auto pxy1 = s.pmf().marginal({0, 1}), pxy2 = s.pmf().marginal({0, 2});
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y1 = 0; y1 < 3; ++y1) {
            double mix = 0;
            for (std::size_t y2 = 0; y2 < 3; ++y2) mix += pxy2.at({x, y2}) * v.kernel_at(y1, y2);
            CHECK(mix == doctest::Approx(pxy1.at({x, y1})).epsilon(1e-9));
        }

    const auto w = check_stochastic_degradedness(s.with_side_information_swapped());
    CHECK_FALSE(w.feasible);
    CHECK(w.violation > 1e-3);
    CHECK_FALSE(w.kernel.has_value());
}

TEST_CASE("markov chain detection on a random source") {
    std::mt19937_64 rng(3);
    const auto s = oracle::random_source(rng, 2, 2, 2);
    CHECK_FALSE(check_markov_chain(s, {Axis::x, Axis::y1, Axis::y2}));
}

TEST_CASE("json round trip") {
    const auto s = build_erased_source({0.8, 0.1});
    const auto back = crrd::io::source_from_json(crrd::io::to_json(s));
    CHECK(back.nx() == s.nx());
    for (std::size_t i = 0; i < s.pmf().mass().size(); ++i)
        CHECK(back.pmf().mass()[i] == doctest::Approx(s.pmf().mass()[i]));
    const auto e = crrd::io::metric_from_json(crrd::io::to_json(DistortionMetric::binary_erasure()));
    CHECK(e.forbidden(0, 1));
    CHECK(e.value(0, 2) == 1.0);
}
