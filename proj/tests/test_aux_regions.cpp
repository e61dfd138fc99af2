#include <doctest.h>

#include <random>

#include "crrd/aux_search.hpp"
#include "crrd/closed_forms.hpp"
#include "crrd/hb_solvers.hpp"
#include "crrd/regions.hpp"
#include "oracles.hpp"

using namespace crrd;
using namespace crrd::rd;

namespace {
const prob::BinaryErasureSpec kBin{1, 0.35};
const auto kH = prob::DistortionMetric::hamming(2);
const auto kSrc = prob::build_erased_source(kBin);

AuxOptions coarse(double step = 0.1) {
    AuxOptions o;
    o.step = step;
    return o;
}
} // namespace

TEST_CASE("exact caps for the constrained problem") {
    CHECK(conr_exact_caps(2).u1 == 6);
    CHECK(conr_exact_caps(2).u2 == 16);
}

TEST_CASE("embedding a reconstruction channel keeps it intact") {
    const auto w = closed::binary_hb_test_channel({0.1, 0.05}, kBin);
    const auto e = embed_reconstruction(w, {3, 2});
    CHECK(e.na() == 3);
    CHECK(e.nb() == 2);
    CHECK(e(0, 2, 0) == 0.0);
    CHECK(e(1, 1, 1) == doctest::Approx(w(1, 1, 1)));
    CHECK_THROWS_AS(embed_reconstruction(w, {1, 2}), std::invalid_argument);
}

TEST_CASE("two-decoder rate without reconstruction constraint") {
    const closed::DistortionPair pair{0.1, 0.05};
    const auto r = brute_force_hb_nocr(kSrc, kH, kH, pair, {2, 2}, coarse(0.05));
    const double cr = closed::rhb_cr_binary(pair, kBin).rate;
    // decoder 1 sees nothing, so its point rate is a floor
    const double floor1 = 1 - oracle::h2(pair.d1);
    CHECK(r.rate >= floor1 - 1e-9);
    CHECK(r.rate <= cr + 1e-9);
    CHECK(r.rate == doctest::Approx(floor1).epsilon(1e-6));
    CHECK(r.witness.dec1.size() == 2 * kSrc.ny1());
    CHECK(r.witness.dec2.size() == 2 * kSrc.ny2());
}

TEST_CASE("side-information rate sits between its floor and the common-reconstruction rate") {
    const prob::FinitePmf pxy = kSrc.pmf().marginal({0, 2});
    for (double d : {0.05, 0.1, 0.15}) {
        const auto r = brute_force_wz(pxy, kH, d, 2, coarse(0.05));
        // erasures are the only positions that cost anything
        const double floor = 0.35 * (1 - oracle::h2(d / 0.35));
        CHECK(r.rate >= floor - 1e-9);
        CHECK(r.rate <= oracle::rcr_bin(d, 0.35) + 1e-9);
    }
}

TEST_CASE("seeds enter the auxiliary search") {
    const closed::DistortionPair pair{0.1, 0.05};
    const auto seed = embed_reconstruction(closed::binary_hb_test_channel(pair, kBin), {2, 2});
    AuxOptions o = coarse(0.5);
    const auto plain = brute_force_hb_nocr(kSrc, kH, kH, pair, {2, 2}, o);
    o.seeds = std::span(&seed, 1);
    const auto seeded = brute_force_hb_nocr(kSrc, kH, kH, pair, {2, 2}, o);
    CHECK(seeded.rate <= plain.rate + 1e-12);
    CHECK(seeded.rate <= closed::rhb_cr_binary(pair, kBin).rate + 1e-9);
}

TEST_CASE("constrained reconstruction") {
    const closed::DistortionPair pair{0.1, 0.05};
    const double cr = closed::rhb_cr_binary(pair, kBin).rate;
    const auto seed = embed_reconstruction(closed::binary_hb_test_channel(pair, kBin), {2, 2});
    AuxOptions o = coarse(0.05);
    o.seeds = std::span(&seed, 1);
    double prev = INFINITY;
    for (double de : {0.0, 0.1, 0.3, 1.0}) {
        const auto r = brute_force_conr(kSrc, kH, kH, pair, {de, de, kH, kH}, {2, 2}, o);
        CHECK(r.heuristic); // caps below the exact sizes
        CHECK(r.rate <= prev + 1e-9);
        if (de == 0.0) CHECK(std::abs(r.rate - cr) < 1e-2);
        prev = r.rate;
    }
    const auto nocr = brute_force_hb_nocr(kSrc, kH, kH, pair, {2, 2}, o);
    CHECK(prev == doctest::Approx(nocr.rate).epsilon(1e-9));
    CHECK_THROWS_AS(brute_force_conr(kSrc, kH, kH, pair, {-0.1, 0, kH, kH}, {2, 2}, o), std::invalid_argument);
}

TEST_CASE("dominance filter") {
    std::vector<RatePoint> pts{{1, 1, {}, "a", false}, {0.5, 2, {}, "b", false}, {1.2, 1.2, {}, "c", false},
                               {2, 0.5, {}, "d", false}, {0.5, 3, {}, "e", false}, {2, 0.5, {}, "u", true}};
    const auto f = dominance_filter(pts);
    REQUIRE(f.size() == 4);
    CHECK(f[0].provenance == "b");
    CHECK(f[1].provenance == "a");
    CHECK(f[2].provenance == "d");
    CHECK(f[3].r2_unbounded);
    const auto g = dominance_filter(f);
    REQUIRE(g.size() == f.size());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i].provenance == f[i].provenance);
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        CHECK(f[i].r1 > f[i - 1].r1);
        CHECK(f[i].r2 < f[i - 1].r2);
    }
}

TEST_CASE("cooperative region when decoder 2 is the stronger one") {
    SamplerConfig cfg;
    cfg.scalar_step = 0.05;
    const auto r = coop_region_xy2y1(kSrc, kH, kH, {0.1, 0.05}, cfg);
    REQUIRE(r.boundary.size() == 2);
    CHECK(r.boundary[0].r2 == 0.0);
    CHECK(r.boundary[1].r2_unbounded);
    CHECK(r.boundary[0].r1 >= closed::rhb_cr_binary({0.1, 0.05}, kBin).rate - 1e-9);
    CHECK_THROWS_AS(coop_region_xy1y2(kSrc, kH, kH, {0.1, 0.05}, cfg), std::invalid_argument);
}

TEST_CASE("cooperative and cascade regions when decoder 1 is the stronger one") {
    const auto swapped = prob::build_erased_source({0.6, 0.2}).with_side_information_swapped();
    SamplerConfig cfg;
    cfg.step = 0.1;
    for (auto mode : {SamplerMode::scalarized, SamplerMode::exhaustive}) {
        cfg.mode = mode;
        for (const auto& region : {coop_region_xy1y2(swapped, kH, kH, {0.2, 0.1}, cfg),
                                   cascade_region_xy1y2(swapped, kH, kH, {0.2, 0.1}, cfg)}) {
            REQUIRE_FALSE(region.boundary.empty());
            for (std::size_t i = 1; i < region.boundary.size(); ++i) {
                CHECK(region.boundary[i].r1 > region.boundary[i - 1].r1);
                CHECK(region.boundary[i].r2 < region.boundary[i - 1].r2);
            }
            for (const auto& p : region.boundary) {
                REQUIRE(p.witness.has_value());
                const auto d = oracle::distortions(swapped, *p.witness, kH, kH);
                CHECK(d[0] <= 0.2 + 1e-8);
                CHECK(d[1] <= 0.1 + 1e-8);
            }
        }
    }
}

TEST_CASE("cascade inner and outer bounds") {
    SamplerConfig cfg;
    cfg.step = 0.1;
    cfg.scalar_step = 0.05;
    cfg.seeds = {closed::binary_region_witness({0.1, 0.05}, kBin)};
    const auto b = cascade_bounds_xy2y1(kSrc, kH, kH, {0.1, 0.05}, cfg);
    const auto& c = b.outer.boundary.front();
    CHECK(c.r1 == doctest::Approx(closed::rhb_cr_binary({0.1, 0.05}, kBin).rate).epsilon(1e-6));
    CHECK(c.r2 == doctest::Approx(0.35 * (1 - oracle::h2(0.05))).epsilon(1e-6));
    CHECK(b.gap >= 0.0);
    CHECK(b.gap < 5e-3);
    CHECK(b.gap == doctest::Approx(cascade_gap(c, b.inner)));

    const auto g = cascade_bounds_xy2y1({2, 1}, prob::GaussianSpec{4, 2, 3});
    CHECK(g.gap == 0.0);
    CHECK(g.outer.boundary.front().r1 == doctest::Approx(0.65775).epsilon(1e-5));
}

TEST_CASE("auxiliary search equals a direct enumeration of channels and decoders") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 3; ++trial) {
        const auto src = oracle::random_source(rng, 2, 2, 2);
        const closed::DistortionPair pair{0.2 + 0.05 * trial, 0.15};
        const auto r = brute_force_hb_nocr(src, kH, kH, pair, {2, 2}, coarse(0.25));
        std::vector<std::vector<double>> slices;
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; i + j <= 4; ++j)
                for (int k = 0; i + j + k <= 4; ++k) slices.push_back({i / 4.0, j / 4.0, k / 4.0, (4 - i - j - k) / 4.0});
        double best = INFINITY;
        for (const auto& s0 : slices)
            for (const auto& s1 : slices) {
                std::vector<double> w(s0);
                w.insert(w.end(), s1.begin(), s1.end());
                const TestChannel ch(2, 2, 2, w);
                const auto j = oracle::joint_of(src, ch);
                // smallest distortion over all 16 decoder maps per side
                double dmin[2] = {INFINITY, INFINITY};
                for (int side = 0; side < 2; ++side)
                    for (int map = 0; map < 16; ++map) {
                        double d = 0;
                        for (const auto& [k, m] : j) {
                            const std::size_t u = side == 0 ? k[oracle::A] : k[oracle::B];
                            const std::size_t y = side == 0 ? k[oracle::Y1] : k[oracle::Y2];
                            d += m * (((map >> (u * 2 + y)) & 1) != k[oracle::X]);
                        }
                        dmin[side] = std::min(dmin[side], d);
                    }
                if (dmin[0] > pair.d1 + 1e-12 || dmin[1] > pair.d2 + 1e-12) continue;
                best = std::min(best, oracle::hb_cr(src, ch));
            }
        CHECK(r.rate == doctest::Approx(std::max(0.0, best)).epsilon(1e-10));
    }
}

namespace {
// p(x, y1, y2) with both observations copying x, or both independent of it.
prob::JointSource copies() { return prob::JointSource(prob::FinitePmf({2, 2, 2}, {0.5, 0, 0, 0, 0, 0, 0, 0.5})); }
prob::JointSource useless(double p = 0.3) {
    std::vector<double> m;
    for (int x = 0; x < 2; ++x)
        for (int y1 = 0; y1 < 2; ++y1)
            for (int y2 = 0; y2 < 2; ++y2) m.push_back(0.5 * (y1 ? p : 1 - p) * (y2 ? 0.6 : 0.4));
    return prob::JointSource(prob::FinitePmf({2, 2, 2}, m));
}
} // namespace

TEST_CASE("auxiliary search edge cases") {
    CHECK(brute_force_hb_nocr(copies(), kH, kH, {0.0, 0.0}, {2, 2}, coarse(0.1)).rate == 0.0);
    CHECK(brute_force_hb_nocr(kSrc, kH, kH, {0.5, 0.5}, {2, 2}, coarse(0.1)).rate == 0.0);
    const prob::FinitePmf pxy = kSrc.pmf().marginal({0, 2});
    // lossless with side information: H(X|Y)
    CHECK(brute_force_wz(pxy, kH, 0.0, 2, coarse(0.5)).rate == doctest::Approx(0.35).epsilon(1e-12));
    const prob::FinitePmf indep = useless().pmf().marginal({0, 2});
    const double rd = 1 - oracle::h2(0.1);
    const auto wz = brute_force_wz(indep, kH, 0.1, 2);
    CHECK(wz.rate >= rd - 1e-9);
    CHECK(wz.rate <= rd + 1e-2);
}

TEST_CASE("less side information never lowers the rate") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 3; ++t) {
        const auto src = oracle::random_source(rng, 2, 2, 2);
        std::vector<double> m(4);
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y1 = 0; y1 < 2; ++y1)
                for (std::size_t y2 = 0; y2 < 2; ++y2) m[x * 2 + y2] += src.p(x, y1, y2);
        const prob::JointSource blind(prob::FinitePmf({2, 1, 2}, m));
        const closed::DistortionPair pair{0.2, 0.1};
        CHECK(grid_oracle_hb_cr(blind, kH, kH, pair, 0.05).rate >=
              grid_oracle_hb_cr(src, kH, kH, pair, 0.05).rate - 1e-9);
    }
}

TEST_CASE("side information independent of the source is as good as none") {
    const auto src = useless();
    const prob::JointSource none(prob::FinitePmf({2, 1, 1}, {0.5, 0.5}));
    for (auto pair : {closed::DistortionPair{0.2, 0.1}, {0.1, 0.3}}) {
        CHECK(grid_oracle_hb_cr(src, kH, kH, pair, 0.05).rate ==
              doctest::Approx(grid_oracle_hb_cr(none, kH, kH, pair, 0.05).rate).epsilon(1e-9));
    }
}

TEST_CASE("region sampler special channels") {
    // merged reconstructions give (I(X;A|Y1), I(X;A|Y2)); a constant second one gives (I(X;A|Y1), 0)
    const auto swapped = prob::build_erased_source({0.6, 0.2}).with_side_information_swapped();
    const auto merged = TestChannel::deterministic(2, 2, {0, 1}, {0, 1});
    const auto j = oracle::joint_of(swapped, merged);
    CHECK(functional::both_given_y1().value(swapped, merged) == doctest::Approx(oracle::I(j, {0}, {3}, {1})));
    CHECK(functional::second_given_y2().value(swapped, merged) == doctest::Approx(oracle::I(j, {0}, {3}, {2})));
    const auto flat = TestChannel::deterministic(2, 2, {0, 1}, {0, 0});
    CHECK(functional::second_given_y2().value(swapped, flat) == 0.0);

    // trivial budgets: the origin is in the region
    SamplerConfig cfg;
    cfg.step = 0.25;
    const auto r = cascade_region_xy1y2(swapped, kH, kH, {0.5, 0.5}, cfg);
    REQUIRE(r.boundary.size() == 1);
    CHECK(r.boundary[0].r1 == 0.0);
    CHECK(r.boundary[0].r2 == 0.0);
    cfg.scalar_step = 0.25;
    const auto b = cascade_bounds_xy2y1(kSrc, kH, kH, {0.5, 0.5}, cfg);
    CHECK(b.gap == 0.0);
    CHECK(b.outer.boundary.front().r1 == 0.0);
}
