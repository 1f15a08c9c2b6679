#include <gtest/gtest.h>

#include <iostream>
#include <random>

#include "lipz/rigidity.hpp"
#include "testutil.hpp"

using namespace lipz;

namespace {

EventuallyAffineMap transposition01() {
    return validate_bijection({+1, 0, {{0, 1}, {1, -1}}});
}

TEST(Decompose, Isometries) {
    auto d = decompose(EventuallyAffineMap::identity());
    EXPECT_EQ(d.orientation, 1);
    EXPECT_EQ(d.constant, 0);
    EXPECT_EQ(d.residual_sup, 0);
    EXPECT_EQ(d.lipschitz_product, 1);
    EXPECT_TRUE(d.conforms);
    EXPECT_FALSE(d.empirical);

    auto r = decompose(EventuallyAffineMap::affine(-1, 5));
    EXPECT_EQ(r.orientation, -1);
    EXPECT_EQ(r.constant, 5);
    EXPECT_EQ(r.residual_sup, 0);
    EXPECT_EQ(r.lipschitz_product, 1);
    EXPECT_TRUE(r.conforms);
}

TEST(Decompose, Transposition) {
    auto d = decompose(transposition01());
    EXPECT_EQ(d.orientation, 1);
    EXPECT_EQ(d.constant, 0);
    EXPECT_EQ(d.residual_sup, 1);
    EXPECT_EQ(d.lipschitz_product, 4);
    EXPECT_TRUE(d.conforms);
}

TEST(Decompose, MidrangePerturbationNeverImproves) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        auto f = testutil::random_map(rng);
        auto d = decompose(f);
        for (int delta : {-1, +1}) {
            Int c = d.constant + delta;
            Rat sup = 0;
            Int lo = -1, hi = 1;
            if (auto w = f.widened_support()) { lo = w->first; hi = w->second; }
            for (Int x = lo; x <= hi; ++x)
                sup = std::max(sup, Rat(abs_int(f(x) - f.orientation() * x - c)));
            sup = std::max(sup, Rat(abs_int(f.offset() - c)));
            EXPECT_GE(sup, d.residual_sup);
        }
    }
}

TEST(Decompose, RandomMapsAlwaysConform) {
    std::mt19937_64 rng(1001);
    for (int trial = 0; trial < 300; ++trial) {
        auto d = decompose(testutil::random_map(rng));
        EXPECT_TRUE(d.conforms);
    }
}

TEST(DecomposeWindow, SpecExamples) {
    // identity restricted to [-5, 5]
    std::vector<Int> id_values;
    for (Int x = -5; x <= 5; ++x) id_values.push_back(x);
    auto d1 = decompose_window(WindowSample{-5, id_values});
    EXPECT_TRUE(d1.conforms);
    EXPECT_EQ(d1.residual_sup, 0);
    EXPECT_TRUE(d1.empirical);

    auto d2 = decompose_window(WindowSample{0, {3, 2, 1, 0}});
    EXPECT_EQ(d2.orientation, -1);
    EXPECT_EQ(d2.constant, 3);
    EXPECT_EQ(d2.residual_sup, 0);

    auto d3 = decompose_window(WindowSample{0, {1, 0, 2, 3}});
    EXPECT_EQ(d3.orientation, 1);
    EXPECT_EQ(d3.constant, 0);  // midrange of {1,-1,0,0}
    EXPECT_EQ(d3.residual_sup, 1);
    EXPECT_EQ(d3.lipschitz_product, 4);
    EXPECT_TRUE(d3.conforms);
}

TEST(DecomposeWindow, TooShortThrows) {
    EXPECT_THROW(decompose_window(WindowSample{0, {5}}), degenerate_window);
}

TEST(RayProfile, SpecExamples) {
    auto id = ray_profile(EventuallyAffineMap::identity(), 0);
    EXPECT_EQ(id.ray_case, RayCase::below_ray);
    EXPECT_TRUE(id.region_empty);
    EXPECT_EQ(id.width, 0);
    EXPECT_TRUE(id.centered);

    auto refl = ray_profile(EventuallyAffineMap::affine(-1, 0), 0);
    EXPECT_EQ(refl.ray_case, RayCase::above_ray);
    EXPECT_TRUE(refl.region_empty);
    EXPECT_TRUE(refl.centered);

    // transposition at 0: image (-inf,-1] U {1}, region [0,1]
    auto t = ray_profile(transposition01(), 0);
    EXPECT_EQ(t.ray_case, RayCase::below_ray);
    ASSERT_FALSE(t.region_empty);
    EXPECT_EQ(t.region_lo, 0);
    EXPECT_EQ(t.region_hi, 1);
    EXPECT_EQ(t.width, 2);
    EXPECT_TRUE(t.centered);
}

TEST(RayProfile, MatchesMembershipOracle) {
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<long long> cut_pick(-60, 60);
    for (int trial = 0; trial < 150; ++trial) {
        auto f = testutil::random_map(rng);
        for (int k = 0; k < 6; ++k) {
            Int x(cut_pick(rng));
            auto got = ray_profile(f, x);
            auto want = testutil::ray_oracle(f, x);
            EXPECT_EQ(got.ray_case == RayCase::below_ray, want.below);
            EXPECT_EQ(got.region_empty, want.region_empty);
            if (!want.region_empty) {
                EXPECT_EQ(got.region_lo, want.region_lo);
                EXPECT_EQ(got.region_hi, want.region_hi);
            }
            EXPECT_TRUE(got.centered);
        }
    }
}

TEST(RayProfile, WidthAgainstHalfProductConvention) {
    // Reported, not asserted: the width bound uses our lattice-cell
    // convention, so violations are counted and printed.
    std::mt19937_64 rng(555);
    std::uniform_int_distribution<long long> cut_pick(-40, 40);
    int checked = 0, wide = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto f = testutil::random_map(rng);
        Rat c = lipschitz_profile(f).product;
        for (int k = 0; k < 5; ++k) {
            auto profile = ray_profile(f, Int(cut_pick(rng)));
            ++checked;
            if (Rat(profile.width) > Rat(ceil_rat(c / 2))) ++wide;
        }
    }
    std::cout << "[ width ] " << wide << " of " << checked
              << " profiles exceed ceil(C/2) under the cell convention\n";
    RecordProperty("width_violations", wide);
    EXPECT_GT(checked, 0);
}

TEST(RayDichotomy, ConsistentAcrossCuts) {
    std::vector<Int> cuts = {-3, 0, 7};
    EXPECT_TRUE(ray_dichotomy_consistency(EventuallyAffineMap::identity(), cuts));
    EXPECT_TRUE(ray_dichotomy_consistency(EventuallyAffineMap::affine(-1, 0), cuts));
    std::vector<Int> cuts2 = {-2, 0, 2};
    EXPECT_TRUE(ray_dichotomy_consistency(transposition01(), cuts2));
}

TEST(Displacement, SpecExamples) {
    EXPECT_TRUE(displacement_check(EventuallyAffineMap::identity(), 0, 10));
    EXPECT_TRUE(displacement_check(EventuallyAffineMap::affine(+1, 3), 0, 5));
    EXPECT_TRUE(displacement_check(transposition01(), -3, 3));
}

TEST(Displacement, HypothesisRequiresWideGap) {
    // transposition has C = 4; a gap of 4 does not satisfy x2 - x1 > C
    EXPECT_THROW(displacement_check(transposition01(), 0, 4), hypothesis_not_met);
}

TEST(Displacement, HoldsOnRandomWidePairs) {
    std::mt19937_64 rng(2718);
    int done = 0;
    while (done < 1000) {
        auto f = testutil::random_map(rng);
        Int c_ceil = ceil_rat(lipschitz_profile(f).product);
        std::uniform_int_distribution<long long> base(-50, 50);
        std::uniform_int_distribution<long long> extra(1, 40);
        Int x1(base(rng));
        Int x2 = x1 + c_ceil + extra(rng);
        EXPECT_TRUE(displacement_check(f, x1, x2));
        ++done;
    }
}

TEST(Folner, SpecExamples) {
    auto id10 = folner_ratio(EventuallyAffineMap::identity(), 10);
    EXPECT_EQ(id10.window_size, 21);
    EXPECT_EQ(id10.intersection, 21);
    EXPECT_EQ(id10.ratio, 1);

    auto shift10 = folner_ratio(EventuallyAffineMap::affine(+1, 1), 10);
    EXPECT_EQ(shift10.intersection, 20);
    EXPECT_EQ(shift10.ratio, Rat(20, 21));

    auto t5 = folner_ratio(transposition01(), 5);
    EXPECT_EQ(t5.intersection, 11);
    EXPECT_EQ(t5.ratio, 1);
}

TEST(Folner, MatchesDirectCountOracle) {
    std::mt19937_64 rng(640);
    for (int trial = 0; trial < 120; ++trial) {
        auto f = testutil::random_map(rng);
        for (long long n : {3LL, 10LL, 37LL, 64LL}) {
            auto report = folner_ratio(f, Int(n));
            EXPECT_EQ(report.intersection, testutil::folner_count_oracle(f, n));
        }
    }
}

TEST(FolnerCurve, CertifiedLowerBound) {
    auto shift = EventuallyAffineMap::affine(+1, 1);
    std::vector<Int> ns = {10, 100};
    auto curve = folner_curve(shift, ns);
    ASSERT_EQ(curve.size(), 2u);
    EXPECT_EQ(curve[0].report.ratio, Rat(20, 21));
    EXPECT_EQ(curve[1].report.ratio, Rat(200, 201));
    for (const auto& point : curve) {
        EXPECT_EQ(point.lower_bound, 1 - Rat(2, point.report.window_size));
        EXPECT_TRUE(point.meets_bound);
    }

    std::vector<Int> small_ns = {1, 2, 5};
    for (const auto& point : folner_curve(transposition01(), small_ns))
        EXPECT_EQ(point.report.ratio, 1);

    std::mt19937_64 rng(8080);
    std::vector<Int> probe_ns = {25, 50};
    for (int trial = 0; trial < 80; ++trial) {
        auto f = testutil::random_map(rng);
        for (const auto& point : folner_curve(f, probe_ns)) EXPECT_TRUE(point.meets_bound);
    }
}

TEST(Folner, RejectsNonPositiveWindow) {
    EXPECT_THROW(folner_ratio(EventuallyAffineMap::identity(), 0), std::invalid_argument);
}

}  // namespace
