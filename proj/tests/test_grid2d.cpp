#include <gtest/gtest.h>

#include <vector>

#include "lipz/grid2d.hpp"
#include "testutil.hpp"

using namespace lipz;

namespace {

GridMap shear_identity() { return GridMap::shear(LatticeFunction::linear(0)); }
GridMap shear_x() { return GridMap::shear(LatticeFunction::linear(1)); }
GridMap upper_unipotent() { return GridMap::linear(Mat2{1, 1, 0, 1}); }

TEST(Apply, SpecExamples) {
    EXPECT_EQ(shear_identity()(GridPoint{3, 4}), (GridPoint{3, 4}));
    EXPECT_EQ(shear_x()(GridPoint{2, 5}), (GridPoint{2, 7}));
    // row convention: (x, y) -> (x + y, y)
    EXPECT_EQ(upper_unipotent()(GridPoint{2, 5}), (GridPoint{7, 5}));
}

TEST(Apply, CompositionIsRightToLeft) {
    auto composite = GridMap::composition({GridMap::translation(10, 0), upper_unipotent()});
    // inner linear first: (1,2) -> (3,2), then translation -> (13,2)
    EXPECT_EQ(composite(GridPoint{1, 2}), (GridPoint{13, 2}));
}

TEST(Apply, ShearWithTable) {
    auto g = LatticeFunction::checked(1, -2, {{0, 3}});
    auto f = GridMap::shear(g);
    EXPECT_EQ(f(GridPoint{0, 0}), (GridPoint{0, 1}));   // g(0) = -2 + 3
    EXPECT_EQ(f(GridPoint{4, 1}), (GridPoint{4, 3}));   // g(4) = 2
}

TEST(Linear, RejectsNonUnimodular) {
    EXPECT_THROW(GridMap::linear(Mat2{2, 0, 0, 1}), std::invalid_argument);
    EXPECT_NO_THROW(GridMap::linear(Mat2{0, 1, 1, 0}));  // det -1
}

TEST(Inverse, RoundTripsOnWindows) {
    std::vector<GridMap> maps = {
        shear_x(),
        GridMap::shear(LatticeFunction::checked(-2, 5, {{1, 4}, {7, -1}})),
        upper_unipotent(),
        GridMap::linear(Mat2{2, 1, 1, 1}),
        GridMap::linear(Mat2{0, 1, 1, 0}),
        GridMap::translation(9, -4),
        GridMap::composition({upper_unipotent(), GridMap::translation(1, 2), shear_x()}),
    };
    for (const auto& f : maps) {
        auto g = f.inverse();
        long long n = 50;
        for (long long x = -n; x <= n; x += 7)
            for (long long y = -n; y <= n; y += 7) {
                GridPoint p{Int(x), Int(y)};
                EXPECT_EQ(g(f(p)), p);
                EXPECT_EQ(f(g(p)), p);
            }
    }
}

TEST(ShearGroupLaw, AdditiveComposition) {
    auto g1 = LatticeFunction::checked(2, -1, {{0, 5}, {3, -2}});
    auto g2 = LatticeFunction::checked(-1, 4, {{3, 2}, {8, 1}});
    auto composed = GridMap::composition({GridMap::shear(g1), GridMap::shear(g2)});
    auto summed = GridMap::shear(g1 + g2);
    for (long long x = -30; x <= 30; ++x)
        for (long long y : {-5LL, 0LL, 12LL}) {
            GridPoint p{Int(x), Int(y)};
            EXPECT_EQ(composed(p), summed(p));
        }
}

TEST(GridLipschitz, SpecExamples) {
    EXPECT_EQ(grid_lipschitz_window(shear_identity(), 5).forward, 1);
    EXPECT_EQ(grid_lipschitz_window(shear_identity(), 5).backward, 1);

    auto shear = grid_lipschitz_window(shear_x(), 5);
    EXPECT_EQ(shear.forward, 2);  // a unit x-step moves the image by (1,1)
    EXPECT_EQ(shear.backward, 2);

    auto linear = grid_lipschitz_window(upper_unipotent(), 5);
    EXPECT_EQ(linear.forward, 2);
    EXPECT_EQ(linear.backward, 2);
}

TEST(IsometryGap, IsometriesHaveZeroGap) {
    EXPECT_EQ(isometry_gap(shear_identity(), 10).value, 0);
    EXPECT_EQ(isometry_gap(GridMap::translation(7, -2), 10).value, 0);
    EXPECT_EQ(isometry_gap(GridMap::linear(Mat2{0, -1, 1, 0}), 8).value, 0);
}

TEST(IsometryGap, MatchesExhaustiveOracle) {
    std::vector<GridMap> maps = {
        shear_x(),
        GridMap::shear(LatticeFunction::checked(1, 2, {{0, -3}})),
        upper_unipotent(),
        GridMap::linear(Mat2{2, 1, 1, 1}),
        GridMap::composition({shear_x(), GridMap::translation(3, 1)}),
        GridMap::translation(5, 5),
    };
    for (const auto& f : maps)
        for (long long n : {2LL, 3LL, 4LL})
            EXPECT_EQ(isometry_gap(f, n).value, Rat(testutil::isometry_gap_oracle(f, n)))
                << "n = " << n;
}

TEST(IsometryGap, ShearGrowsWithoutBound) {
    auto f = shear_x();
    Rat previous = -1;
    for (long long n : {4LL, 8LL, 16LL, 32LL}) {
        Rat gap = isometry_gap(f, n).value;
        EXPECT_GT(gap, previous);
        previous = gap;
    }
    EXPECT_GE(isometry_gap(f, 16).value, 8);
}

TEST(GridFolner, SpecExamples) {
    EXPECT_EQ(grid_folner_ratio(shear_identity(), 10).ratio, 1);

    auto t = grid_folner_ratio(GridMap::translation(1, 0), 10);
    EXPECT_EQ(t.ratio, Rat(420, 441));

    // shear g(x) = x: the exact count has the closed form (2n+1)^2 - n(n+1)
    for (long long n : {50LL, 200LL}) {
        auto rep = grid_folner_ratio(shear_x(), n);
        Int side = 2 * n + 1;
        EXPECT_EQ(rep.intersection, side * side - Int(n) * (n + 1));
    }
    auto big = grid_folner_ratio(shear_x(), 200);
    EXPECT_LT(abs_rat(big.ratio - Rat(3, 4)), Rat(1, 100));
}

TEST(GridFolner, ShearStaysAwayFromOne) {
    for (long long n : {50LL, 75LL, 100LL, 150LL})
        EXPECT_LE(grid_folner_ratio(shear_x(), n).ratio, Rat(4, 5));
}

TEST(GridWindows, StripedScansMatchSequential) {
    std::vector<GridMap> maps = {
        shear_x(),
        GridMap::linear(Mat2{2, 1, 1, 1}),
        GridMap::composition({upper_unipotent(), GridMap::translation(3, -2)}),
    };
    for (const auto& f : maps)
        for (long long n : {5LL, 17LL}) {
            auto l1 = grid_lipschitz_window(f, n, 1);
            auto l3 = grid_lipschitz_window(f, n, 3);
            EXPECT_EQ(l1.forward, l3.forward);
            EXPECT_EQ(l1.backward, l3.backward);
            EXPECT_EQ(isometry_gap(f, n, 1).value, isometry_gap(f, n, 3).value);
            EXPECT_EQ(grid_folner_ratio(f, n, 1).intersection,
                      grid_folner_ratio(f, n, 3).intersection);
        }
}

TEST(GridWindows, RejectNonPositive) {
    EXPECT_THROW(grid_lipschitz_window(shear_x(), 0), std::invalid_argument);
    EXPECT_THROW(isometry_gap(shear_x(), -1), std::invalid_argument);
    EXPECT_THROW(grid_folner_ratio(shear_x(), 0), std::invalid_argument);
}

}  // namespace
