#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pbgsim/dos.hpp"

using namespace pbgsim;

TEST(Dos, EvaluatesInverseSquareRootAboveEdge) {
    const DensityOfStates dos{0.0, 1.0, 1.0};
    EXPECT_DOUBLE_EQ(evaluate_dos(dos, 4.0), 0.5);
    EXPECT_EQ(evaluate_dos(dos, -1.0), 0.0);
}

TEST(Dos, EdgeIsSingular) {
    const DensityOfStates dos{1.0, 2.5, 1.0};
    EXPECT_THROW(evaluate_dos(dos, 1.0), SingularityError);
}

TEST(Dos, StrictlyDecreasingAboveEdge) {
    const DensityOfStates dos{0.3, 2.0, 1.0};
    double prev = evaluate_dos(dos, 0.3 + 1e-6);
    for (double w = 0.31; w < 50.0; w *= 1.1) {
        const double cur = evaluate_dos(dos, w);
        EXPECT_LT(cur, prev);
        EXPECT_GT(cur, 0.0);
        prev = cur;
    }
}

TEST(Dos, SolveK) {
    EXPECT_DOUBLE_EQ(solve_k(150, 0.0, 16.0), 18.75);
    EXPECT_DOUBLE_EQ(solve_k(1, 0.0, 0.25), 1.0);
    EXPECT_DOUBLE_EQ(solve_k(500, 0.0, 16.0), 62.5);
    EXPECT_THROW(solve_k(10, 1.0, 1.0), DomainError);
    EXPECT_THROW(solve_k(10, 2.0, 1.0), DomainError);
}

TEST(Dos, SolveKFillsBandWithNUnitCells) {
    // integral of k / sqrt(w - w_e) over [w_e, w_u] is 2 k sqrt(w_u - w_e)
    for (std::size_t n : {1u, 7u, 150u, 2000u}) {
        const double k = solve_k(n, 0.5, 20.0);
        EXPECT_NEAR(2.0 * k * std::sqrt(19.5), static_cast<double>(n), 1e-9);
    }
}

TEST(Dos, CouplingFromIntegral) {
    const DensityOfStates dos{0.0, 1.0, 1.0};
    EXPECT_NEAR(coupling_from_integral(dos, 150, 16.0), 0.130294003174112, 1e-12);
    EXPECT_NEAR(coupling_from_integral(dos, 500, 16.0), 0.07136496464611085, 1e-12);
    for (std::size_t n : {3u, 150u, 500u, 4000u}) {
        const double g = coupling_from_integral(dos, n, 16.0);
        EXPECT_NEAR(static_cast<double>(n) * g * g, 2.5464790894703255, 1e-12);
    }
}

TEST(Dos, FirstOrderStep) {
    const auto dos = band_edge_dos(150, 16.0);
    const auto res = discretize(dos, 150, 16.0, 0.01, Scheme::FirstOrder);
    ASSERT_EQ(res.frequencies.size(), 150u);
    EXPECT_DOUBLE_EQ(res.frequencies[0], 0.01);
    EXPECT_NEAR(res.frequencies[1], 0.015333333333333334, 1e-15);
}

TEST(Dos, MidpointSeedsWithOneFirstOrderStep) {
    const auto dos = band_edge_dos(2, 16.0);
    const auto mid = discretize(dos, 2, 16.0, 0.01, Scheme::Midpoint);
    const auto first = discretize(dos, 2, 16.0, 0.01, Scheme::FirstOrder);
    EXPECT_EQ(mid.frequencies, first.frequencies);
    EXPECT_THROW(discretize(dos, 1, 16.0, 0.01, Scheme::Midpoint), DomainError);
}

TEST(Dos, MidpointRecursion) {
    const auto dos = band_edge_dos(40, 9.0);
    const auto res = discretize(dos, 40, 9.0, 0.02, Scheme::Midpoint);
    for (std::size_t i = 1; i + 1 < res.frequencies.size(); ++i)
        EXPECT_NEAR(res.frequencies[i + 1],
                    res.frequencies[i - 1] + 2.0 / evaluate_dos(dos, res.frequencies[i]), 1e-12);
}

TEST(Dos, SequencesStrictlyIncreasingWithExactCount) {
    for (auto scheme : {Scheme::FirstOrder, Scheme::Midpoint}) {
        for (std::size_t n : {2u, 50u, 150u, 500u, 2000u}) {
            for (double wu : {9.0, 16.0, 36.0}) {
                const auto dos = band_edge_dos(n, wu);
                {
                    const double delta = unit_cell_seed(dos);
                    const auto res = discretize(dos, n, wu, delta, scheme);
                    ASSERT_EQ(res.frequencies.size(), n);
                    EXPECT_GT(res.frequencies[0], 0.0);
                    for (std::size_t i = 1; i < n; ++i)
                        ASSERT_GT(res.frequencies[i], res.frequencies[i - 1]);
                    const double last = res.frequencies[n - 1] - res.frequencies[n - 2];
                    EXPECT_LE(res.frequencies.back(), wu + last);
                }
            }
        }
    }
}

TEST(Dos, LocalDensityMatchesForLargeN) {
    const auto dos = band_edge_dos(150, 16.0);
    const auto res = discretize(dos, 150, 16.0, 0.01, Scheme::FirstOrder);
    for (std::size_t i = 1; i + 1 < res.frequencies.size(); ++i) {
        const double local = 1.0 / (res.frequencies[i + 1] - res.frequencies[i]);
        EXPECT_NEAR(local / evaluate_dos(dos, res.frequencies[i]), 1.0, 0.05);
    }
}

TEST(Dos, UnitCellSeedHoldsOneMode) {
    const auto dos = band_edge_dos(150, 36.0);
    const double delta = unit_cell_seed(dos);
    EXPECT_NEAR(2.0 * dos.k_const * std::sqrt(delta), 1.0, 1e-12);
    EXPECT_NEAR(delta, 36.0 / (150.0 * 150.0), 1e-15);
}

TEST(Dos, InconsistentDensityIsRejected) {
    // k much smaller than solve_k gives far too wide spacings
    const DensityOfStates dos{0.0, 0.5, 1.0};
    EXPECT_THROW(discretize(dos, 150, 16.0, 0.01, Scheme::FirstOrder), ConsistencyError);
}

TEST(Dos, FixedSeedOvershootsForLargeN) {
    // a fixed offset pushes the whole ladder up; at N = 2000 the last mode
    // lands ~0.76 above omega_u = 16, far beyond one spacing
    const auto dos = band_edge_dos(2000, 16.0);
    EXPECT_THROW(discretize(dos, 2000, 16.0, 0.01, Scheme::FirstOrder), ConsistencyError);
    EXPECT_NO_THROW(discretize(dos, 2000, 16.0, unit_cell_seed(dos), Scheme::FirstOrder));
}

TEST(Dos, BadArguments) {
    const auto dos = band_edge_dos(10, 4.0);
    EXPECT_THROW(discretize(dos, 10, 4.0, 0.0, Scheme::FirstOrder), DomainError);
    EXPECT_THROW(discretize(dos, 10, 0.005, 0.01, Scheme::FirstOrder), DomainError);
    EXPECT_THROW(discretize(dos, 0, 4.0, 0.01, Scheme::FirstOrder), DomainError);
}

TEST(Dos, VacuumShift) {
    for (std::size_t n : {150u, 500u}) {
        const auto dos = band_edge_dos(n, 16.0);
        const auto res = discretize(dos, n, 16.0, unit_cell_seed(dos), Scheme::FirstOrder);
        EXPECT_NEAR(vacuum_shift(res), 0.15915494309189535, 1e-14);
        EXPECT_DOUBLE_EQ(res.vacuum_shift, vacuum_shift(res));
        double sum_g2 = 0.0;
        for (double g : res.couplings) sum_g2 += g * g;
        EXPECT_NEAR(sum_g2, 2.0 / std::numbers::pi * 4.0, 1e-12);
    }
    // shift -> 0 as the discretized band grows
    double prev = 1e9;
    for (double wu : {1e2, 1e4, 1e6, 1e8}) {
        const auto res = discretize(band_edge_dos(20, wu), 20, wu, 1.0, Scheme::FirstOrder);
        EXPECT_LT(res.vacuum_shift, prev);
        prev = res.vacuum_shift;
    }
    EXPECT_LT(prev, 1e-4);
}
