#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pbgsim/experiments.hpp"
#include "pbgsim/oracle.hpp"

using namespace pbgsim;

namespace {
/// (2C/pi) int_0^inf exp(-i u^2 tau) du by composite Simpson up to U plus the
/// leading asymptotic tail exp(-i U^2 tau) / (2 i U tau).
cplx kernel_by_quadrature(double C, double tau) {
    const double upper = 30.0;
    const std::size_t n = 200000;
    const double h = upper / n;
    auto f = [&](double u) { return std::polar(1.0, -u * u * tau); };
    cplx s = f(0.0) + f(upper);
    for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    s *= h / 3.0;
    s += f(upper) / cplx(0.0, 2.0 * upper * tau);
    return 2.0 * C / std::numbers::pi * s;
}
}  // namespace

TEST(Kernel, ClosedForm) {
    const KernelSpec spec{1.0, 0.0};
    EXPECT_NEAR(std::abs(memory_kernel(spec, 1.0)), 0.5641895835477563, 1e-15);
    EXPECT_NEAR(std::abs(memory_kernel(spec, 4.0)), 0.28209479177387814, 1e-15);
    for (double tau : {0.1, 1.0, 10.0})
        EXPECT_NEAR(std::arg(memory_kernel(spec, tau)), -std::numbers::pi / 4.0, 1e-15);
    EXPECT_THROW(memory_kernel(spec, 0.0), DomainError);
    EXPECT_THROW(memory_kernel(spec, -1.0), DomainError);
}

TEST(Kernel, AgreesWithDirectQuadrature) {
    for (double tau : {0.5, 1.0, 3.0}) {
        const cplx numeric = kernel_by_quadrature(1.0, tau);
        EXPECT_NEAR(std::abs(numeric - memory_kernel({1.0, 0.0}, tau)), 0.0, 1e-4) << tau;
    }
}

TEST(ExactDecay, NoReservoirIsPurePhase) {
    const KernelSpec spec{0.0, 1.3};
    const auto t = uniform_grid(10.0, 1e-3);
    const auto a = solve_decay_exact(spec, t);
    for (std::size_t i = 0; i < t.size(); i += 100) {
        EXPECT_NEAR(std::norm(a[i]), 1.0, 1e-10);
        EXPECT_NEAR(std::abs(a[i] - std::polar(1.0, -1.3 * t[i])), 0.0, 1e-5);
    }
}

TEST(ExactDecay, BandEdgeTrapsPopulation) {
    const auto t = uniform_grid(10.0, 1e-3);
    const auto a = solve_decay_exact({1.0, 0.0}, t);
    double late = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_LE(std::abs(a[i]), 1.0 + 1e-12);
        if (t[i] >= 8.0) {
            late += std::norm(a[i]);
            ++count;
        }
    }
    late /= count;
    EXPECT_GT(late, 0.3);
    EXPECT_LT(late, 0.6);
}

TEST(ExactDecay, FarAboveEdgeDecaysMonotonically) {
    const auto t = uniform_grid(10.0, 1e-3);
    const auto a = solve_decay_exact({1.0, 20.0}, t);
    double prev = 1.0;
    for (std::size_t i = 1000; i < t.size(); i += 1000) {
        EXPECT_LT(std::norm(a[i]), prev);
        prev = std::norm(a[i]);
    }
    EXPECT_LT(prev, 0.05);
}

TEST(ExactDecay, StepHalvingError) {
    EXPECT_LT(refinement_error({1.0, 0.0}, 10.0, 1e-3), 1e-4);
    EXPECT_LT(refinement_error({1.0, -0.5}, 10.0, 1e-3), 1e-4);
}

TEST(ExactDecay, GridValidation) {
    EXPECT_THROW(solve_decay_exact({}, std::vector<double>{}), DomainError);
    EXPECT_THROW(solve_decay_exact({}, std::vector<double>{0.1, 0.2}), DomainError);
    EXPECT_THROW(solve_decay_exact({}, std::vector<double>{0.0, 0.1, 0.25}), DomainError);
    EXPECT_EQ(solve_decay_exact({}, std::vector<double>{0.0}).size(), 1u);
}

// High-N discretized run as a second, independent route to the plateau.
TEST(ExactDecay, PlateauMatchesDenseDiscretization) {
    auto cfg = default_config(Experiment::convergence);
    cfg.t_max = 10.0;
    cfg.sweep = {2000};
    const auto res = simulate_convergence(cfg);
    const auto p_oracle = res.oracle.p_excited();
    const auto p_disc = res.rows[0].run.p_excited();
    double mo = 0.0, md = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < p_oracle.size(); ++i) {
        if (res.oracle.times[i] < 8.0) continue;
        mo += p_oracle[i];
        md += p_disc[i];
        ++count;
    }
    EXPECT_NEAR(mo / count, md / count, 0.01);
}

TEST(ExactDecay, DeviationShrinksAlongTheLadder) {
    auto cfg = default_config(Experiment::convergence);
    cfg.t_max = 10.0;
    cfg.sweep = {50, 150, 500, 2000};
    const auto res = simulate_convergence(cfg);
    for (std::size_t i = 1; i < res.rows.size(); ++i)
        EXPECT_LT(res.rows[i].deviation.sup_window, res.rows[i - 1].deviation.sup_window)
            << "N = " << res.rows[i].n_modes;
}
