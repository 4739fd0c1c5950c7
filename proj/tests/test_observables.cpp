#include <gtest/gtest.h>

#include <random>

#include "pbgsim/observables.hpp"

using namespace pbgsim;

namespace {
StateVector random_state(std::size_t n, std::mt19937& rng) {
    std::normal_distribution<double> g;
    StateVector psi(n);
    double norm = 0.0;
    for (auto& a : psi.amplitudes) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto& a : psi.amplitudes) a /= std::sqrt(norm);
    return psi;
}

StateVector unit(const ExcitationBasis& b, const BasisState& s) {
    StateVector psi(b.size());
    psi[b.index_of(s)] = 1.0;
    return psi;
}
}  // namespace

TEST(Observables, InitialTwoPhotonState) {
    const auto b = build_basis(2, 5, true);
    const auto psi = initial_state(b, initial::AtomExcitedDefectLoaded{});
    EXPECT_DOUBLE_EQ(atomic_inversion(b, psi.view()), 1.0);
    EXPECT_DOUBLE_EQ(defect_photon_number(b, psi.view()), 1.0);
    const auto pop = reservoir_sector_populations(b, psi.view());
    EXPECT_DOUBLE_EQ(pop[0], 1.0);
    EXPECT_DOUBLE_EQ(pop[1], 0.0);
    EXPECT_DOUBLE_EQ(pop[2], 0.0);
    EXPECT_DOUBLE_EQ(norm_sq(psi.view()), 1.0);
}

TEST(Observables, SingleKets) {
    const auto b = build_basis(2, 3, true);
    const auto two_defect = unit(b, BasisState::make(Atom::ground, 2));
    EXPECT_DOUBLE_EQ(defect_photon_number(b, two_defect.view()), 2.0);
    EXPECT_DOUBLE_EQ(atomic_inversion(b, two_defect.view()), 0.0);

    const auto pair = unit(b, BasisState::make(Atom::ground, 0, {1, 2}));
    const auto pop = reservoir_sector_populations(b, pair.view());
    EXPECT_DOUBLE_EQ(pop[2], 1.0);
    EXPECT_DOUBLE_EQ(pop[0] + pop[1], 0.0);
    EXPECT_DOUBLE_EQ(defect_photon_number(b, pair.view()), 0.0);

    const auto excited_one = unit(b, BasisState::make(Atom::excited, 0, {3}));
    EXPECT_DOUBLE_EQ(reservoir_sector_populations(b, excited_one.view())[1], 1.0);
    EXPECT_DOUBLE_EQ(
        reservoir_sector_populations(b, excited_one.view(), OnePhotonSector::GroundAtom)[1], 0.0);
}

TEST(Observables, NoExcitedComponents) {
    const auto b = build_basis(2, 4, true);
    StateVector psi(b.size());
    psi[b.defect_only()] = 0.5;
    psi[b.ground_single() + 1] = 0.5;
    psi[b.pairs() + 3] = std::sqrt(0.5);
    EXPECT_DOUBLE_EQ(atomic_inversion(b, psi.view()), 0.0);
}

TEST(Observables, DefectNumberNeedsDefect) {
    const auto b = build_basis(1, 4, false);
    const auto psi = initial_state(b, initial::AtomExcited{});
    EXPECT_THROW(defect_photon_number(b, psi.view()), DomainError);
    EXPECT_DOUBLE_EQ(observe(b, psi.view()).n_defect, 0.0);
}

TEST(Observables, ShapeMismatch) {
    const auto b = build_basis(1, 4, false);
    StateVector psi(3);
    EXPECT_THROW(atomic_inversion(b, psi.view()), ShapeError);
    EXPECT_THROW(observe(b, psi.view()), ShapeError);
}

TEST(Observables, RandomStateProperties) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int p = 1 + trial % 2;
        const bool defect = (trial / 2) % 2 == 0;
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 17);
        const auto b = build_basis(p, n, defect);
        const auto psi = random_state(b.size(), rng);
        const auto r = observe(b, psi.view());
        const auto pop = reservoir_sector_populations(b, psi.view());

        EXPECT_NEAR(pop[0] + pop[1] + pop[2], norm_sq(psi.view()), 1e-12);
        EXPECT_NEAR(r.p_res_zero + r.p_res_one + r.p_res_two, r.norm_sq, 1e-12);
        EXPECT_NEAR(r.norm_sq, 1.0, 1e-12);
        EXPECT_NEAR(r.n_total, p * r.norm_sq, 1e-12);
        EXPECT_NEAR(total_excitations(b, psi.view()), p, 1e-12);
        const double mean_reservoir = r.p_res_one + 2.0 * r.p_res_two;
        EXPECT_NEAR(r.n_total, r.p_excited + r.n_defect + mean_reservoir, 1e-12);
        EXPECT_GE(r.p_excited, 0.0);
        EXPECT_LE(r.p_excited, 1.0 + 1e-12);
        EXPECT_NEAR(r.p_excited, atomic_inversion(b, psi.view()), 1e-14);
        if (b.has_defect()) {
            EXPECT_NEAR(r.n_defect, defect_photon_number(b, psi.view()), 1e-14);
        }
        for (double x : pop) EXPECT_GE(x, 0.0);
    }
}
