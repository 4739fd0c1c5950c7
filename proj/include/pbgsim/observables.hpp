#pragma once

#include <array>
#include <complex>
#include <span>

#include "pbgsim/statespace.hpp"

namespace pbgsim {

/// Which kets count toward the one-photon reservoir sector.
enum class OnePhotonSector {
    AllStates,   // every ket with exactly one reservoir photon
    GroundAtom,  // only |g,1_d,1_j> (or |g,1_j> for p=1); breaks p0+p1+p2 = norm
};

/// Column names double as the CSV header.
struct ObservableRecord {
    double p_excited = 0.0;
    double n_defect = 0.0;
    double p_res_zero = 0.0;
    double p_res_one = 0.0;
    double p_res_two = 0.0;
    double n_total = 0.0;
    double norm_sq = 0.0;
};

inline void check_shape(const ExcitationBasis& basis,
                        std::span<const cplx> psi) {
    if (psi.size() != basis.size())
        throw ShapeError("state of size " + std::to_string(psi.size()) +
                         " does not match basis of size " +
                         std::to_string(basis.size()));
}

inline double norm_sq(std::span<const cplx> psi) {
    double s = 0.0;
    for (const cplx& a : psi) s += std::norm(a);
    return s;
}

inline double atomic_inversion(const ExcitationBasis& basis,
                               std::span<const cplx> psi) {
    check_shape(basis, psi);
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        if (basis.atom_excited(i)) s += std::norm(psi[i]);
    return s;
}

inline double defect_photon_number(const ExcitationBasis& basis,
                                   std::span<const cplx> psi) {
    if (!basis.has_defect())
        throw DomainError("defect photon number requested for a basis without defect");
    check_shape(basis, psi);
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        s += basis.defect_photons(i) * std::norm(psi[i]);
    return s;
}

inline std::array<double, 3> reservoir_sector_populations(
    const ExcitationBasis& basis, std::span<const cplx> psi,
    OnePhotonSector sector = OnePhotonSector::AllStates) {
    check_shape(basis, psi);
    std::array<double, 3> pop{};
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const int r = basis.reservoir_photons(i);
        if (r == 1 && sector == OnePhotonSector::GroundAtom && basis.atom_excited(i))
            continue;
        pop[r] += std::norm(psi[i]);
    }
    return pop;
}

inline double total_excitations(const ExcitationBasis& basis,
                                std::span<const cplx> psi) {
    check_shape(basis, psi);
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        s += (basis.atom_excited(i) + basis.defect_photons(i) +
              basis.reservoir_photons(i)) *
             std::norm(psi[i]);
    return s;
}

/// All observables in one pass over the amplitudes.
inline ObservableRecord observe(const ExcitationBasis& basis,
                                std::span<const cplx> psi,
                                OnePhotonSector sector = OnePhotonSector::AllStates) {
    check_shape(basis, psi);
    ObservableRecord r;
    std::array<double, 3> pop{};
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double w = std::norm(psi[i]);
        const bool e = basis.atom_excited(i);
        const int d = basis.defect_photons(i);
        const int n = basis.reservoir_photons(i);
        if (e) r.p_excited += w;
        r.n_defect += d * w;
        if (!(n == 1 && e && sector == OnePhotonSector::GroundAtom)) pop[n] += w;
        r.n_total += (e + d + n) * w;
        r.norm_sq += w;
    }
    r.p_res_zero = pop[0];
    r.p_res_one = pop[1];
    r.p_res_two = pop[2];
    return r;
}

}  // namespace pbgsim
