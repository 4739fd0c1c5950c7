#pragma once

// Band-edge density of modes and its replacement by a finite set of
// discrete oscillators.
//
// Units: frequencies in C^(2/3), with C the effective atom-reservoir coupling
// defined through |kappa(w)|^2 rho(w) = (C/pi) / sqrt(w - w_e).

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "pbgsim/errors.hpp"

namespace pbgsim {

/// Isotropic band-edge density rho(w) = k / sqrt(w - w_e) for w > w_e.
struct DensityOfStates {
    double omega_e = 0.0;
    double k_const = 1.0;
    double coupling_C = 1.0;
};

enum class Scheme {
    FirstOrder,  // w[i+1] = w[i] + 1/rho(w[i])
    Midpoint,    // w[i+1] = w[i-1] + 2/rho(w[i])
};

inline const char* to_string(Scheme s) {
    return s == Scheme::FirstOrder ? "first-order" : "midpoint";
}

/// N discrete modes standing in for the band [w_e, w_u]. Everything above
/// w_u is folded into the vacuum shift.
struct DiscretizedReservoir {
    std::vector<double> frequencies;
    /// Per-mode couplings. All equal to coupling_g for the band-edge model.
    std::vector<double> couplings;
    double coupling_g = 0.0;
    std::size_t n_modes = 0;
    double omega_e = 0.0;
    double omega_u = 0.0;
    double delta_seed = 0.0;
    double vacuum_shift = 0.0;

    /// Detuning of mode j from the band edge (0-based).
    double detuning(std::size_t j) const { return frequencies[j] - omega_e; }
};

inline double evaluate_dos(const DensityOfStates& dos, double omega) {
    if (omega == dos.omega_e)
        throw SingularityError("density of states diverges at the band edge");
    if (omega < dos.omega_e) return 0.0;
    return dos.k_const / std::sqrt(omega - dos.omega_e);
}

/// The k for which the band [w_e, w_u] holds exactly N unit cells,
/// i.e. integral of rho over the band equals N.
inline double solve_k(std::size_t n_modes, double omega_e, double omega_u) {
    if (!(omega_u > omega_e))
        throw DomainError("solve_k: omega_u must exceed omega_e");
    if (n_modes < 1) throw DomainError("solve_k: need at least one mode");
    return static_cast<double>(n_modes) / (2.0 * std::sqrt(omega_u - omega_e));
}

/// Density consistent with N modes filling [w_e, w_u].
inline DensityOfStates band_edge_dos(std::size_t n_modes, double omega_u,
                                     double omega_e = 0.0,
                                     double coupling_C = 1.0) {
    return {omega_e, solve_k(n_modes, omega_e, omega_u), coupling_C};
}

/// Offset of the first mode that leaves exactly one unit cell between the
/// edge and w_1: integral of rho over [w_e, w_e + delta] = 1.
inline double unit_cell_seed(const DensityOfStates& dos) {
    const double half_inv_k = 0.5 / dos.k_const;
    return half_inv_k * half_inv_k;
}

inline double coupling_from_integral(const DensityOfStates& dos,
                                     std::size_t n_modes, double omega_u) {
    if (!(omega_u > dos.omega_e))
        throw DomainError("coupling: omega_u must exceed omega_e");
    if (n_modes < 1) throw DomainError("coupling: need at least one mode");
    return std::sqrt(2.0 * dos.coupling_C /
                     (static_cast<double>(n_modes) * std::numbers::pi) *
                     std::sqrt(omega_u - dos.omega_e));
}

/// Level shift from the adiabatically eliminated modes above w_u:
/// g^2 N / (w_u - w_e) = (2C/pi) / sqrt(w_u - w_e). Enters the equations of
/// motion as (Delta_o - S).
inline double vacuum_shift(const DiscretizedReservoir& res) {
    return res.coupling_g * res.coupling_g *
           static_cast<double>(res.n_modes) / (res.omega_u - res.omega_e);
}

inline DiscretizedReservoir discretize(const DensityOfStates& dos,
                                       std::size_t n_modes, double omega_u,
                                       double delta_seed, Scheme scheme) {
    if (n_modes < 1) throw DomainError("discretize: need at least one mode");
    if (scheme == Scheme::Midpoint && n_modes < 2)
        throw DomainError("discretize: midpoint scheme needs at least two modes");
    if (!(delta_seed > 0.0))
        throw DomainError("discretize: delta_seed must be positive");
    if (!(omega_u > dos.omega_e + delta_seed))
        throw DomainError("discretize: omega_u must exceed omega_e + delta_seed");

    std::vector<double> w;
    w.reserve(n_modes);
    w.push_back(dos.omega_e + delta_seed);
    // Midpoint needs two seeds; the second comes from one first-order step.
    if (n_modes > 1) w.push_back(w[0] + 1.0 / evaluate_dos(dos, w[0]));
    while (w.size() < n_modes) {
        const std::size_t i = w.size() - 1;
        const double next = scheme == Scheme::FirstOrder
                                ? w[i] + 1.0 / evaluate_dos(dos, w[i])
                                : w[i - 1] + 2.0 / evaluate_dos(dos, w[i]);
        if (!(next > w[i]))
            throw ConsistencyError("discretize: frequencies stopped increasing");
        w.push_back(next);
    }

    const double last_spacing =
        n_modes > 1 ? w[n_modes - 1] - w[n_modes - 2] : 0.0;
    if (w.back() > omega_u + last_spacing) {
        throw ConsistencyError(
            "discretize: last mode at " + std::to_string(w.back()) +
            " overshoots omega_u = " + std::to_string(omega_u) +
            " by more than one spacing; (N, omega_u, k) are inconsistent, "
            "derive k with solve_k");
    }

    DiscretizedReservoir res;
    res.frequencies = std::move(w);
    res.coupling_g = coupling_from_integral(dos, n_modes, omega_u);
    res.couplings.assign(n_modes, res.coupling_g);
    res.n_modes = n_modes;
    res.omega_e = dos.omega_e;
    res.omega_u = omega_u;
    res.delta_seed = delta_seed;
    res.vacuum_shift = vacuum_shift(res);
    return res;
}

}  // namespace pbgsim
