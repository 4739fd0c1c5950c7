#pragma once

// Schroedinger amplitude equations for the atom + defect + discretized
// reservoir in the rotating frame of the band edge, and a fixed-step RK4
// propagator for them.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <optional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "pbgsim/dos.hpp"
#include "pbgsim/observables.hpp"
#include "pbgsim/statespace.hpp"

namespace pbgsim {

struct SystemParams {
    double delta_o = 0.0;  // atom detuning from the band edge
    double delta_d = 0.0;  // defect detuning; negative means inside the gap
    double g_d = 0.0;      // atom-defect coupling
    bool include_shift = true;
};

struct PropagationConfig {
    double t_max = 10.0;
    double dt = 1e-3;
    std::size_t sample_stride = 1;
    bool store_full_state = false;
    /// Largest tolerated |norm(t) - norm(0)|.
    double norm_tolerance = 1e-8;
    /// Largest tolerated dt * (fastest frequency).
    double max_phase_step = 0.1;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ObservableRecord> observables;
    StateVector final_state;
    std::vector<StateVector> states;
};

/// Anything that can play the role of -i H acting on an amplitude vector.
template <class G>
concept Generator = requires(const G& g, std::span<const cplx> in,
                             std::span<cplx> out) {
    { g.apply(in, out) };
    { g.max_frequency() } -> std::convertible_to<double>;
    { g.dimension() } -> std::convertible_to<std::size_t>;
};

namespace detail {
inline constexpr cplx minus_i{0.0, -1.0};
inline constexpr double sqrt2 = 1.4142135623730951;

inline double shift_of(const SystemParams& params,
                       const DiscretizedReservoir& res) {
    return params.include_shift ? res.vacuum_shift : 0.0;
}

inline double fastest_frequency(const SystemParams& params,
                                const DiscretizedReservoir& res) {
    return std::max({std::abs(params.delta_o) + shift_of(params, res),
                     std::abs(2.0 * params.delta_d),
                     2.0 * (res.omega_u - res.omega_e)});
}

inline void check_reservoir(const ExcitationBasis& basis,
                            const DiscretizedReservoir& res) {
    if (basis.n_modes() != res.n_modes)
        throw ShapeError("basis has " + std::to_string(basis.n_modes()) +
                         " modes, reservoir has " + std::to_string(res.n_modes));
}
}  // namespace detail

/// Single excitation. With a defect in the basis, it is one more discrete
/// mode at delta_d coupled with g_d.
class OneExcitationGenerator {
public:
    OneExcitationGenerator(SystemParams params, const DiscretizedReservoir& res,
                           const ExcitationBasis& basis)
        : params_(params), res_(res), basis_(basis) {
        if (basis.p() != 1) throw ShapeError("one-excitation generator needs a p=1 basis");
        detail::check_reservoir(basis, res);
        shift_ = detail::shift_of(params, res);
    }

    std::size_t dimension() const { return basis_.size(); }
    double max_frequency() const { return detail::fastest_frequency(params_, res_); }

    void apply(std::span<const cplx> psi, std::span<cplx> out) const {
        if (psi.size() != dimension() || out.size() != dimension())
            throw ShapeError("one-excitation generator: state size mismatch");
        const std::size_t a0 = basis_.atom_only();
        const std::size_t b0 = basis_.defect_only();
        const std::size_t bj = basis_.ground_single();
        const cplx a = psi[a0];

        cplx coupled = 0.0;
        for (std::size_t j = 0; j < res_.n_modes; ++j) {
            const cplx b = psi[bj + j];
            coupled += res_.couplings[j] * b;
            out[bj + j] = detail::minus_i * (res_.detuning(j) * b + res_.couplings[j] * a);
        }
        if (b0 != ExcitationBasis::npos) {
            coupled += params_.g_d * psi[b0];
            out[b0] = detail::minus_i * (params_.delta_d * psi[b0] + params_.g_d * a);
        }
        out[a0] = detail::minus_i * ((params_.delta_o - shift_) * a + coupled);
    }

private:
    SystemParams params_;
    const DiscretizedReservoir& res_;
    const ExcitationBasis& basis_;
    double shift_ = 0.0;
};

/// Two excitations, with or without the defect mode. One pass over the pair
/// block accumulates sum_k g_k b_jk for every j.
class TwoExcitationGenerator {
public:
    TwoExcitationGenerator(SystemParams params, const DiscretizedReservoir& res,
                           const ExcitationBasis& basis)
        : params_(params), res_(res), basis_(basis), pair_sum_(res.n_modes) {
        if (basis.p() != 2) throw ShapeError("two-excitation generator needs a p=2 basis");
        detail::check_reservoir(basis, res);
        shift_ = detail::shift_of(params, res);
    }

    std::size_t dimension() const { return basis_.size(); }
    double max_frequency() const { return detail::fastest_frequency(params_, res_); }

    void apply(std::span<const cplx> psi, std::span<cplx> out) const {
        if (psi.size() != dimension() || out.size() != dimension())
            throw ShapeError("two-excitation generator: state size mismatch");
        const std::size_t n = res_.n_modes;
        const auto& g = res_.couplings;
        const std::size_t aj = basis_.excited_single();
        const cplx* a = psi.data() + aj;
        const cplx* pairs = psi.data() + basis_.pairs();
        cplx* dpairs = out.data() + basis_.pairs();

        std::fill(pair_sum_.begin(), pair_sum_.end(), cplx{});
        std::size_t p = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double dj = res_.detuning(j);
            // b_jj
            dpairs[p] = detail::minus_i *
                        (2.0 * dj * pairs[p] + detail::sqrt2 * g[j] * a[j]);
            pair_sum_[j] += detail::sqrt2 * g[j] * pairs[p];
            ++p;
            for (std::size_t k = j + 1; k < n; ++k, ++p) {
                const cplx b = pairs[p];
                dpairs[p] = detail::minus_i *
                            ((dj + res_.detuning(k)) * b + g[k] * a[j] + g[j] * a[k]);
                pair_sum_[j] += g[k] * b;
                pair_sum_[k] += g[j] * b;
            }
        }

        if (!basis_.has_defect()) {
            for (std::size_t j = 0; j < n; ++j)
                out[aj + j] = detail::minus_i *
                              ((params_.delta_o + res_.detuning(j) - shift_) * a[j] +
                               pair_sum_[j]);
            return;
        }

        const std::size_t a0 = basis_.atom_only();
        const std::size_t b0 = basis_.defect_only();
        const std::size_t bj = basis_.ground_single();
        const double gd = params_.g_d;
        const double dd = params_.delta_d;
        cplx single_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double dj = res_.detuning(j);
            const cplx b = psi[bj + j];
            single_sum += g[j] * b;
            out[bj + j] = detail::minus_i * ((dj + dd) * b + g[j] * psi[a0] + gd * a[j]);
            out[aj + j] = detail::minus_i *
                          ((params_.delta_o + dj - shift_) * a[j] + gd * b + pair_sum_[j]);
        }
        out[a0] = detail::minus_i *
                  ((params_.delta_o + dd - shift_) * psi[a0] +
                   detail::sqrt2 * gd * psi[b0] + single_sum);
        out[b0] = detail::minus_i * (2.0 * dd * psi[b0] + detail::sqrt2 * gd * psi[a0]);
    }

private:
    SystemParams params_;
    const DiscretizedReservoir& res_;
    const ExcitationBasis& basis_;
    double shift_ = 0.0;
    mutable std::vector<cplx> pair_sum_;
};

inline StateVector rhs_one_excitation(const SystemParams& params,
                                      const DiscretizedReservoir& res,
                                      const ExcitationBasis& basis,
                                      const StateVector& psi) {
    StateVector out(psi.size());
    OneExcitationGenerator(params, res, basis).apply(psi.view(), out.view());
    return out;
}

inline StateVector rhs_two_excitation(const SystemParams& params,
                                      const DiscretizedReservoir& res,
                                      const ExcitationBasis& basis,
                                      const StateVector& psi) {
    StateVector out(psi.size());
    TwoExcitationGenerator(params, res, basis).apply(psi.view(), out.view());
    return out;
}

/// Classical fixed-step RK4. `observer` maps the current amplitudes to an
/// ObservableRecord and is called on every sample (t = 0, every
/// sample_stride steps, and the final step).
template <Generator G, class Observer>
Trajectory propagate(const G& gen, StateVector psi0,
                     const PropagationConfig& cfg, Observer&& observer) {
    if (!(cfg.dt > 0.0)) throw ConfigError("propagate: dt must be positive");
    if (!(cfg.t_max >= 0.0)) throw ConfigError("propagate: t_max must be nonnegative");
    if (cfg.sample_stride < 1) throw ConfigError("propagate: sample_stride must be >= 1");
    if (psi0.size() != gen.dimension())
        throw ShapeError("propagate: initial state does not match the generator");
    const double phase_step = cfg.dt * gen.max_frequency();
    if (phase_step > cfg.max_phase_step) {
        std::ostringstream msg;
        msg << "propagate: dt = " << cfg.dt << " does not resolve the fastest frequency "
            << gen.max_frequency() << " (dt * omega_max = " << phase_step << " > "
            << cfg.max_phase_step << "); use dt <= " << cfg.max_phase_step / gen.max_frequency();
        throw ConfigError(msg.str());
    }

    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.dt));
    const std::size_t dim = psi0.size();
    std::vector<cplx> y = std::move(psi0.amplitudes);
    std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    const double h = cfg.dt;
    const double norm0 = norm_sq(y);

    Trajectory traj;
    auto sample = [&](std::size_t step) {
        const double nrm = norm_sq(y);
        if (!std::isfinite(nrm))
            throw NumericalError("propagate: non-finite amplitude at t = " +
                                 std::to_string(step * h));
        if (std::abs(nrm - norm0) > cfg.norm_tolerance) {
            std::ostringstream msg;
            msg << "propagate: norm drift " << std::abs(nrm - norm0) << " at t = " << step * h
                << " exceeds " << cfg.norm_tolerance << "; reduce dt";
            throw NumericalError(msg.str());
        }
        traj.times.push_back(static_cast<double>(step) * h);
        traj.observables.push_back(observer(std::span<const cplx>(y)));
        if (cfg.store_full_state) traj.states.emplace_back(y);
    };

    sample(0);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        gen.apply(y, k1);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        gen.apply(tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        gen.apply(tmp, k3);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
        gen.apply(tmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            y[i] += (h / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        if (step % cfg.sample_stride == 0 || step == n_steps) sample(step);
    }
    traj.final_state = StateVector(std::move(y));
    return traj;
}

template <Generator G>
Trajectory propagate(const G& gen, StateVector psi0, const PropagationConfig& cfg) {
    return propagate(gen, std::move(psi0), cfg,
                     [](std::span<const cplx> psi) {
                         ObservableRecord r;
                         r.norm_sq = norm_sq(psi);
                         return r;
                     });
}

}  // namespace pbgsim
