#pragma once

// Exact single-excitation decay at the band edge, from the memory-kernel
// equation
//
//   da/dt = -i Delta_o a(t) - int_0^t K(t - s) a(s) ds,
//   K(tau) = int_{w_e}^inf dw |kappa_w|^2 rho(w) e^{-i (w - w_e) tau}
//          = C e^{-i pi/4} / sqrt(pi tau).
//
// This path shares no code with the discretized reservoir.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "pbgsim/errors.hpp"
#include "pbgsim/statespace.hpp"

namespace pbgsim {

struct KernelSpec {
    double coupling_C = 1.0;
    double delta_o = 0.0;
};

inline cplx memory_kernel(const KernelSpec& spec, double tau) {
    if (!(tau > 0.0)) throw DomainError("memory_kernel: tau must be positive");
    return spec.coupling_C * std::polar(1.0, -std::numbers::pi / 4.0) /
           std::sqrt(std::numbers::pi * tau);
}

/// Product integration: a(t) is piecewise linear between grid points and the
/// tau^(-1/2) kernel is integrated exactly against it on every panel. Time
/// stepping is the implicit trapezoidal rule, solved in closed form because
/// the equation is linear.
inline std::vector<cplx> solve_decay_exact(const KernelSpec& spec,
                                           std::span<const double> t_grid) {
    if (t_grid.empty()) throw DomainError("solve_decay_exact: empty grid");
    if (t_grid[0] != 0.0) throw DomainError("solve_decay_exact: grid must start at 0");
    const std::size_t n = t_grid.size() - 1;
    std::vector<cplx> a(n + 1);
    a[0] = 1.0;
    if (n == 0) return a;

    const double h = t_grid[1] - t_grid[0];
    if (!(h > 0.0)) throw DomainError("solve_decay_exact: grid must increase");
    for (std::size_t i = 1; i <= n; ++i) {
        const double expected = static_cast<double>(i) * h;
        if (std::abs(t_grid[i] - expected) > 1e-9 * std::max(1.0, expected))
            throw DomainError("solve_decay_exact: grid must be uniform");
    }

    // With u = (tau - q h)/h on panel q:
    //   alpha_q = int_0^1 (q+u)^(-1/2) du,   beta_q = int_0^1 u (q+u)^(-1/2) du.
    std::vector<double> alpha(n + 1), beta(n + 1);
    for (std::size_t q = 0; q <= n; ++q) {
        const double x = static_cast<double>(q);
        const double s0 = std::sqrt(x), s1 = std::sqrt(x + 1.0);
        alpha[q] = 2.0 / (s1 + s0);
        beta[q] = (2.0 / 3.0) * s1 - (4.0 / 3.0) * x / (s1 + s0);
    }
    // Weight of a[m] in the history integral at t_n, as a function of q = n - m.
    std::vector<double> w(n + 1);
    w[0] = alpha[0] - beta[0];
    for (std::size_t q = 1; q <= n; ++q) w[q] = beta[q - 1] + alpha[q] - beta[q];

    // K(tau) = K(1) / sqrt(tau); the h^(1/2) comes from the panel moments.
    const cplx c = memory_kernel(spec, 1.0) * std::sqrt(h);
    const cplx rot{0.0, -spec.delta_o};
    const cplx self = c * w[0];
    const cplx denom = 1.0 - 0.5 * h * (rot - self);

    cplx f_prev = rot * a[0];
    for (std::size_t step = 1; step <= n; ++step) {
        // history without the a[step] term; a[0] carries beta[step-1] only
        cplx hist = beta[step - 1] * a[0];
        for (std::size_t q = 1; q < step; ++q) hist += w[q] * a[step - q];
        hist *= c;
        a[step] = (a[step - 1] + 0.5 * h * (f_prev - hist)) / denom;
        if (!std::isfinite(a[step].real()) || !std::isfinite(a[step].imag()))
            throw NumericalError("solve_decay_exact: non-finite amplitude");
        f_prev = (rot - self) * a[step] - hist;
    }
    return a;
}

inline std::vector<double> uniform_grid(double t_max, double h) {
    const auto n = static_cast<std::size_t>(std::llround(t_max / h));
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i) t[i] = static_cast<double>(i) * h;
    return t;
}

/// Sup-norm change of a(t) on the coarse grid when the step is halved.
inline double refinement_error(const KernelSpec& spec, double t_max, double h) {
    const auto coarse_t = uniform_grid(t_max, h);
    const auto fine_t = uniform_grid(t_max, 0.5 * h);
    const auto coarse = solve_decay_exact(spec, coarse_t);
    const auto fine = solve_decay_exact(spec, fine_t);
    double err = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i)
        err = std::max(err, std::abs(coarse[i] - fine[2 * i]));
    return err;
}

}  // namespace pbgsim
