#pragma once

// Filter-function route to the dephased concurrence,
//   C(t) = exp(-1/2 int dw/2pi S(w) F(w, t) / w^2),
// plus the closed forms for quasistatic noise. This path is independent of
// the Monte Carlo engine and the two are used to validate each other.

#include <cstddef>

#include "hent/noise.hpp"
#include "hent/pulse.hpp"
#include "hent/series.hpp"

namespace hent {

/// 4 sin^2(w t / 2).
double filter_free(double omega, double t);
/// F_free / w^2 = t^2 sinc^2(w t / 2), finite at w = 0.
double filter_free_over_omega2(double omega, double t);

/// Hahn echo with one pulse at t_bar. Throws std::invalid_argument if
/// t_bar > t or t_bar < 0.
double filter_echo(double omega, double t, double t_bar);

/// Periodic decoupling, pulses at k * spacing:
///   |1 + (-1)^(n+1) e^{i w t} + 2 sum_{k=1}^{n} (-1)^k e^{i w k spacing}|^2,
/// n = floor(t / spacing).
double filter_pdd(double omega, double t, double spacing);

/// w^2 |int_0^t y(t') e^{i w t'} dt'|^2, evaluated exactly on each
/// constant-sign piece of the toggling function.
double filter_numeric(const PulseProtocol& p, double omega, double t);
/// |int_0^t y(t') e^{i w t'} dt'|^2, i.e. filter_numeric / w^2 without the
/// removable singularity.
double filter_numeric_over_omega2(const PulseProtocol& p, double omega, double t);

enum class FilterMode { ClosedForm, NumericToggling };

struct FilterSpec {
    PulseProtocol protocol;
    FilterMode mode = FilterMode::ClosedForm;

    /// F(w, t). For an echo evaluated before its pulse (t < t_bar) the free
    /// filter applies.
    double value(double omega, double t) const;
    /// F / w^2 for w > 0; (int_0^t y)^2 at w = 0.
    double over_omega2(double omega, double t) const;
};

struct QuadratureOptions {
    /// w_max = cutoff_factor * max(1/tau, 1/t, 1/pulse interval).
    double cutoff_factor = 100.0;
    /// Absolute tolerance on the exponent (1/2) int dw/2pi S F / w^2.
    double abs_tol = 1e-9;
    std::size_t max_intervals = 200000;
};

/// Phase variance <phi^2>(t) = int_{-inf}^{inf} dw/2pi S(w) F(w, t) / w^2
/// for Ornstein-Uhlenbeck noise. Throws NumericalError on quadrature
/// non-convergence and std::invalid_argument for static noise.
double phase_variance_spectral(const NoiseModel& noise, const FilterSpec& filter, double t,
                               const QuadratureOptions& opts = {});

double concurrence_spectral(const NoiseModel& noise, const PulseProtocol& p, double t,
                            const QuadratureOptions& opts = {},
                            FilterMode mode = FilterMode::ClosedForm);

/// Quasistatic Gaussian noise: exp(-sigma^2 (int_0^t y)^2 / 2). For free and
/// echo evolution these are the piecewise closed forms; echo at t = 2 t_bar
/// returns exactly 1.
double concurrence_static(double sigma, const PulseProtocol& p, double t);

/// Concurrence, E_f, E_av (= 1 for a Bell input) and E_h on a grid, using
/// concurrence_static or concurrence_spectral depending on the noise kind.
EntanglementSeries analytic_series(const NoiseModel& noise, const PulseProtocol& p, const TimeGrid& grid,
                                   const QuadratureOptions& opts = {}, unsigned threads = 0);

}  // namespace hent
