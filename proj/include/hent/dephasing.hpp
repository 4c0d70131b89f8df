#pragma once

// Trajectory Monte Carlo for two qubits when only qubit A dephases:
//   H_A(t) = [-Omega_A sz + eps(t) sz + V(t) sx] / 2,  H_B constant.
// Each noise realization leaves the pair in a pure state; the ensemble of
// those states gives rho(t), E_f, E_av and the hidden entanglement.

#include <cstdint>
#include <vector>

#include "hent/linalg.hpp"
#include "hent/noise.hpp"
#include "hent/pulse.hpp"
#include "hent/series.hpp"

namespace hent {

/// Constant local Hamiltonian on qubit B, H_B = (x sx + y sy + z sz) / 2.
struct LocalField {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// exp(-i H_B t).
ComplexMatrix qubit_b_unitary(const LocalField& field, double t);

struct DephasingRun {
    NoiseModel noise;
    PulseProtocol protocol;
    StateVector initial = bell::phi_plus();
    TimeGrid grid{8.0, 801};
    std::size_t n_traj = 100000;
    std::uint64_t master_seed = 0;
    double omega_a = 0.0;
    LocalField field_b;
    /// Cross-check path: propagate each trajectory step by step with 4x4
    /// propagators and explicit pulse unitaries instead of the
    /// toggling-frame phase.
    bool stepwise = false;
    /// 0 selects the default (hardware concurrency, capped by HENT_THREADS).
    unsigned threads = 0;

    /// Throws std::invalid_argument on n_traj == 0, a non-two-qubit initial
    /// state, or pulses that do not fall on grid points.
    void validate() const;
};

struct DephasingResult {
    EntanglementSeries series;
    std::vector<DensityMatrix> densities;  // lab-frame rho(t_i)
    std::vector<Complex> mean_phase_factor;  // <exp(-i phi(t_i))>
};

/// phi(t_i) = int_0^{t_i} y(t') (eps(t') - omega_a) dt' by the trapezoid rule,
/// with y taken constant on each grid interval. Throws std::invalid_argument
/// naming the first pulse time that is not a grid point.
std::vector<double> accumulate_phase(const NoiseTrajectory& traj, const PulseProtocol& p,
                                     double omega_a = 0.0);

/// (-i sx)^pulses Z(phi) on qubit A, Z(phi) = diag(e^{-i phi/2}, e^{i phi/2}).
StateVector trajectory_state(const StateVector& initial, double phi, std::size_t pulses = 0);

DephasingResult run(const DephasingRun& config);

/// Effective worker count for a requested value (0 = automatic). The
/// HENT_THREADS environment variable caps the result.
unsigned worker_count(unsigned requested);

}  // namespace hent
