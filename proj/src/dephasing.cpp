#include "hent/dephasing.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "hent/entanglement.hpp"

namespace hent {

namespace {

// Trajectories per reduction block. Fixed, so the summation order (and
// therefore every output bit) does not depend on the worker count.
constexpr std::size_t kBlock = 1024;

// Upper triangle of a 4x4 Hermitian matrix.
constexpr std::size_t kUpper = 10;
constexpr std::array<std::pair<std::size_t, std::size_t>, kUpper> kUpperIndex = {{
    {0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}};

std::vector<std::size_t> pulse_indices(const PulseProtocol& p, const TimeGrid& grid) {
    std::vector<std::size_t> out;
    for (double tp : pulse_times(p, grid.t_max())) {
        const long idx = grid.index_of(tp);
        if (idx < 0) {
            throw std::invalid_argument("pulse at t = " + format_number(tp) +
                                        " is not on the time grid (step " + format_number(grid.step()) +
                                        ")");
        }
        out.push_back(static_cast<std::size_t>(idx));
    }
    return out;
}

// Sign of y on grid interval (t_{i-1}, t_i), i >= 1, and the pulse count in
// (0, t_i] at each grid point.
struct ToggleTable {
    std::vector<int> interval_sign;
    std::vector<std::size_t> pulses;
};

ToggleTable toggle_table(const PulseProtocol& p, const TimeGrid& grid) {
    const auto idx = pulse_indices(p, grid);
    ToggleTable tt{std::vector<int>(grid.size(), 1), std::vector<std::size_t>(grid.size(), 0)};
    std::size_t next = 0, count = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // Sign on (t_{i-1}, t_i) reflects pulses at indices <= i-1.
        tt.interval_sign[i] = count % 2 == 0 ? 1 : -1;
        while (next < idx.size() && idx[next] == i) {
            ++count;
            ++next;
        }
        tt.pulses[i] = count;
    }
    return tt;
}

void phase_into(const std::vector<double>& eps, const TimeGrid& grid, const ToggleTable& tt,
                double omega_a, std::vector<double>& phi) {
    phi.resize(eps.size());
    const double dt = grid.step();
    phi[0] = 0.0;
    for (std::size_t i = 1; i < eps.size(); ++i)
        phi[i] = phi[i - 1] + tt.interval_sign[i] * (0.5 * (eps[i - 1] + eps[i]) - omega_a) * dt;
}

ComplexMatrix pulse_power(std::size_t n) {
    ComplexMatrix u = ComplexMatrix::identity(2);
    for (std::size_t k = 0; k < n % 4; ++k) u = pulse_unitary() * u;
    return u;
}

struct BlockSums {
    std::vector<Complex> rho;    // grid.size() * kUpper
    std::vector<double> e_av;    // grid.size()
    std::vector<Complex> phase;  // grid.size()
};

void accumulate_projector(Complex* acc, const std::array<Complex, 4>& a) {
    for (std::size_t k = 0; k < kUpper; ++k) {
        const auto [i, j] = kUpperIndex[k];
        acc[k] += a[i] * std::conj(a[j]);
    }
}

double member_entanglement(const std::array<Complex, 4>& a) {
    // Two-qubit identity E(psi) = E_f(C(psi)); cheaper than the reduced-state
    // entropy in the inner loop and equal to it to rounding.
    const double c = std::min(1.0, 2.0 * std::abs(a[0] * a[3] - a[1] * a[2]));
    return eof_from_concurrence(c);
}

// Toggling-frame path: accumulate projectors of Z(phi)|psi0>. The common
// deterministic factor ((-i sx)^n (x) U_B(t)) is applied to the average.
void run_block_scalar(const DephasingRun& cfg, const ToggleTable& tt, std::size_t first, std::size_t last,
                      BlockSums& out) {
    const std::size_t n = cfg.grid.size();
    std::vector<double> eps, phi;
    std::array<Complex, 4> psi0{};
    for (std::size_t j = 0; j < 4; ++j) psi0[j] = cfg.initial[j];

    for (std::size_t k = first; k < last; ++k) {
        sample_into(cfg.noise, stream_key(cfg.master_seed, k), cfg.grid, eps);
        phase_into(eps, cfg.grid, tt, cfg.omega_a, phi);
        for (std::size_t i = 0; i < n; ++i) {
            const Complex down = std::polar(1.0, -0.5 * phi[i]);  // A in |0>
            const Complex up = std::conj(down);                    // A in |1>
            const std::array<Complex, 4> a = {psi0[0] * down, psi0[1] * down, psi0[2] * up, psi0[3] * up};
            accumulate_projector(&out.rho[i * kUpper], a);
            out.e_av[i] += member_entanglement(a);
            out.phase[i] += down * down;
        }
    }
}

// Lab-frame path: explicit propagators per grid step, pulses applied as
// unitaries at their grid points.
void run_block_stepwise(const DephasingRun& cfg, const ToggleTable& tt, std::size_t first,
                        std::size_t last, BlockSums& out) {
    const std::size_t n = cfg.grid.size();
    const double dt = cfg.grid.step();
    const ComplexMatrix step_b = qubit_b_unitary(cfg.field_b, dt);
    const ComplexMatrix kick = tensor_product(pulse_unitary(), ComplexMatrix::identity(2));
    std::vector<double> eps, phi;

    for (std::size_t k = first; k < last; ++k) {
        sample_into(cfg.noise, stream_key(cfg.master_seed, k), cfg.grid, eps);
        phase_into(eps, cfg.grid, tt, cfg.omega_a, phi);
        StateVector psi = cfg.initial;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) {
                const double theta = (0.5 * (eps[i - 1] + eps[i]) - cfg.omega_a) * dt;
                const ComplexMatrix za = spin_rotation(0.0, 0.0, 1.0, theta);
                psi = apply(tensor_product(za, step_b), psi);
                for (std::size_t p = tt.pulses[i - 1]; p < tt.pulses[i]; ++p) psi = apply(kick, psi);
            }
            const std::array<Complex, 4> a = {psi[0], psi[1], psi[2], psi[3]};
            accumulate_projector(&out.rho[i * kUpper], a);
            out.e_av[i] += member_entanglement(a);
            out.phase[i] += std::polar(1.0, -phi[i]);
        }
    }
}

}  // namespace

ComplexMatrix qubit_b_unitary(const LocalField& field, double t) {
    const double norm = std::sqrt(field.x * field.x + field.y * field.y + field.z * field.z);
    if (norm == 0.0) return ComplexMatrix::identity(2);
    return spin_rotation(field.x, field.y, field.z, norm * t);
}

void DephasingRun::validate() const {
    noise.validate();
    if (n_traj == 0) throw std::invalid_argument("DephasingRun: n_traj must be at least 1");
    if (initial.dim() != 4) throw std::invalid_argument("DephasingRun: initial state must be two-qubit");
    (void)pulse_indices(protocol, grid);
}

std::vector<double> accumulate_phase(const NoiseTrajectory& traj, const PulseProtocol& p, double omega_a) {
    if (traj.values.size() != traj.grid.size())
        throw std::invalid_argument("accumulate_phase: trajectory length does not match its grid");
    std::vector<double> phi;
    phase_into(traj.values, traj.grid, toggle_table(p, traj.grid), omega_a, phi);
    return phi;
}

StateVector trajectory_state(const StateVector& initial, double phi, std::size_t pulses) {
    if (initial.dim() != 4) throw std::invalid_argument("trajectory_state: expected a two-qubit state");
    const Complex down = std::polar(1.0, -0.5 * phi);
    const Complex up = std::conj(down);
    StateVector psi = StateVector::normalized(
        {initial[0] * down, initial[1] * down, initial[2] * up, initial[3] * up});
    if (pulses % 4 != 0) psi = apply(tensor_product(pulse_power(pulses), ComplexMatrix::identity(2)), psi);
    return psi;
}

unsigned worker_count(unsigned requested) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HENT_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return std::max(1u, n);
}

DephasingResult run(const DephasingRun& cfg) {
    cfg.validate();
    const std::size_t n = cfg.grid.size();
    const ToggleTable tt = toggle_table(cfg.protocol, cfg.grid);

    const std::size_t n_blocks = (cfg.n_traj + kBlock - 1) / kBlock;
    std::vector<BlockSums> blocks(n_blocks);
    std::atomic<std::size_t> next_block{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            try {
                BlockSums& sums = blocks[b];
                sums.rho.assign(n * kUpper, Complex{});
                sums.e_av.assign(n, 0.0);
                sums.phase.assign(n, Complex{});
                const std::size_t first = b * kBlock, last = std::min(cfg.n_traj, first + kBlock);
                if (cfg.stepwise)
                    run_block_stepwise(cfg, tt, first, last, sums);
                else
                    run_block_scalar(cfg, tt, first, last, sums);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next_block.store(n_blocks);
                return;
            }
        }
    };

    const unsigned workers = std::min<std::size_t>(worker_count(cfg.threads), n_blocks);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    // Fixed-order reduction over blocks.
    std::vector<Complex> rho_sum(n * kUpper);
    std::vector<double> eav_sum(n, 0.0);
    std::vector<Complex> phase_sum(n);
    for (const auto& b : blocks) {
        for (std::size_t k = 0; k < rho_sum.size(); ++k) rho_sum[k] += b.rho[k];
        for (std::size_t i = 0; i < n; ++i) {
            eav_sum[i] += b.e_av[i];
            phase_sum[i] += b.phase[i];
        }
    }

    DephasingResult result;
    result.series.x_label = "sigma*t";
    result.series.reserve(n);
    result.densities.reserve(n);
    result.mean_phase_factor.reserve(n);
    const double inv_n = 1.0 / static_cast<double>(cfg.n_traj);

    for (std::size_t i = 0; i < n; ++i) {
        ComplexMatrix rho(4);
        for (std::size_t k = 0; k < kUpper; ++k) {
            const auto [r, c] = kUpperIndex[k];
            rho(r, c) = rho_sum[i * kUpper + k] * inv_n;
            rho(c, r) = std::conj(rho(r, c));
        }
        if (!cfg.stepwise) {
            const ComplexMatrix common =
                tensor_product(pulse_power(tt.pulses[i]), qubit_b_unitary(cfg.field_b, cfg.grid.at(i)));
            rho = (common * rho * common.adjoint()).hermitian_part();
        }
        DensityMatrix dm(rho);
        const double c = concurrence_mixed(dm);
        const double ef = eof_from_concurrence(c);
        const double eav = std::clamp(eav_sum[i] * inv_n, 0.0, 1.0);
        const double t = cfg.grid.at(i);
        result.series.push_back(t, cfg.noise.sigma * t, c, ef, eav);
        result.densities.push_back(std::move(dm));
        result.mean_phase_factor.push_back(phase_sum[i] * inv_n);
    }
    return result;
}

}  // namespace hent
