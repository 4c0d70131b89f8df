#pragma once

// Classical dephasing noise: quasistatic Gaussian and Ornstein-Uhlenbeck
// processes, sampled from a counter-based generator so that a trajectory is
// a pure function of (seed, grid).

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hent {

/// Uniform grid t_i = t_max * i / (n - 1), i = 0 .. n-1.
class TimeGrid {
public:
    TimeGrid() = default;
    /// Throws std::invalid_argument unless t_max > 0 and points >= 2.
    TimeGrid(double t_max, std::size_t points);

    std::size_t size() const { return points_; }
    double t_max() const { return t_max_; }
    double step() const { return t_max_ / static_cast<double>(points_ - 1); }
    double at(std::size_t i) const {
        return t_max_ * static_cast<double>(i) / static_cast<double>(points_ - 1);
    }

    /// Index of the grid point equal to t, or -1 if t is not on the grid
    /// (relative tolerance 1e-9 of a step).
    long index_of(double t) const;

private:
    double t_max_ = 1.0;
    std::size_t points_ = 2;
};

enum class NoiseKind { Static, OrnsteinUhlenbeck };

struct NoiseModel {
    NoiseKind kind = NoiseKind::Static;
    double sigma = 1.0;  // standard deviation of epsilon (angular frequency)
    double tau = 0.0;    // correlation time, OU only

    static NoiseModel static_gaussian(double sigma);
    static NoiseModel ornstein_uhlenbeck(double sigma, double tau);

    /// Throws std::invalid_argument if sigma <= 0, or tau <= 0 for OU.
    void validate() const;
};

struct NoiseTrajectory {
    TimeGrid grid;
    std::vector<double> values;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Key for stream `index` under `master_seed`. Trajectory k of a run is
/// sampled with stream_key(master_seed, k).
std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t index);

/// Counter-based generator: draw n is mix64(key + n * golden) with no other
/// state, so streams for different keys can be consumed in any order.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(mix64(key)) {}

    std::uint64_t next_u64();
    /// Uniform on (0, 1].
    double uniform();
    /// Standard normal via Box-Muller; the second variate of each pair is
    /// returned by the following call.
    double normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

NoiseTrajectory sample_static(const NoiseModel& model, std::uint64_t seed, const TimeGrid& grid);
NoiseTrajectory sample_ou(const NoiseModel& model, std::uint64_t seed, const TimeGrid& grid);
/// Dispatches on model.kind.
NoiseTrajectory sample(const NoiseModel& model, std::uint64_t seed, const TimeGrid& grid);

/// In-place variants used by the Monte Carlo loop; `out` must have
/// grid.size() entries.
void sample_into(const NoiseModel& model, std::uint64_t seed, const TimeGrid& grid,
                 std::vector<double>& out);

/// Lorentzian S(w) = 2 sigma^2 tau / (1 + w^2 tau^2). Static noise has a
/// delta spectrum and is rejected with std::invalid_argument.
double power_spectrum(const NoiseModel& model, double omega);

}  // namespace hent
