#include "hent/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hent {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

TimeGrid::TimeGrid(double t_max, std::size_t points) : t_max_(t_max), points_(points) {
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw std::invalid_argument("TimeGrid: t_max must be positive and finite");
    if (points < 2) throw std::invalid_argument("TimeGrid: need at least 2 points");
}

long TimeGrid::index_of(double t) const {
    const double x = t / step();
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x))) return -1;
    if (r < 0.0 || r > static_cast<double>(points_ - 1)) return -1;
    return static_cast<long>(r);
}

NoiseModel NoiseModel::static_gaussian(double sigma) {
    NoiseModel m{NoiseKind::Static, sigma, 0.0};
    m.validate();
    return m;
}

NoiseModel NoiseModel::ornstein_uhlenbeck(double sigma, double tau) {
    NoiseModel m{NoiseKind::OrnsteinUhlenbeck, sigma, tau};
    m.validate();
    return m;
}

void NoiseModel::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("NoiseModel: sigma must be positive");
    if (kind == NoiseKind::OrnsteinUhlenbeck && (!(tau > 0.0) || !std::isfinite(tau)))
        throw std::invalid_argument("NoiseModel: tau must be positive for Ornstein-Uhlenbeck noise");
}

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(mix64(master_seed + kGolden) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

std::uint64_t CounterRng::next_u64() { return mix64(key_ + (++counter_) * kGolden); }

double CounterRng::uniform() {
    // 53 random bits mapped to (0, 1].
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

void sample_into(const NoiseModel& model, std::uint64_t seed, const TimeGrid& grid,
                 std::vector<double>& out) {
    model.validate();
    out.resize(grid.size());
    CounterRng rng(seed);
    double eps = model.sigma * rng.normal();
    out[0] = eps;
    if (model.kind == NoiseKind::Static) {
        for (std::size_t i = 1; i < out.size(); ++i) out[i] = eps;
        return;
    }
    // Exact OU transition over one grid step.
    const double decay = std::exp(-grid.step() / model.tau);
    const double kick = model.sigma * std::sqrt(-std::expm1(-2.0 * grid.step() / model.tau));
    for (std::size_t i = 1; i < out.size(); ++i) {
        eps = eps * decay + kick * rng.normal();
        out[i] = eps;
    }
}

NoiseTrajectory sample_static(const NoiseModel& model, std::uint64_t seed, const TimeGrid& grid) {
    if (model.kind != NoiseKind::Static) throw std::invalid_argument("sample_static: model is not static");
    NoiseTrajectory traj{grid, {}};
    sample_into(model, seed, grid, traj.values);
    return traj;
}

NoiseTrajectory sample_ou(const NoiseModel& model, std::uint64_t seed, const TimeGrid& grid) {
    if (model.kind != NoiseKind::OrnsteinUhlenbeck)
        throw std::invalid_argument("sample_ou: model is not Ornstein-Uhlenbeck");
    NoiseTrajectory traj{grid, {}};
    sample_into(model, seed, grid, traj.values);
    return traj;
}

NoiseTrajectory sample(const NoiseModel& model, std::uint64_t seed, const TimeGrid& grid) {
    NoiseTrajectory traj{grid, {}};
    sample_into(model, seed, grid, traj.values);
    return traj;
}

double power_spectrum(const NoiseModel& model, double omega) {
    if (model.kind != NoiseKind::OrnsteinUhlenbeck)
        throw std::invalid_argument("power_spectrum: static noise has a delta spectrum");
    const double wt = omega * model.tau;
    return 2.0 * model.sigma * model.sigma * model.tau / (1.0 + wt * wt);
}

}  // namespace hent
