#include "hent/filter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hent/dephasing.hpp"
#include "hent/entanglement.hpp"
#include "hent/error.hpp"
#include "hent/quadrature.hpp"

namespace hent {

namespace {

using std::numbers::pi;

double sinc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double sq(double x) { return x * x; }

// Below this w*t the closed forms lose all relative accuracy to
// cancellation; the segment-wise form is mathematically identical there.
constexpr double kSmallPhase = 1e-2;

}  // namespace

double filter_free(double omega, double t) { return 4.0 * sq(std::sin(0.5 * omega * t)); }

double filter_free_over_omega2(double omega, double t) { return sq(t * sinc(0.5 * omega * t)); }

double filter_echo(double omega, double t, double t_bar) {
    if (t_bar < 0.0 || t_bar > t) throw std::invalid_argument("filter_echo: requires 0 <= t_bar <= t");
    const double a = std::sin(0.5 * omega * t_bar);
    const double b = std::sin(0.5 * omega * (t - t_bar));
    return 4.0 * (a * a + b * b - 2.0 * std::cos(0.5 * omega * t) * a * b);
}

double filter_pdd(double omega, double t, double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("filter_pdd: spacing must be positive");
    if (t < 0.0) throw std::invalid_argument("filter_pdd: t must be non-negative");
    const double ratio = t / spacing;
    const auto n = static_cast<std::size_t>(std::floor(ratio + 1e-12 * std::max(1.0, ratio)));
    Complex sum = 0.0;
    double sign = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        sign = -sign;
        sum += sign * std::polar(1.0, omega * static_cast<double>(k) * spacing);
    }
    // Middle term carries (-1)^(n+1): the toggling function after n pulses
    // has sign (-1)^n and enters the boundary term with a minus.
    const double end_sign = (n % 2 == 0) ? -1.0 : 1.0;
    const Complex total = 1.0 + end_sign * std::polar(1.0, omega * t) + 2.0 * sum;
    return std::norm(total);
}

double filter_numeric(const PulseProtocol& p, double omega, double t) {
    Complex acc = 0.0;
    for (const auto& s : toggle_segments(p, t))
        acc += static_cast<double>(s.sign) * (std::polar(1.0, omega * s.end) - std::polar(1.0, omega * s.begin));
    return std::norm(acc);
}

double filter_numeric_over_omega2(const PulseProtocol& p, double omega, double t) {
    // int_a^b e^{i w s} ds = (b - a) e^{i w (a+b)/2} sinc(w (b - a) / 2)
    Complex acc = 0.0;
    for (const auto& s : toggle_segments(p, t)) {
        const double len = s.end - s.begin;
        acc += static_cast<double>(s.sign) * len * sinc(0.5 * omega * len) *
               std::polar(1.0, 0.5 * omega * (s.begin + s.end));
    }
    return std::norm(acc);
}

double FilterSpec::value(double omega, double t) const {
    if (mode == FilterMode::NumericToggling) return filter_numeric(protocol, omega, t);
    switch (protocol.kind) {
        case PulseProtocol::Kind::Free: return filter_free(omega, t);
        case PulseProtocol::Kind::Echo:
            return t < protocol.interval ? filter_free(omega, t) : filter_echo(omega, t, protocol.interval);
        case PulseProtocol::Kind::PDD: return filter_pdd(omega, t, protocol.interval);
    }
    return 0.0;
}

double FilterSpec::over_omega2(double omega, double t) const {
    if (mode == FilterMode::NumericToggling || std::abs(omega) * t < kSmallPhase)
        return filter_numeric_over_omega2(protocol, omega, t);
    if (protocol.kind == PulseProtocol::Kind::Free) return filter_free_over_omega2(omega, t);
    return value(omega, t) / (omega * omega);
}

double phase_variance_spectral(const NoiseModel& noise, const FilterSpec& filter, double t,
                               const QuadratureOptions& opts) {
    noise.validate();
    if (noise.kind != NoiseKind::OrnsteinUhlenbeck)
        throw std::invalid_argument("phase_variance_spectral: requires Ornstein-Uhlenbeck noise");
    if (t < 0.0) throw std::invalid_argument("phase_variance_spectral: t must be non-negative");
    if (t == 0.0) return 0.0;

    std::vector<double> scales = {1.0 / noise.tau, 1.0 / t};
    if (filter.protocol.kind != PulseProtocol::Kind::Free) scales.push_back(1.0 / filter.protocol.interval);
    const double w_max = opts.cutoff_factor * *std::max_element(scales.begin(), scales.end());
    const double w_floor = 1e-6 * *std::min_element(scales.begin(), scales.end());

    auto integrand = [&](double w) { return power_spectrum(noise, w) * filter.over_omega2(w, t); };

    // Panels: a doubling ladder from w_floor up to the oscillation scale,
    // then half-periods of the fastest filter oscillation (period 2 pi / t).
    const double h = pi / t;
    std::vector<double> edges;
    for (double w = w_floor; w < std::min(h, w_max); w *= 2.0) edges.push_back(w);
    for (double w = h; w < w_max; w += h) edges.push_back(w);
    edges.push_back(w_max);
    const double corner = 1.0 / noise.tau;
    if (corner > w_floor && corner < w_max) edges.push_back(corner);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // Exponent is half the phase variance, and <phi^2> = (1/pi) int_0^inf.
    const double tol = 2.0 * pi * opts.abs_tol;
    const double main = integrate_gk15(integrand, edges, 0.75 * tol, opts.max_intervals).value;

    // [0, w_floor]: F / w^2 is flat there, equal to (int y)^2.
    const double dc = filter.over_omega2(0.0, t);
    const double low = w_floor * power_spectrum(noise, 0.0) * dc;

    // [w_max, inf) mapped onto (0, 1] by w = w_max / u.
    auto tail_integrand = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double w = w_max / u;
        return integrand(w) * w_max / (u * u);
    };
    std::vector<double> tail_edges = {0.0};
    for (double u = 1.0 / 64.0; u < 1.0; u *= 2.0) tail_edges.push_back(u);
    tail_edges.push_back(1.0);
    const double tail = integrate_gk15(tail_integrand, tail_edges, 0.25 * tol, opts.max_intervals).value;

    return (low + main + tail) / pi;
}

double concurrence_spectral(const NoiseModel& noise, const PulseProtocol& p, double t,
                            const QuadratureOptions& opts, FilterMode mode) {
    const double variance = phase_variance_spectral(noise, FilterSpec{p, mode}, t, opts);
    return std::clamp(std::exp(-0.5 * variance), 0.0, 1.0);
}

double concurrence_static(double sigma, const PulseProtocol& p, double t) {
    if (!(sigma > 0.0)) throw std::invalid_argument("concurrence_static: sigma must be positive");
    double area = 0.0;
    switch (p.kind) {
        case PulseProtocol::Kind::Free: area = t; break;
        case PulseProtocol::Kind::Echo: area = t <= p.interval ? t : t - 2.0 * p.interval; break;
        case PulseProtocol::Kind::PDD: area = toggling_integral(p, t); break;
    }
    return std::exp(-0.5 * sigma * sigma * area * area);
}

EntanglementSeries analytic_series(const NoiseModel& noise, const PulseProtocol& p, const TimeGrid& grid,
                                   const QuadratureOptions& opts, unsigned threads) {
    noise.validate();
    const std::size_t n = grid.size();
    std::vector<double> conc(n, 1.0);

    auto eval = [&](std::size_t i) {
        const double t = grid.at(i);
        conc[i] = noise.kind == NoiseKind::Static ? concurrence_static(noise.sigma, p, t)
                                                  : concurrence_spectral(noise, p, t, opts);
    };

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                eval(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
            }
        }
    };
    const unsigned workers = std::min<std::size_t>(worker_count(threads), n);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    EntanglementSeries series;
    series.x_label = "sigma*t";
    series.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid.at(i);
        series.push_back(t, noise.sigma * t, conc[i], eof_from_concurrence(conc[i]), 1.0);
    }
    return series;
}

}  // namespace hent
