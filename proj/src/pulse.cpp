#include "hent/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hent {

namespace {

double slack(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

}  // namespace

PulseProtocol PulseProtocol::echo(double t_bar) {
    if (!(t_bar > 0.0) || !std::isfinite(t_bar)) throw std::invalid_argument("echo: t_bar must be positive");
    return {Kind::Echo, t_bar};
}

PulseProtocol PulseProtocol::pdd(double spacing) {
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw std::invalid_argument("pdd: pulse spacing must be positive");
    return {Kind::PDD, spacing};
}

const char* to_string(PulseProtocol::Kind kind) {
    switch (kind) {
        case PulseProtocol::Kind::Free: return "free";
        case PulseProtocol::Kind::Echo: return "echo";
        case PulseProtocol::Kind::PDD: return "pdd";
    }
    return "?";
}

std::vector<double> pulse_times(const PulseProtocol& p, double horizon) {
    std::vector<double> out;
    switch (p.kind) {
        case PulseProtocol::Kind::Free: break;
        case PulseProtocol::Kind::Echo:
            if (p.interval < horizon) out.push_back(p.interval);
            break;
        case PulseProtocol::Kind::PDD:
            for (std::size_t k = 1;; ++k) {
                const double tk = static_cast<double>(k) * p.interval;
                if (tk >= horizon) break;
                out.push_back(tk);
            }
            break;
    }
    return out;
}

std::size_t pulses_up_to(const PulseProtocol& p, double t) {
    if (t <= 0.0) return 0;
    switch (p.kind) {
        case PulseProtocol::Kind::Free: return 0;
        case PulseProtocol::Kind::Echo: return p.interval <= t + slack(t) ? 1 : 0;
        case PulseProtocol::Kind::PDD: {
            const double x = t / p.interval;
            return static_cast<std::size_t>(std::floor(x + 1e-12 * std::max(1.0, x)));
        }
    }
    return 0;
}

int toggling(const PulseProtocol& p, double t) { return pulses_up_to(p, t) % 2 == 0 ? 1 : -1; }

std::vector<ToggleSegment> toggle_segments(const PulseProtocol& p, double t) {
    std::vector<ToggleSegment> out;
    if (t <= 0.0) return out;
    double start = 0.0;
    int sign = 1;
    for (double tp : pulse_times(p, t)) {
        out.push_back({start, tp, sign});
        start = tp;
        sign = -sign;
    }
    out.push_back({start, t, sign});
    return out;
}

double toggling_integral(const PulseProtocol& p, double t) {
    double total = 0.0;
    for (const auto& s : toggle_segments(p, t)) total += s.sign * (s.end - s.begin);
    return total;
}

ComplexMatrix pulse_unitary() {
    const Complex mi(0.0, -1.0);
    return {{0.0, mi}, {mi, 0.0}};
}

}  // namespace hent
