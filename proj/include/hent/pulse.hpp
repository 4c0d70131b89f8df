#pragma once

// Instantaneous pi-pulse protocols on qubit A and their +/-1 toggling
// functions.

#include <cstddef>
#include <vector>

#include "hent/linalg.hpp"

namespace hent {

struct PulseProtocol {
    enum class Kind { Free, Echo, PDD };

    Kind kind = Kind::Free;
    double interval = 0.0;  // echo time t_bar, or PDD spacing dt

    static PulseProtocol free() { return {}; }
    /// Throws std::invalid_argument unless t_bar > 0.
    static PulseProtocol echo(double t_bar);
    /// Throws std::invalid_argument unless spacing > 0.
    static PulseProtocol pdd(double spacing);
};

const char* to_string(PulseProtocol::Kind kind);

/// Pulse instants strictly below `horizon`, ascending.
std::vector<double> pulse_times(const PulseProtocol& p, double horizon);

/// Number of pulses in (0, t]. A pulse exactly at t counts (left-closed
/// sign convention), with a relative tolerance of 1e-12 on the comparison.
std::size_t pulses_up_to(const PulseProtocol& p, double t);

/// y(t) = (-1)^(pulses in (0, t]).
int toggling(const PulseProtocol& p, double t);

/// Exact value of int_0^t y(t') dt'.
double toggling_integral(const PulseProtocol& p, double t);

/// Constant-sign pieces of y on [0, t].
struct ToggleSegment {
    double begin;
    double end;
    int sign;
};
std::vector<ToggleSegment> toggle_segments(const PulseProtocol& p, double t);

/// exp(-i sigma_x pi / 2) = -i sigma_x.
ComplexMatrix pulse_unitary();

}  // namespace hent
