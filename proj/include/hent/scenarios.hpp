#pragma once

// Two exactly solvable examples:
//  * random local fields: with probability 1/2 qubit A is rotated about x,
//    otherwise about z, at angular frequency omega;
//  * Jaynes-Cummings: qubit A exchanges its excitation with an oscillator
//    initially in vacuum, qubit B is idle. Monitoring the oscillator in
//    {|0>, |1>} unravels the A-B dynamics into a two-member ensemble.
//
// Tripartite ordering is A (x) B (x) O; the oscillator is truncated to
// {|0>, |1>}, which is exact for a single excitation.

#include <vector>

#include "hent/entanglement.hpp"
#include "hent/linalg.hpp"
#include "hent/noise.hpp"
#include "hent/series.hpp"

namespace hent {

struct RandomFieldScenario {
    double omega = 1.0;
    TimeGrid grid{4.0 * 3.14159265358979323846, 401};

    void validate() const;
};

/// {(1/2, (U_x(t) (x) 1)|phi+>), (1/2, (U_z(t) (x) 1)|phi+>)},
/// U_a(t) = exp(-i sigma_a omega t / 2).
WeightedEnsemble random_field_ensemble(const RandomFieldScenario& s, double t);
EntanglementSeries random_field_series(const RandomFieldScenario& s);

struct JCScenario {
    double g = 1.0;
    TimeGrid grid{2.0 * 3.14159265358979323846, 401};

    void validate() const;
};

/// (|000> + cos(gt/2)|110> - i sin(gt/2)|011>) / sqrt(2) over A, B, O.
StateVector jc_state(const JCScenario& s, double t);

/// Oscillator found in |0>: p0 = (1 + cos^2(gt/2)) / 2 with
/// (|00> + cos(gt/2)|11>) / sqrt(2 p0); found in |1>: p1 = sin^2(gt/2) / 2
/// with |01>. Members with probability below 1e-12 are dropped.
WeightedEnsemble jc_ensemble(const JCScenario& s, double t);

/// f(x) = h((1 + sqrt(1 - x^2)) / 2), i.e. E_f as a function of concurrence.
double jc_f(double x);

struct JCMeasures {
    /// Closed forms: concurrence sqrt(eta), E_f = f(sqrt(eta)),
    /// E_av = (1 + eta)/2 f(2 sqrt(eta) / (1 + eta)), e_hidden = E_av - E_f.
    EntanglementSeries series;
    /// E_f from Tr_O |psi><psi| through the Wootters concurrence.
    std::vector<double> e_f_from_state;
    /// E_av from the monitored ensemble.
    std::vector<double> e_av_from_ensemble;
    /// E_f of the ensemble-averaged density matrix.
    std::vector<double> e_f_from_ensemble;
};

JCMeasures jc_measures(const JCScenario& s);

}  // namespace hent
