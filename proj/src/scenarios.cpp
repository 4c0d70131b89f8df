#include "hent/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace hent {

void RandomFieldScenario::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("RandomFieldScenario: omega must be positive");
}

WeightedEnsemble random_field_ensemble(const RandomFieldScenario& s, double t) {
    s.validate();
    if (t < 0.0) throw std::invalid_argument("random_field_ensemble: t must be non-negative");
    const ComplexMatrix id = ComplexMatrix::identity(2);
    const StateVector phi = bell::phi_plus();
    const ComplexMatrix ux = tensor_product(spin_rotation(1.0, 0.0, 0.0, s.omega * t), id);
    const ComplexMatrix uz = tensor_product(spin_rotation(0.0, 0.0, 1.0, s.omega * t), id);
    return WeightedEnsemble({{0.5, apply(ux, phi)}, {0.5, apply(uz, phi)}});
}

EntanglementSeries random_field_series(const RandomFieldScenario& s) {
    s.validate();
    EntanglementSeries series;
    series.x_label = "omega*t";
    series.reserve(s.grid.size());
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        const double t = s.grid.at(i);
        const auto r = hidden_entanglement(random_field_ensemble(s, t));
        series.push_back(t, s.omega * t, r.concurrence, r.eof, r.e_av);
    }
    return series;
}

void JCScenario::validate() const {
    if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("JCScenario: g must be positive");
}

StateVector jc_state(const JCScenario& s, double t) {
    s.validate();
    if (t < 0.0) throw std::invalid_argument("jc_state: t must be non-negative");
    const double c = std::cos(0.5 * s.g * t);
    const double sn = std::sin(0.5 * s.g * t);
    const double r = 1.0 / std::sqrt(2.0);
    // Index = 4 a + 2 b + o.
    std::vector<Complex> amps(8);
    amps[0b000] = r;
    amps[0b110] = r * c;
    amps[0b011] = Complex(0.0, -r * sn);
    return StateVector::normalized(std::move(amps));
}

WeightedEnsemble jc_ensemble(const JCScenario& s, double t) {
    s.validate();
    if (t < 0.0) throw std::invalid_argument("jc_ensemble: t must be non-negative");
    const double c = std::cos(0.5 * s.g * t);
    const double sn = std::sin(0.5 * s.g * t);
    const double p0 = 0.5 * (1.0 + c * c);
    const double p1 = 0.5 * sn * sn;
    std::vector<EnsembleMember> members;
    if (p0 >= 1e-12) {
        const double norm = 1.0 / std::sqrt(2.0 * p0);
        members.push_back({p0, StateVector::normalized({norm, 0.0, 0.0, norm * c})});
    }
    if (p1 >= 1e-12) members.push_back({p1, StateVector::basis(4, 0b01)});
    return WeightedEnsemble(std::move(members));
}

double jc_f(double x) { return eof_from_concurrence(x); }

JCMeasures jc_measures(const JCScenario& s) {
    s.validate();
    static const std::size_t dims[] = {2, 2, 2};
    static const std::size_t keep_ab[] = {0, 1};

    JCMeasures out;
    out.series.x_label = "g*t";
    out.series.reserve(s.grid.size());
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        const double t = s.grid.at(i);
        const double c = std::cos(0.5 * s.g * t);
        const double eta = c * c;
        const double root = std::sqrt(eta);
        const double ef = jc_f(root);
        const double eav = 0.5 * (1.0 + eta) * jc_f(2.0 * root / (1.0 + eta));
        out.series.push_back(t, s.g * t, root, ef, eav);

        const DensityMatrix rho_ab = partial_trace(DensityMatrix::pure(jc_state(s, t)), keep_ab, dims);
        out.e_f_from_state.push_back(eof_from_concurrence(concurrence_mixed(rho_ab)));

        const WeightedEnsemble ens = jc_ensemble(s, t);
        out.e_av_from_ensemble.push_back(average_entanglement(ens));
        out.e_f_from_ensemble.push_back(eof_from_concurrence(concurrence_mixed(ens.density_matrix())));
    }
    return out;
}

}  // namespace hent
