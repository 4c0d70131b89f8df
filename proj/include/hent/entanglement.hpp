#pragma once

// Two-qubit entanglement quantities: concurrence (pure and Wootters mixed),
// entanglement of formation, entropy of entanglement, and the average and
// hidden entanglement of a pure-state ensemble.

#include <vector>

#include "hent/linalg.hpp"

namespace hent {

/// Binary entropy in bits with h(0) = h(1) = 0.
double binary_entropy(double x);

double concurrence_pure(const StateVector& psi);

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), where l_k are the
/// singular values of sqrt(rho) * sqrt(rho~) with
/// rho~ = (sy (x) sy) rho* (sy (x) sy).
double concurrence_mixed(const DensityMatrix& rho);

/// h((1 + sqrt(1 - c^2)) / 2). Inputs within 1e-9 of [0, 1] are clamped;
/// anything further out throws std::domain_error.
double eof_from_concurrence(double c);

/// Von Neumann entropy of the reduced state of qubit A.
double entropy_of_entanglement(const StateVector& psi);

struct EnsembleMember {
    double probability;
    StateVector state;
};

/// Physical decomposition {(p_i, |psi_i>)} of a two-qubit state.
/// Zero-probability members are accepted and carry no weight.
class WeightedEnsemble {
public:
    /// Throws std::invalid_argument unless every state has dim 4, every
    /// p_i is in [0, 1] and the weights sum to 1 within 1e-9.
    explicit WeightedEnsemble(std::vector<EnsembleMember> members);

    const std::vector<EnsembleMember>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }

    DensityMatrix density_matrix() const;

private:
    std::vector<EnsembleMember> members_;
};

double average_entanglement(const WeightedEnsemble& ensemble);

struct EntanglementReport {
    double concurrence;  // of the ensemble-averaged state
    double eof;          // bits
    double e_av;         // bits
    double e_hidden;     // e_av - eof, bits
};

/// E_h = E_av - E_f(rho), with rho the ensemble-averaged density matrix.
EntanglementReport hidden_entanglement(const WeightedEnsemble& ensemble);

}  // namespace hent
