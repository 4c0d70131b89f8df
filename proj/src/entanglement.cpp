#include "hent/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hent {

namespace {

constexpr double kEntropyEdge = 1e-15;
constexpr double kConcurrenceSlack = 1e-9;

void require_two_qubits(std::size_t dim, const char* op) {
    if (dim != 4) {
        throw std::invalid_argument(std::string(op) + ": expected a two-qubit (dim 4) input, got dim " +
                                    std::to_string(dim));
    }
}

// sigma_y (x) sigma_y is real: anti-diagonal (-1, 1, 1, -1).
ComplexMatrix spin_flip(const ComplexMatrix& rho) {
    static const double sign[4] = {-1.0, 1.0, 1.0, -1.0};
    ComplexMatrix out(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            out(i, j) = sign[i] * sign[j] * std::conj(rho(3 - i, 3 - j));
    return out;
}

}  // namespace

double binary_entropy(double x) {
    if (x <= kEntropyEdge || x >= 1.0 - kEntropyEdge) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double concurrence_pure(const StateVector& psi) {
    require_two_qubits(psi.dim(), "concurrence_pure");
    return std::min(1.0, 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]));
}

double concurrence_mixed(const DensityMatrix& rho) {
    require_two_qubits(rho.dim(), "concurrence_mixed");
    // sqrt(rho~) = (sy sy) sqrt(rho)* (sy sy), so M = sqrt(rho) sqrt(rho~)
    // has singular values l_k. They are read off as the top half of the
    // spectrum of the Hermitian dilation [[0, M], [M^dagger, 0]], which
    // avoids square-rooting eigenvalues that are zero up to rounding.
    const ComplexMatrix root = psd_sqrt(rho);
    const ComplexMatrix m = root * spin_flip(root);

    ComplexMatrix dilation(8);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            dilation(i, 4 + j) = m(i, j);
            dilation(4 + j, i) = std::conj(m(i, j));
        }
    const auto eig = hermitian_eigen(dilation);
    const double c = eig.values[0] - eig.values[1] - eig.values[2] - eig.values[3];
    return std::clamp(c, 0.0, 1.0);
}

double eof_from_concurrence(double c) {
    if (!(c >= -kConcurrenceSlack && c <= 1.0 + kConcurrenceSlack)) {
        throw std::domain_error("eof_from_concurrence: concurrence " + std::to_string(c) +
                                " outside [0, 1]");
    }
    c = std::clamp(c, 0.0, 1.0);
    return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

double entropy_of_entanglement(const StateVector& psi) {
    require_two_qubits(psi.dim(), "entropy_of_entanglement");
    static const std::size_t dims[] = {2, 2};
    return von_neumann_entropy(partial_trace(DensityMatrix::pure(psi), 0, dims));
}

WeightedEnsemble::WeightedEnsemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("WeightedEnsemble: no members");
    double total = 0.0;
    for (const auto& m : members_) {
        require_two_qubits(m.state.dim(), "WeightedEnsemble");
        if (!(m.probability >= 0.0 && m.probability <= 1.0))
            throw std::invalid_argument("WeightedEnsemble: probability outside [0, 1]");
        total += m.probability;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("WeightedEnsemble: probabilities sum to " + std::to_string(total));
}

DensityMatrix WeightedEnsemble::density_matrix() const {
    ComplexMatrix rho(4);
    for (const auto& m : members_) {
        if (m.probability == 0.0) continue;
        rho += Complex(m.probability) * m.state.projector();
    }
    return DensityMatrix(rho.hermitian_part());
}

double average_entanglement(const WeightedEnsemble& ensemble) {
    double e = 0.0;
    for (const auto& m : ensemble.members()) {
        if (m.probability == 0.0) continue;
        e += m.probability * entropy_of_entanglement(m.state);
    }
    return std::clamp(e, 0.0, 1.0);
}

EntanglementReport hidden_entanglement(const WeightedEnsemble& ensemble) {
    EntanglementReport r{};
    r.concurrence = concurrence_mixed(ensemble.density_matrix());
    r.eof = eof_from_concurrence(r.concurrence);
    r.e_av = average_entanglement(ensemble);
    r.e_hidden = r.e_av - r.eof;
    return r;
}

}  // namespace hent
