#include "hent/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hent/error.hpp"

namespace hent {

namespace {

// Eigenvalues of a PSD matrix below this (relative to its largest) are
// indistinguishable from rounding in the Jacobi sweep and are dropped.
constexpr double kRankCut = 1e-14;
constexpr int kMaxSweeps = 100;

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) +
                                    ")");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) throw std::invalid_argument("ComplexMatrix: dimension must be positive");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
    if (dim_ == 0) throw std::invalid_argument("ComplexMatrix: dimension must be positive");
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) throw std::invalid_argument("ComplexMatrix: rows must be square");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out(*this);
    for (auto& z : out.data_) z = std::conj(z);
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs, "operator+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs, "operator-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    require_same_dim(lhs, rhs, "operator*");
    const std::size_t n = lhs.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw std::invalid_argument("StateVector: empty amplitude list");
    double norm2 = 0.0;
    for (const auto& a : amps_) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > kNormTol) {
        throw std::invalid_argument("StateVector: not unit norm (|psi|^2 = " +
                                    std::to_string(norm2) + ")");
    }
}

StateVector::StateVector(std::initializer_list<Complex> amplitudes)
    : StateVector(std::vector<Complex>(amplitudes)) {}

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
    double norm2 = 0.0;
    for (const auto& a : amplitudes) norm2 += std::norm(a);
    if (!(norm2 > 0.0)) throw std::invalid_argument("StateVector: cannot normalize zero vector");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : amplitudes) a *= inv;
    return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw std::invalid_argument("StateVector::basis: index out of range");
    std::vector<Complex> a(dim);
    a[index] = 1.0;
    return StateVector(std::move(a));
}

ComplexMatrix StateVector::projector() const {
    const std::size_t n = dim();
    ComplexMatrix p(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) = amps_[i] * std::conj(amps_[j]);
    return p;
}

Complex inner(const StateVector& bra, const StateVector& ket) {
    if (bra.dim() != ket.dim()) throw std::invalid_argument("inner: dimension mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < bra.dim(); ++i) s += std::conj(bra[i]) * ket[i];
    return s;
}

double overlap(const StateVector& a, const StateVector& b) { return std::abs(inner(a, b)); }

StateVector apply(const ComplexMatrix& op, const StateVector& psi) {
    if (op.dim() != psi.dim()) throw std::invalid_argument("apply: dimension mismatch");
    std::vector<Complex> out(psi.dim());
    for (std::size_t i = 0; i < psi.dim(); ++i)
        for (std::size_t j = 0; j < psi.dim(); ++j) out[i] += op(i, j) * psi[j];
    // Unitaries keep the norm to rounding; renormalize so the unit-norm
    // invariant does not drift over long products.
    return StateVector::normalized(std::move(out));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (!m_.is_hermitian(kHermitianTol))
        throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
    const Complex tr = m_.trace();
    if (std::abs(tr - 1.0) > kTraceTol)
        throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr.real()) + " != 1");
    const auto eig = hermitian_eigen(m_);
    if (eig.values.back() < -kPsdClampTol) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                    std::to_string(eig.values.back()));
    }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) { return DensityMatrix(psi.projector()); }

// ---------------------------------------------------------------------------
// Tensor products and partial trace

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
    return out;
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
    std::vector<Complex> out;
    out.reserve(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < b.dim(); ++k) out.push_back(a[i] * b[k]);
    return StateVector::normalized(std::move(out));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(tensor_product(a.matrix(), b.matrix()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep,
                            std::span<const std::size_t> dims) {
    if (dims.empty()) throw std::invalid_argument("partial_trace: empty factor list");
    const std::size_t total =
        std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (total != rho.dim()) {
        throw std::invalid_argument("partial_trace: factor dimensions multiply to " +
                                    std::to_string(total) + ", matrix has dim " +
                                    std::to_string(rho.dim()));
    }
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) {
        if (k >= dims.size()) throw std::invalid_argument("partial_trace: subsystem id out of range");
        kept[k] = true;
    }

    // Row-major strides; decompose every flat index into per-factor digits.
    const std::size_t nf = dims.size();
    std::vector<std::size_t> stride(nf, 1);
    for (std::size_t f = nf - 1; f > 0; --f) stride[f - 1] = stride[f] * dims[f];

    std::size_t kept_dim = 1;
    for (std::size_t f = 0; f < nf; ++f)
        if (kept[f]) kept_dim *= dims[f];

    auto split = [&](std::size_t flat, std::size_t& kept_index, std::size_t& traced_index) {
        kept_index = 0;
        traced_index = 0;
        for (std::size_t f = 0; f < nf; ++f) {
            const std::size_t digit = (flat / stride[f]) % dims[f];
            if (kept[f])
                kept_index = kept_index * dims[f] + digit;
            else
                traced_index = traced_index * dims[f] + digit;
        }
    };

    ComplexMatrix out(kept_dim);
    for (std::size_t r = 0; r < total; ++r) {
        std::size_t rk, rt;
        split(r, rk, rt);
        for (std::size_t c = 0; c < total; ++c) {
            std::size_t ck, ct;
            split(c, ck, ct);
            if (rt == ct) out(rk, ck) += rho(r, c);
        }
    }
    return DensityMatrix(out.hermitian_part());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep,
                            std::span<const std::size_t> dims) {
    const std::size_t k[] = {keep};
    return partial_trace(rho, k, dims);
}

// ---------------------------------------------------------------------------
// Eigensystems

EigenSystem hermitian_eigen(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    const double scale = std::max(1.0, m.max_abs());
    if (!m.is_hermitian(kHermitianTol * scale))
        throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");

    ComplexMatrix a = m.hermitian_part();
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return s;
    };

    const double eps2 = 1e-34 * scale * scale;
    int sweep = 0;
    for (; sweep < kMaxSweeps && off_norm() > eps2; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) continue;
                // Phase-rotate column q so the pivot is real, then apply the
                // real symmetric Schur rotation.
                const Complex phase = apq / mag;
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Columns p, q of the rotation: [c, -s e^{-i alpha}]^T, [s, c e^{-i alpha}]^T
                const Complex vpp = c, vpq = s;
                const Complex vqp = -s * std::conj(phase), vqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {  // A <- A V
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * vpp + akq * vqp;
                    a(k, q) = akp * vpq + akq * vqq;
                }
                for (std::size_t k = 0; k < n; ++k) {  // A <- V^dagger A
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
                    a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {  // V_acc <- V_acc V
                    const Complex wkp = v(k, p), wkq = v(k, q);
                    v(k, p) = wkp * vpp + wkq * vqp;
                    v(k, q) = wkp * vpq + wkq * vqq;
                }
            }
        }
    }
    if (off_norm() > eps2 * 1e8) throw NumericalError("hermitian_eigen: Jacobi sweeps did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigenSystem out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& rho) {
    const auto eig = hermitian_eigen(rho);
    const std::size_t n = rho.dim();
    const double cut = kRankCut * std::max(1.0, eig.values.front());
    ComplexMatrix s(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lambda = eig.values[k];
        if (lambda < -kPsdClampTol)
            throw NumericalError("psd_sqrt: eigenvalue " + std::to_string(lambda) + " below clamp");
        if (lambda <= cut) continue;
        const double root = std::sqrt(lambda);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                s(i, j) += root * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    return s.hermitian_part();
}

double von_neumann_entropy(const DensityMatrix& rho) {
    const auto eig = hermitian_eigen(rho.matrix());
    double s = 0.0;
    for (double lambda : eig.values)
        if (lambda > 1e-15) s -= lambda * std::log2(lambda);
    return std::max(0.0, s);
}

// ---------------------------------------------------------------------------
// Fixed operators and states

namespace pauli {
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

namespace bell {
namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}
StateVector phi_plus() { return StateVector::normalized({kInvSqrt2, 0.0, 0.0, kInvSqrt2}); }
StateVector phi_minus() { return StateVector::normalized({kInvSqrt2, 0.0, 0.0, -kInvSqrt2}); }
StateVector psi_plus() { return StateVector::normalized({0.0, kInvSqrt2, kInvSqrt2, 0.0}); }
StateVector psi_minus() { return StateVector::normalized({0.0, kInvSqrt2, -kInvSqrt2, 0.0}); }
}  // namespace bell

ComplexMatrix spin_rotation(double nx, double ny, double nz, double angle) {
    const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (!(norm > 0.0)) return ComplexMatrix::identity(2);
    nx /= norm;
    ny /= norm;
    nz /= norm;
    const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
    const Complex i(0.0, 1.0);
    // cos(a/2) I - i sin(a/2) (n . sigma)
    return {{c - i * s * nz, -i * s * Complex(nx, -ny)}, {-i * s * Complex(nx, ny), c + i * s * nz}};
}

}  // namespace hent
