#pragma once

// Dense complex linear algebra for the small Hilbert spaces used here
// (qubit pairs and qubit-qubit-oscillator triples, dim <= 8).
//
// Basis ordering is fixed globally: subsystem A is the most significant
// factor, so for A (x) B the index of |i_a i_b> is i_a * dim_b + i_b.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hent {

using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPsdClampTol = 1e-10;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t dim() const { return dim_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix conjugate() const;
    Complex trace() const;
    double max_abs() const;
    bool is_hermitian(double tol = kHermitianTol) const;
    /// (M + M^dagger) / 2
    ComplexMatrix hermitian_part() const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex s, ComplexMatrix m);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

class StateVector {
public:
    StateVector() = default;
    /// Throws std::invalid_argument unless |sum |a_i|^2 - 1| <= kNormTol.
    explicit StateVector(std::vector<Complex> amplitudes);
    StateVector(std::initializer_list<Complex> amplitudes);

    /// Rescales to unit norm; throws on a zero vector.
    static StateVector normalized(std::vector<Complex> amplitudes);
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amps_.size(); }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }
    std::span<const Complex> amplitudes() const { return amps_; }

    ComplexMatrix projector() const;

private:
    std::vector<Complex> amps_;
};

Complex inner(const StateVector& bra, const StateVector& ket);
/// |<a|b>|, equal to 1 when the states agree up to a global phase.
double overlap(const StateVector& a, const StateVector& b);
StateVector apply(const ComplexMatrix& op, const StateVector& psi);

class DensityMatrix {
public:
    DensityMatrix() = default;
    /// Validates Hermiticity (kHermitianTol), unit trace (kTraceTol) and
    /// eigenvalues >= -kPsdClampTol. Throws std::invalid_argument otherwise.
    explicit DensityMatrix(ComplexMatrix m);
    static DensityMatrix pure(const StateVector& psi);

    std::size_t dim() const { return m_.dim(); }
    const ComplexMatrix& matrix() const { return m_; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

private:
    ComplexMatrix m_;
};

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
StateVector tensor_product(const StateVector& a, const StateVector& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced density matrix over the subsystems listed in `keep` (ascending,
/// indices into `dims`). Throws std::invalid_argument on dimension mismatch.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep,
                            std::span<const std::size_t> dims);
DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep,
                            std::span<const std::size_t> dims);

struct EigenSystem {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // column k belongs to values[k]
};

/// Cyclic complex Jacobi rotations. Throws std::invalid_argument if `m` is
/// not Hermitian to kHermitianTol relative to its largest entry.
EigenSystem hermitian_eigen(const ComplexMatrix& m);

/// Principal square root of a PSD matrix. Eigenvalues in [-kPsdClampTol, 0)
/// are clamped to zero, as are positive ones at rounding level; anything
/// below -kPsdClampTol throws NumericalError.
ComplexMatrix psd_sqrt(const ComplexMatrix& rho);
inline ComplexMatrix psd_sqrt(const DensityMatrix& rho) { return psd_sqrt(rho.matrix()); }

/// -sum lambda log2 lambda, in bits.
double von_neumann_entropy(const DensityMatrix& rho);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

namespace bell {
StateVector phi_plus();
StateVector phi_minus();
StateVector psi_plus();
StateVector psi_minus();
}  // namespace bell

/// exp(-i * angle * (n . sigma) / 2) for a unit axis n = (nx, ny, nz).
ComplexMatrix spin_rotation(double nx, double ny, double nz, double angle);

}  // namespace hent
