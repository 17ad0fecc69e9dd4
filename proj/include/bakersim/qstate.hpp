#pragma once

// Dense complex linear algebra for small qubit registers.
//
// Basis convention used throughout the library: Z|0> = +|0>, Z|1> = -|1>,
// and a basis index j = sum_k a_k 2^k is laid out with a_{N-1} as the most
// significant tensor factor (leftmost in a Kronecker product).

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bakersim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a simulated state leaves the physical domain by more than the
/// numerical tolerances (negative eigenvalues, trace drift, lost Hermiticity).
class PhysicsViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace tolerance {
inline constexpr double kNorm = 1e-10;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-9;
inline constexpr double kPositivity = 1e-9;
inline constexpr double kUnitary = 1e-10;
inline constexpr double kHamiltonian = 1e-12;
}  // namespace tolerance

namespace pauli {
CMatrix identity();
CMatrix x();
CMatrix y();
CMatrix z();
}  // namespace pauli

class StateVector {
public:
    /// Normalizes the amplitudes. Throws std::invalid_argument for a zero
    /// vector or a length that is not a power of two.
    explicit StateVector(CVector amplitudes);

    static StateVector basis(int dim, int index);

    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const CVector& amplitudes() const { return amplitudes_; }

private:
    CVector amplitudes_;
};

class DensityMatrix {
public:
    /// Validates Hermiticity, unit trace and positivity; throws
    /// PhysicsViolation when any of them fails beyond tolerance.
    explicit DensityMatrix(CMatrix entries);

    static DensityMatrix from_pure(const StateVector& psi);
    static DensityMatrix maximally_mixed(int dim);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const CMatrix& matrix() const { return entries_; }
    double purity() const;
    /// Eigenvalues in ascending order.
    Eigen::VectorXd eigenvalues() const;

private:
    CMatrix entries_;
};

class UnitaryOperator {
public:
    /// Throws std::invalid_argument unless U^dagger U = I within 1e-10.
    explicit UnitaryOperator(CMatrix entries);

    static UnitaryOperator identity(int dim);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const CMatrix& matrix() const { return entries_; }
    UnitaryOperator adjoint() const;

    /// Operator product; (a * b) applies b first.
    friend UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b);

private:
    struct Unchecked {};
    UnitaryOperator(CMatrix entries, Unchecked) : entries_(std::move(entries)) {}
    CMatrix entries_;
};

class HermitianOperator {
public:
    explicit HermitianOperator(CMatrix entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const CMatrix& matrix() const { return entries_; }

private:
    CMatrix entries_;
};

/// Kronecker product, left operand most significant.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Places `op` on the register positions `targets` (0 = most significant
/// factor) of an n-qubit register, identity elsewhere. The first target is
/// the most significant factor of `op`.
CMatrix embed_positions(const CMatrix& op, std::span<const int> targets, int n_qubits);

/// Label-based front end of embed_positions: `register_order` lists the
/// labels from most to least significant.
template <class Label>
CMatrix embed(const CMatrix& op, std::span<const Label> targets, std::span<const Label> register_order) {
    std::vector<int> positions;
    positions.reserve(targets.size());
    for (const auto& label : targets) {
        auto it = std::find(register_order.begin(), register_order.end(), label);
        if (it == register_order.end()) {
            throw std::invalid_argument("embed: unknown label");
        }
        positions.push_back(static_cast<int>(it - register_order.begin()));
    }
    return embed_positions(op, positions, static_cast<int>(register_order.size()));
}

/// e^{-i h t} through the spectral decomposition of h.
UnitaryOperator expm_hermitian(const HermitianOperator& h, double t);

/// Unitary DFT, entry (k, j) = e^{2 pi i k j / dim} / sqrt(dim).
UnitaryOperator dft_matrix(int dim);

/// -sum lambda log2 lambda. Eigenvalues in [-1e-9, 0] count as zero; anything
/// more negative raises PhysicsViolation.
double von_neumann_entropy_bits(const DensityMatrix& rho);
double entropy_bits_from_eigenvalues(const Eigen::VectorXd& eigenvalues);

/// 1 - |tr(u^dagger v)| / dim; zero iff u and v agree up to a global phase.
double phase_invariant_distance(const UnitaryOperator& u, const UnitaryOperator& v);

/// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

StateVector apply(const UnitaryOperator& u, const StateVector& psi);

/// Largest absolute entry of m - m^dagger.
double hermiticity_error(const CMatrix& m);

}  // namespace bakersim
