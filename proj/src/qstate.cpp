#include "bakersim/qstate.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <set>

namespace bakersim {

namespace {

bool is_power_of_two(Eigen::Index n) { return n >= 1 && (n & (n - 1)) == 0; }

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix is not square");
    }
}

}  // namespace

namespace pauli {

CMatrix identity() { return CMatrix::Identity(2, 2); }

CMatrix x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

CMatrix y() {
    CMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

CMatrix z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace pauli

double hermiticity_error(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (!is_power_of_two(amplitudes_.size())) {
        throw std::invalid_argument("StateVector: dimension must be a power of two");
    }
    const double norm = amplitudes_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::invalid_argument("StateVector: cannot normalize a zero or non-finite vector");
    }
    amplitudes_ /= norm;
}

StateVector StateVector::basis(int dim, int index) {
    if (index < 0 || index >= dim) {
        throw std::invalid_argument("StateVector::basis: index out of range");
    }
    CVector v = CVector::Zero(dim);
    v(index) = 1.0;
    return StateVector(std::move(v));
}

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "DensityMatrix");
    if (hermiticity_error(entries_) > tolerance::kHermitian) {
        throw PhysicsViolation("DensityMatrix: not Hermitian");
    }
    const Complex tr = entries_.trace();
    if (std::abs(tr - 1.0) > tolerance::kTrace) {
        throw PhysicsViolation("DensityMatrix: trace deviates from 1");
    }
    if (eigenvalues().minCoeff() < -tolerance::kPositivity) {
        throw PhysicsViolation("DensityMatrix: negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
    const CVector& a = psi.amplitudes();
    return DensityMatrix(a * a.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    // Symmetrize so the solver sees an exactly Hermitian input.
    const CMatrix h = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

UnitaryOperator::UnitaryOperator(CMatrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "UnitaryOperator");
    const auto n = entries_.rows();
    const double err = (entries_.adjoint() * entries_ - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(err <= tolerance::kUnitary)) {
        throw std::invalid_argument("UnitaryOperator: matrix is not unitary");
    }
}

UnitaryOperator UnitaryOperator::identity(int dim) {
    return UnitaryOperator(CMatrix::Identity(dim, dim), Unchecked{});
}

UnitaryOperator UnitaryOperator::adjoint() const {
    return UnitaryOperator(entries_.adjoint(), Unchecked{});
}

UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("UnitaryOperator product: dimension mismatch");
    }
    return UnitaryOperator(a.entries_ * b.entries_, UnitaryOperator::Unchecked{});
}

HermitianOperator::HermitianOperator(CMatrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "HermitianOperator");
    const double scale = std::max(1.0, entries_.size() ? entries_.cwiseAbs().maxCoeff() : 0.0);
    if (hermiticity_error(entries_) > tolerance::kHamiltonian * scale) {
        throw std::invalid_argument("HermitianOperator: matrix is not Hermitian");
    }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix embed_positions(const CMatrix& op, std::span<const int> targets, int n_qubits) {
    require_square(op, "embed");
    const int k = static_cast<int>(targets.size());
    if (op.rows() != (Eigen::Index{1} << k)) {
        throw std::invalid_argument("embed: operator dimension does not match target count");
    }
    std::set<int> seen;
    for (int p : targets) {
        if (p < 0 || p >= n_qubits) throw std::invalid_argument("embed: target out of range");
        if (!seen.insert(p).second) throw std::invalid_argument("embed: duplicate target");
    }

    const int dim = 1 << n_qubits;
    auto bit_of = [n_qubits](int index, int position) { return (index >> (n_qubits - 1 - position)) & 1; };

    int target_mask = 0;
    for (int p : targets) target_mask |= 1 << (n_qubits - 1 - p);

    CMatrix out = CMatrix::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
        int sub_col = 0;
        for (int p : targets) sub_col = (sub_col << 1) | bit_of(col, p);
        const int rest = col & ~target_mask;
        for (int sub_row = 0; sub_row < op.rows(); ++sub_row) {
            const Complex a = op(sub_row, sub_col);
            if (a == Complex(0.0)) continue;
            int row = rest;
            for (int t = 0; t < k; ++t) {
                if ((sub_row >> (k - 1 - t)) & 1) row |= 1 << (n_qubits - 1 - targets[t]);
            }
            out(row, col) += a;
        }
    }
    return out;
}

UnitaryOperator expm_hermitian(const HermitianOperator& h, double t) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
    const Eigen::VectorXd& w = solver.eigenvalues();
    CVector phases(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        phases(i) = std::exp(Complex(0.0, -w(i) * t));
    }
    const CMatrix& v = solver.eigenvectors();
    return UnitaryOperator(v * phases.asDiagonal() * v.adjoint());
}

UnitaryOperator dft_matrix(int dim) {
    if (dim < 1) throw std::invalid_argument("dft_matrix: dim must be >= 1");
    CMatrix f(dim, dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int k = 0; k < dim; ++k) {
        for (int j = 0; j < dim; ++j) {
            // Reduce kj mod dim before forming the angle to keep the phases exact.
            const long long kj = (static_cast<long long>(k) * j) % dim;
            f(k, j) = std::polar(scale, 2.0 * kPi * static_cast<double>(kj) / dim);
        }
    }
    return UnitaryOperator(std::move(f));
}

double entropy_bits_from_eigenvalues(const Eigen::VectorXd& eigenvalues) {
    double s = 0.0;
    for (double lambda : eigenvalues) {
        if (lambda < -tolerance::kPositivity) {
            throw PhysicsViolation("entropy: eigenvalue below positivity tolerance");
        }
        if (lambda > 0.0) s -= lambda * std::log2(lambda);
    }
    return s;
}

double von_neumann_entropy_bits(const DensityMatrix& rho) {
    return entropy_bits_from_eigenvalues(rho.eigenvalues());
}

double phase_invariant_distance(const UnitaryOperator& u, const UnitaryOperator& v) {
    if (u.dim() != v.dim()) {
        throw std::invalid_argument("phase_invariant_distance: dimension mismatch");
    }
    const Complex overlap = (u.matrix().adjoint() * v.matrix()).trace();
    return std::max(0.0, 1.0 - std::abs(overlap) / u.dim());
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

StateVector apply(const UnitaryOperator& u, const StateVector& psi) {
    if (u.dim() != psi.dim()) throw std::invalid_argument("apply: dimension mismatch");
    return StateVector(u.matrix() * psi.amplitudes());
}

}  // namespace bakersim
