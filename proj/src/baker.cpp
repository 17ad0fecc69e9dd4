#include "bakersim/baker.hpp"

#include <fmt/format.h>

#include <cmath>
#include <sstream>

namespace bakersim {

namespace {

void check_qubit(int q, int n_qubits) {
    if (q < 0 || q >= n_qubits) throw std::invalid_argument("gate: qubit index out of range");
}

// Register position (0 = most significant) of logical qubit q.
int position_of(int q, int n_qubits) { return n_qubits - 1 - q; }

CMatrix hadamard_2x2() {
    CMatrix h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

CVector qubit_factor(double fraction) {
    CVector v(2);
    v << 1.0, std::exp(Complex(0.0, -2.0 * kPi * fraction));
    return v / std::sqrt(2.0);
}

CVector qubit_basis(int a) {
    CVector v = CVector::Zero(2);
    v(a) = 1.0;
    return v;
}

double binary_fraction(const std::vector<int>& digits) {
    double f = 0.0;
    double w = 0.5;
    for (int d : digits) {
        f += d * w;
        w *= 0.5;
    }
    return f;
}

// factors[q] is the single-qubit state of logical qubit q.
StateVector product_state(const std::vector<CVector>& factors) {
    CVector out = CVector::Ones(1);
    for (int q = static_cast<int>(factors.size()) - 1; q >= 0; --q) {
        out = kron(out, factors[static_cast<std::size_t>(q)]);
    }
    return StateVector(std::move(out));
}

void require_three_qubits(int n_qubits) {
    if (n_qubits != 3) throw std::invalid_argument("gate sequence is only defined for 3 qubits");
}

}  // namespace

BitString::BitString(std::vector<std::uint8_t> msb_first) : bits_(std::move(msb_first)) {
    if (bits_.empty()) throw std::invalid_argument("BitString: empty");
    for (auto b : bits_) {
        if (b > 1) throw std::invalid_argument("BitString: bits must be 0 or 1");
    }
}

BitString BitString::from_index(unsigned index, int n_bits) {
    if (n_bits < 1 || n_bits > 30 || index >= (1u << n_bits)) {
        throw std::invalid_argument("BitString::from_index: out of range");
    }
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n_bits));
    for (int k = 0; k < n_bits; ++k) {
        bits[static_cast<std::size_t>(n_bits - 1 - k)] = static_cast<std::uint8_t>((index >> k) & 1u);
    }
    return BitString(std::move(bits));
}

unsigned BitString::index() const {
    unsigned j = 0;
    for (auto b : bits_) j = (j << 1) | b;
    return j;
}

std::string BitString::to_string() const {
    std::string s;
    for (auto b : bits_) s.push_back(b ? '1' : '0');
    return s;
}

UnitaryOperator gate_unitary(const GateSpec& gate, int n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("gate_unitary: n_qubits must be >= 1");
    return std::visit(
        [n_qubits](const auto& g) -> UnitaryOperator {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, Hadamard>) {
                check_qubit(g.qubit, n_qubits);
                const int pos[] = {position_of(g.qubit, n_qubits)};
                return UnitaryOperator(embed_positions(hadamard_2x2(), pos, n_qubits));
            } else if constexpr (std::is_same_v<T, PhaseGate>) {
                check_qubit(g.m, n_qubits);
                check_qubit(g.n, n_qubits);
                if (g.m == g.n) throw std::invalid_argument("phase gate: qubits must differ");
                if (!std::isfinite(g.theta)) throw std::invalid_argument("phase gate: angle not finite");
                const int dim = 1 << n_qubits;
                CMatrix d = CMatrix::Identity(dim, dim);
                const Complex phase = std::exp(Complex(0.0, g.theta));
                for (int j = 0; j < dim; ++j) {
                    if (((j >> g.m) & 1) && ((j >> g.n) & 1)) d(j, j) = phase;
                }
                return UnitaryOperator(std::move(d));
            } else {
                check_qubit(g.m, n_qubits);
                check_qubit(g.n, n_qubits);
                if (g.m == g.n) throw std::invalid_argument("swap gate: qubits must differ");
                const int dim = 1 << n_qubits;
                CMatrix p = CMatrix::Zero(dim, dim);
                for (int j = 0; j < dim; ++j) {
                    const int am = (j >> g.m) & 1;
                    const int an = (j >> g.n) & 1;
                    int k = j & ~(1 << g.m) & ~(1 << g.n);
                    k |= (an << g.m) | (am << g.n);
                    p(k, j) = 1.0;
                }
                return UnitaryOperator(std::move(p));
            }
        },
        gate);
}

UnitaryOperator gate_sequence_unitary(const GateSequence& gates, int n_qubits) {
    UnitaryOperator u = UnitaryOperator::identity(1 << n_qubits);
    for (const auto& g : gates) u = gate_unitary(g, n_qubits) * u;
    return u;
}

UnitaryOperator baker_unitary(int n_qubits) {
    if (n_qubits < 2) throw std::invalid_argument("baker_unitary: n_qubits must be >= 2");
    const UnitaryOperator full = dft_matrix(1 << n_qubits);
    const UnitaryOperator lower = dft_matrix(1 << (n_qubits - 1));
    return full.adjoint() * UnitaryOperator(kron(CMatrix::Identity(2, 2), lower.matrix()));
}

GateSequence baker_gate_sequence(int n_qubits) {
    require_three_qubits(n_qubits);
    // T = S02 A0 B01'(pi/2) B02'(pi/4) A1 B12'(pi/2) A2 S01 A0 B01(pi/2) A1
    return {
        Hadamard{1},
        PhaseGate{0, 1, kPi / 2},
        Hadamard{0},
        SwapGate{0, 1},
        Hadamard{2},
        PhaseGate{1, 2, -kPi / 2},
        Hadamard{1},
        PhaseGate{0, 2, -kPi / 4},
        PhaseGate{0, 1, -kPi / 2},
        Hadamard{0},
        SwapGate{0, 2},
    };
}

GateSequence simplified_baker_gate_sequence(int n_qubits) {
    require_three_qubits(n_qubits);
    // T_M = S01 S02 A0 B02'(pi/4) B01'(pi/2)
    return {
        PhaseGate{0, 1, -kPi / 2},
        PhaseGate{0, 2, -kPi / 4},
        Hadamard{0},
        SwapGate{0, 2},
        SwapGate{0, 1},
    };
}

GateSequence neighbor_baker_gate_sequence() {
    // T' = S12 A1 B01'(pi/2) B12'(pi/4) A0 S01 B12'(pi/2) A2 A1 B01(pi/2) A0
    return {
        Hadamard{0},
        PhaseGate{0, 1, kPi / 2},
        Hadamard{1},
        Hadamard{2},
        PhaseGate{1, 2, -kPi / 2},
        SwapGate{0, 1},
        Hadamard{0},
        PhaseGate{1, 2, -kPi / 4},
        PhaseGate{0, 1, -kPi / 2},
        Hadamard{1},
        SwapGate{1, 2},
    };
}

StateVector shift_domain_state(const BitString& bits, MapVariant variant) {
    const int n = bits.size();
    std::vector<CVector> factors(static_cast<std::size_t>(n));
    if (variant == MapVariant::kFull) {
        // |a_{N-1}> on the top qubit; qubit q < N-1 carries 0.a_{N-2-q} ... a_0.
        factors[static_cast<std::size_t>(n - 1)] = qubit_basis(bits.bit(n - 1));
        for (int q = 0; q < n - 1; ++q) {
            std::vector<int> digits;
            for (int k = n - 2 - q; k >= 0; --k) digits.push_back(bits.bit(k));
            factors[static_cast<std::size_t>(q)] = qubit_factor(binary_fraction(digits));
        }
    } else {
        // |a_{N-1}> on qubit 0 (the control qubit of T_M); qubit m >= 1
        // carries 0.a_{N-1-m} ... a_{N-2}.
        factors[0] = qubit_basis(bits.bit(n - 1));
        for (int m = 1; m < n; ++m) {
            std::vector<int> digits;
            for (int k = n - 1 - m; k <= n - 2; ++k) digits.push_back(bits.bit(k));
            factors[static_cast<std::size_t>(m)] = qubit_factor(binary_fraction(digits));
        }
    }
    return product_state(factors);
}

StateVector shift_image_state(const BitString& bits, MapVariant variant) {
    const int n = bits.size();
    std::vector<CVector> factors(static_cast<std::size_t>(n));
    if (variant == MapVariant::kFull) {
        // qubit q carries 0.a_{N-1-q} ... a_0.
        for (int q = 0; q < n; ++q) {
            std::vector<int> digits;
            for (int k = n - 1 - q; k >= 0; --k) digits.push_back(bits.bit(k));
            factors[static_cast<std::size_t>(q)] = qubit_factor(binary_fraction(digits));
        }
    } else {
        // Top qubit carries 0.a_{N-1}; qubit m-1 carries 0.a_{N-1-m} ... a_{N-1}.
        factors[static_cast<std::size_t>(n - 1)] = qubit_factor(binary_fraction({bits.bit(n - 1)}));
        for (int m = 1; m < n; ++m) {
            std::vector<int> digits;
            for (int k = n - 1 - m; k <= n - 1; ++k) digits.push_back(bits.bit(k));
            factors[static_cast<std::size_t>(m - 1)] = qubit_factor(binary_fraction(digits));
        }
    }
    return product_state(factors);
}

std::string describe(const GateSpec& gate) {
    return std::visit(
        [](const auto& g) -> std::string {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, Hadamard>) {
                return fmt::format("A {}", g.qubit);
            } else if constexpr (std::is_same_v<T, PhaseGate>) {
                return fmt::format("B {} {} {:.17g}", g.m, g.n, g.theta);
            } else {
                return fmt::format("S {} {}", g.m, g.n);
            }
        },
        gate);
}

std::string format_gate_sequence(const GateSequence& gates, const std::string& name) {
    std::ostringstream out;
    out << "# name=" << name << " gates=" << gates.size() << "\n";
    out << "# execution order: first line runs first; qubit 0 is least significant\n";
    for (const auto& g : gates) out << describe(g) << "\n";
    return out.str();
}

}  // namespace bakersim
