#pragma once

// Gate algebra on logical qubits and the quantized baker's map.
//
// Logical qubit m is the m-th least significant bit of the basis index.
// Gate sequences are stored in execution order: element 0 runs first, which
// is the reverse of the right-to-left operator notation.

#include "bakersim/qstate.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace bakersim {

struct Hadamard {
    int qubit;
    bool operator==(const Hadamard&) const = default;
};

/// Multiplies a basis state by e^{i theta} iff a_m = a_n = 1.
struct PhaseGate {
    int m;
    int n;
    double theta;
    bool operator==(const PhaseGate&) const = default;
};

struct SwapGate {
    int m;
    int n;
    bool operator==(const SwapGate&) const = default;
};

using GateSpec = std::variant<Hadamard, PhaseGate, SwapGate>;
using GateSequence = std::vector<GateSpec>;

/// Bits a_{N-1} ... a_0, most significant first.
class BitString {
public:
    explicit BitString(std::vector<std::uint8_t> msb_first);
    static BitString from_index(unsigned index, int n_bits);

    int size() const { return static_cast<int>(bits_.size()); }
    /// a_k, k = 0 is the least significant bit.
    int bit(int k) const { return bits_[bits_.size() - 1 - static_cast<std::size_t>(k)]; }
    unsigned index() const;
    std::string to_string() const;

private:
    std::vector<std::uint8_t> bits_;
};

enum class MapVariant { kFull, kSimplified };

UnitaryOperator gate_unitary(const GateSpec& gate, int n_qubits);

/// Product of the gates, first element applied first.
UnitaryOperator gate_sequence_unitary(const GateSequence& gates, int n_qubits);

/// F_N^{-1} (I (x) F_{N-1}), identity on the most significant qubit.
UnitaryOperator baker_unitary(int n_qubits);

/// The 11-gate realization of the 3-qubit baker's map.
GateSequence baker_gate_sequence(int n_qubits = 3);

/// The 5-gate simplified map T_M: controlled rotations, a Hadamard, then a
/// cyclic qubit shift.
GateSequence simplified_baker_gate_sequence(int n_qubits = 3);

/// The baker's map conjugated by S_01 so that it only couples neighbouring
/// qubits: T' = S_01 T S_01.
GateSequence neighbor_baker_gate_sequence();

/// Product-state preimage whose image under the map is shift_image_state.
/// Each qubit factor is (|0> + e^{-2 pi i f}|1>)/sqrt(2) for a binary
/// fraction f built from the bits.
StateVector shift_domain_state(const BitString& bits, MapVariant variant);
StateVector shift_image_state(const BitString& bits, MapVariant variant);

std::string describe(const GateSpec& gate);

/// One gate per line (`A m`, `B m n theta`, `S m n`), execution order.
std::string format_gate_sequence(const GateSequence& gates, const std::string& name);

}  // namespace bakersim
