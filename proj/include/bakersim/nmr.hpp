#pragma once

// Three-spin NMR machine model (H, C1, C2), pulse-sequence IR and the
// gate-to-pulse compiler.
//
// Register significance is fixed as H (most significant), C1, C2. Pulse
// sequences are stored in execution order.

#include "bakersim/baker.hpp"
#include "bakersim/qstate.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bakersim {

enum class SpinLabel { kH, kC1, kC2 };

inline constexpr std::array<SpinLabel, 3> kRegisterOrder{SpinLabel::kH, SpinLabel::kC1, SpinLabel::kC2};

std::string to_string(SpinLabel s);
/// Accepts "H", "C1", "C2"; throws std::invalid_argument otherwise.
SpinLabel parse_spin(std::string_view text);

/// Single-spin operator placed on `spin` in the 8x8 register.
CMatrix embed_spin(const CMatrix& op, SpinLabel spin);
CMatrix embed_spins(const CMatrix& op, SpinLabel first, SpinLabel second);

enum class HamiltonianVariant { kFull, kNoXY, kSimplified };
enum class FrequencyConvention { kAngular, kCycles };

std::string to_string(HamiltonianVariant v);
std::string to_string(FrequencyConvention c);
HamiltonianVariant parse_hamiltonian_variant(std::string_view text);
FrequencyConvention parse_convention(std::string_view text);

struct HamiltonianModel {
    HamiltonianVariant variant = HamiltonianVariant::kNoXY;
    double j1 = 203.0;
    double j2 = 102.0;
    double j3 = 10.0;
    double delta = -905.0;
    FrequencyConvention convention = FrequencyConvention::kAngular;

    /// Multiplier turning the stored magnitudes into rad/s.
    double scale() const { return convention == FrequencyConvention::kCycles ? 2.0 * kPi : 1.0; }
    double j1_eff() const { return j1 * scale(); }
    double j2_eff() const { return j2 * scale(); }
    double j3_eff() const { return j3 * scale(); }
    double delta_eff() const { return delta * scale(); }

    /// Throws std::invalid_argument on non-finite parameters or j1 <= 0.
    void validate() const;

    /// Same model with j2 = j1/2 exactly, the ratio the canned sequences assume.
    HamiltonianModel with_exact_ratio() const;

    bool operator==(const HamiltonianModel&) const = default;
};

struct RotX {
    SpinLabel spin;
    double angle;
    bool operator==(const RotX&) const = default;
};

struct RotY {
    SpinLabel spin;
    double angle;
    bool operator==(const RotY&) const = default;
};

struct Delay {
    double duration;
    bool operator==(const Delay&) const = default;
};

using PulseInstruction = std::variant<RotX, RotY, Delay>;

/// Which logical qubit each spin holds before and after a sequence:
/// logical qubit k sits on before[k] on entry and after[k] on exit.
struct Relabeling {
    std::array<SpinLabel, 3> before;
    std::array<SpinLabel, 3> after;
    bool operator==(const Relabeling&) const = default;
};

class PulseSequence {
public:
    PulseSequence() = default;
    PulseSequence(std::string name, std::vector<PulseInstruction> instructions,
                  std::optional<Relabeling> relabel = std::nullopt);

    const std::string& name() const { return name_; }
    const std::vector<PulseInstruction>& instructions() const { return instructions_; }
    const std::optional<Relabeling>& relabel() const { return relabel_; }
    std::size_t size() const { return instructions_.size(); }
    bool empty() const { return instructions_.empty(); }

    /// Sum of all delay durations, recomputed on every call.
    double total_delay() const;

    void append(const PulseInstruction& p);
    void append(const PulseSequence& other);
    void set_name(std::string name) { name_ = std::move(name); }

    bool operator==(const PulseSequence&) const = default;

private:
    std::string name_;
    std::vector<PulseInstruction> instructions_;
    std::optional<Relabeling> relabel_;
};

HermitianOperator hamiltonian_matrix(const HamiltonianModel& model);

UnitaryOperator pulse_unitary(const PulseInstruction& p, const HamiltonianModel& model);

/// First-executed instruction is applied first.
UnitaryOperator sequence_unitary(const PulseSequence& seq, const HamiltonianModel& model);

/// Z(angle) = exp(i angle Z/2) from three x/y rotations; variant 1..4.
PulseSequence z_rotation_pulses(SpinLabel spin, double angle, int variant = 1);

/// Hadamard (up to phase) from an x and a y rotation; variant 1..2.
PulseSequence hadamard_pulses(SpinLabel spin, int variant = 1);

enum class CoupledPair { kC1H, kC1C2 };

/// Which basis state of the pair picks up the phase.
/// kAllOne: the gate-level phase gate, phase on |11>.
/// kAllZero: the z-corrections exactly as written for the refocused gate,
/// which leaves the phase on |00> (the form the canned sequences use).
enum class PhasedState { kAllOne, kAllZero };

/// Refocused realization of the phase gate with angle -theta, theta >= 0.
/// Two delays of theta/(2j) around a pi pulse on the spectator spin, then
/// z rotations on both actors. theta = 0 yields an empty sequence.
PulseSequence phase_gate_pulses(CoupledPair pair, double theta, const HamiltonianModel& model,
                                PhasedState phased = PhasedState::kAllOne);

/// A_t B(pi) A_t. Throws std::invalid_argument for the H-C2 pair.
PulseSequence cnot_pulses(SpinLabel control, SpinLabel target, const HamiltonianModel& model);

/// Three alternating CNOTs. Throws std::invalid_argument for the H-C2 pair.
PulseSequence swap_pulses(SpinLabel a, SpinLabel b, const HamiltonianModel& model);

/// exp(i theta (Z_a + Z_b + Z_a Z_b)/4): relative phase theta on |00> of the pair.
UnitaryOperator nmr_phase_gate(SpinLabel a, SpinLabel b, double theta);
UnitaryOperator phase_gate_11(SpinLabel a, SpinLabel b, double theta);
UnitaryOperator hadamard_on(SpinLabel s);
UnitaryOperator swap_on(SpinLabel a, SpinLabel b);

struct Timescales {
    double tau1;
    double tau2;
    double tau3;
    double tau4;
    double tau_appendix;
};

Timescales timescales(const HamiltonianModel& model);

PulseSequence t_odd(const HamiltonianModel& model = {});
/// Even-step sequence with the echo and sign corrections applied.
PulseSequence t_even(const HamiltonianModel& model = {});
/// The even-step sequence exactly as printed; it does not realize the map.
PulseSequence t_even_as_printed(const HamiltonianModel& model = {});
PulseSequence t_regular(const HamiltonianModel& model = {});
PulseSequence full_baker_appendix(const HamiltonianModel& model = {});

UnitaryOperator ideal_t_odd();
UnitaryOperator ideal_t_even();
UnitaryOperator ideal_t_regular(const HamiltonianModel& model = {});
UnitaryOperator ideal_full_baker_appendix();

struct SequenceCheck {
    std::string name;
    double distance;
    double tolerance;
    bool pass;
};

SequenceCheck verify_sequence(const PulseSequence& seq, const UnitaryOperator& target,
                              const HamiltonianModel& model, double tol);

/// Text format, one instruction per line in execution order.
std::string format_pulse_sequence(const PulseSequence& seq, FrequencyConvention convention);
/// Throws std::invalid_argument on malformed input.
PulseSequence parse_pulse_sequence(std::string_view text);

}  // namespace bakersim
