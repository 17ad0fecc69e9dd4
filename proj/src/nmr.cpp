#include "bakersim/nmr.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace bakersim {

namespace {

int position(SpinLabel s) {
    switch (s) {
        case SpinLabel::kH: return 0;
        case SpinLabel::kC1: return 1;
        case SpinLabel::kC2: return 2;
    }
    throw std::invalid_argument("unknown spin label");
}

CMatrix rotation_2x2(const CMatrix& pauli_op, double angle) {
    // exp(i angle P / 2) for a Pauli matrix P.
    return std::cos(angle / 2) * pauli::identity() + Complex(0.0, std::sin(angle / 2)) * pauli_op;
}

bool is_neighbor_pair(SpinLabel a, SpinLabel b) {
    if (a == b) return false;
    return a == SpinLabel::kC1 || b == SpinLabel::kC1;
}

PulseInstruction rotx(SpinLabel s, double angle) { return RotX{s, angle}; }
PulseInstruction roty(SpinLabel s, double angle) { return RotY{s, angle}; }
PulseInstruction delay(double t) { return Delay{t}; }

void check_instruction(const PulseInstruction& p) {
    std::visit(
        [](const auto& ins) {
            using T = std::decay_t<decltype(ins)>;
            if constexpr (std::is_same_v<T, Delay>) {
                if (!(ins.duration >= 0.0) || !std::isfinite(ins.duration)) {
                    throw std::invalid_argument("pulse: delay must be finite and >= 0");
                }
            } else {
                if (!std::isfinite(ins.angle)) throw std::invalid_argument("pulse: angle not finite");
            }
        },
        p);
}

}  // namespace

std::string to_string(SpinLabel s) {
    switch (s) {
        case SpinLabel::kH: return "H";
        case SpinLabel::kC1: return "C1";
        case SpinLabel::kC2: return "C2";
    }
    return "?";
}

SpinLabel parse_spin(std::string_view text) {
    if (text == "H") return SpinLabel::kH;
    if (text == "C1") return SpinLabel::kC1;
    if (text == "C2") return SpinLabel::kC2;
    throw std::invalid_argument("unknown spin label '" + std::string(text) + "'");
}

std::string to_string(HamiltonianVariant v) {
    switch (v) {
        case HamiltonianVariant::kFull: return "full";
        case HamiltonianVariant::kNoXY: return "noxy";
        case HamiltonianVariant::kSimplified: return "simplified";
    }
    return "?";
}

std::string to_string(FrequencyConvention c) {
    return c == FrequencyConvention::kCycles ? "cycles" : "angular";
}

HamiltonianVariant parse_hamiltonian_variant(std::string_view text) {
    if (text == "full") return HamiltonianVariant::kFull;
    if (text == "noxy") return HamiltonianVariant::kNoXY;
    if (text == "simplified") return HamiltonianVariant::kSimplified;
    throw std::invalid_argument("unknown hamiltonian variant '" + std::string(text) + "'");
}

FrequencyConvention parse_convention(std::string_view text) {
    if (text == "angular") return FrequencyConvention::kAngular;
    if (text == "cycles") return FrequencyConvention::kCycles;
    throw std::invalid_argument("unknown frequency convention '" + std::string(text) + "'");
}

CMatrix embed_spin(const CMatrix& op, SpinLabel spin) {
    const int pos[] = {position(spin)};
    return embed_positions(op, pos, 3);
}

CMatrix embed_spins(const CMatrix& op, SpinLabel first, SpinLabel second) {
    const int pos[] = {position(first), position(second)};
    return embed_positions(op, pos, 3);
}

void HamiltonianModel::validate() const {
    for (double v : {j1, j2, j3, delta}) {
        if (!std::isfinite(v)) throw std::invalid_argument("HamiltonianModel: parameters must be finite");
    }
    if (!(j1 > 0.0) || !(j2 > 0.0)) {
        throw std::invalid_argument("HamiltonianModel: j1 and j2 must be positive");
    }
}

HamiltonianModel HamiltonianModel::with_exact_ratio() const {
    HamiltonianModel m = *this;
    m.j2 = j1 / 2;
    return m;
}

PulseSequence::PulseSequence(std::string name, std::vector<PulseInstruction> instructions,
                             std::optional<Relabeling> relabel)
    : name_(std::move(name)), instructions_(std::move(instructions)), relabel_(relabel) {
    for (const auto& p : instructions_) check_instruction(p);
}

double PulseSequence::total_delay() const {
    double t = 0.0;
    for (const auto& p : instructions_) {
        if (const auto* d = std::get_if<Delay>(&p)) t += d->duration;
    }
    return t;
}

void PulseSequence::append(const PulseInstruction& p) {
    check_instruction(p);
    instructions_.push_back(p);
}

void PulseSequence::append(const PulseSequence& other) {
    instructions_.insert(instructions_.end(), other.instructions_.begin(), other.instructions_.end());
}

HermitianOperator hamiltonian_matrix(const HamiltonianModel& model) {
    model.validate();
    const CMatrix zz = kron(pauli::z(), pauli::z());
    CMatrix h = model.j1_eff() / 4 * embed_spins(zz, SpinLabel::kH, SpinLabel::kC1) +
                model.j2_eff() / 4 * embed_spins(zz, SpinLabel::kC1, SpinLabel::kC2) +
                model.delta_eff() / 2 * embed_spin(pauli::z(), SpinLabel::kC2);
    if (model.variant != HamiltonianVariant::kSimplified) {
        h += model.j3_eff() / 4 * embed_spins(zz, SpinLabel::kH, SpinLabel::kC2);
    }
    if (model.variant == HamiltonianVariant::kFull) {
        const CMatrix xy = kron(pauli::x(), pauli::x()) + kron(pauli::y(), pauli::y());
        h += model.j2_eff() / 4 * embed_spins(xy, SpinLabel::kC1, SpinLabel::kC2);
    }
    return HermitianOperator(std::move(h));
}

UnitaryOperator pulse_unitary(const PulseInstruction& p, const HamiltonianModel& model) {
    check_instruction(p);
    return std::visit(
        [&model](const auto& ins) -> UnitaryOperator {
            using T = std::decay_t<decltype(ins)>;
            if constexpr (std::is_same_v<T, RotX>) {
                return UnitaryOperator(embed_spin(rotation_2x2(pauli::x(), ins.angle), ins.spin));
            } else if constexpr (std::is_same_v<T, RotY>) {
                return UnitaryOperator(embed_spin(rotation_2x2(pauli::y(), ins.angle), ins.spin));
            } else {
                return expm_hermitian(hamiltonian_matrix(model), ins.duration);
            }
        },
        p);
}

UnitaryOperator sequence_unitary(const PulseSequence& seq, const HamiltonianModel& model) {
    // One eigendecomposition serves every delay.
    const HermitianOperator h = hamiltonian_matrix(model);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
    const CMatrix& v = solver.eigenvectors();
    const Eigen::VectorXd& w = solver.eigenvalues();

    CMatrix u = CMatrix::Identity(8, 8);
    for (const auto& p : seq.instructions()) {
        if (const auto* d = std::get_if<Delay>(&p)) {
            CVector phases(8);
            for (int i = 0; i < 8; ++i) phases(i) = std::exp(Complex(0.0, -w(i) * d->duration));
            u = v * phases.asDiagonal() * v.adjoint() * u;
        } else {
            u = pulse_unitary(p, model).matrix() * u;
        }
    }
    return UnitaryOperator(std::move(u));
}

PulseSequence z_rotation_pulses(SpinLabel spin, double angle, int variant) {
    const double h = kPi / 2;
    std::vector<PulseInstruction> p;
    switch (variant) {
        case 1: p = {rotx(spin, h), roty(spin, angle), rotx(spin, -h)}; break;
        case 2: p = {rotx(spin, -h), roty(spin, -angle), rotx(spin, h)}; break;
        case 3: p = {roty(spin, -h), rotx(spin, angle), roty(spin, h)}; break;
        case 4: p = {roty(spin, h), rotx(spin, -angle), roty(spin, -h)}; break;
        default: throw std::invalid_argument("z_rotation_pulses: variant must be 1..4");
    }
    return PulseSequence("Z_" + to_string(spin), std::move(p));
}

PulseSequence hadamard_pulses(SpinLabel spin, int variant) {
    std::vector<PulseInstruction> p;
    switch (variant) {
        case 1: p = {rotx(spin, kPi), roty(spin, kPi / 2)}; break;
        case 2: p = {roty(spin, -kPi / 2), rotx(spin, -kPi)}; break;
        default: throw std::invalid_argument("hadamard_pulses: variant must be 1..2");
    }
    return PulseSequence("A_" + to_string(spin), std::move(p));
}

PulseSequence phase_gate_pulses(CoupledPair pair, double theta, const HamiltonianModel& model,
                                PhasedState phased) {
    model.validate();
    if (!std::isfinite(theta) || theta < 0.0) {
        throw std::invalid_argument("phase_gate_pulses: theta must be finite and >= 0");
    }
    const bool c1h = pair == CoupledPair::kC1H;
    const std::string name = c1h ? "B_C1H" : "B_C1C2";
    if (theta == 0.0) return PulseSequence(name, {});

    const SpinLabel other = c1h ? SpinLabel::kH : SpinLabel::kC2;
    const SpinLabel spectator = c1h ? SpinLabel::kC2 : SpinLabel::kH;
    const double j = c1h ? model.j1_eff() : model.j2_eff();
    const double tau = theta / (2 * j);

    // The echo leaves exp(-i theta Z Z / 4) on the pair.
    PulseSequence seq(name, {delay(tau), rotx(spectator, kPi), delay(tau), rotx(spectator, kPi)});

    const double z = phased == PhasedState::kAllZero ? -theta / 2 : theta / 2;
    seq.append(z_rotation_pulses(SpinLabel::kC1, z));
    // The offset term on C2 is not refocused by the H echo: it leaves
    // exp(-i delta tau Z_C2), undone by Z_C2(2 delta tau).
    const double other_angle = c1h ? z : z + 2 * model.delta_eff() * tau;
    seq.append(z_rotation_pulses(other, other_angle));
    return seq;
}

PulseSequence cnot_pulses(SpinLabel control, SpinLabel target, const HamiltonianModel& model) {
    if (!is_neighbor_pair(control, target)) {
        throw std::invalid_argument("cnot_pulses: only neighbouring spins (C1-H, C1-C2) are coupled");
    }
    const CoupledPair pair =
        (control == SpinLabel::kH || target == SpinLabel::kH) ? CoupledPair::kC1H : CoupledPair::kC1C2;
    PulseSequence seq = hadamard_pulses(target);
    // B(-pi) = B(pi) on |11>.
    seq.append(phase_gate_pulses(pair, kPi, model, PhasedState::kAllOne));
    seq.append(hadamard_pulses(target));
    seq.set_name("C_" + to_string(control) + to_string(target));
    return seq;
}

PulseSequence swap_pulses(SpinLabel a, SpinLabel b, const HamiltonianModel& model) {
    if (!is_neighbor_pair(a, b)) {
        throw std::invalid_argument("swap_pulses: only neighbouring spins (C1-H, C1-C2) are coupled");
    }
    PulseSequence seq = cnot_pulses(a, b, model);
    seq.append(cnot_pulses(b, a, model));
    seq.append(cnot_pulses(a, b, model));
    seq.set_name("S_" + to_string(a) + to_string(b));
    return seq;
}

UnitaryOperator nmr_phase_gate(SpinLabel a, SpinLabel b, double theta) {
    if (a == b) throw std::invalid_argument("nmr_phase_gate: spins must differ");
    CMatrix d = CMatrix::Identity(4, 4);
    d(0, 0) = std::exp(Complex(0.0, theta));
    return UnitaryOperator(embed_spins(d, a, b));
}

UnitaryOperator phase_gate_11(SpinLabel a, SpinLabel b, double theta) {
    if (a == b) throw std::invalid_argument("phase_gate_11: spins must differ");
    CMatrix d = CMatrix::Identity(4, 4);
    d(3, 3) = std::exp(Complex(0.0, theta));
    return UnitaryOperator(embed_spins(d, a, b));
}

UnitaryOperator hadamard_on(SpinLabel s) {
    CMatrix h(2, 2);
    h << 1, 1, 1, -1;
    return UnitaryOperator(embed_spin(h / std::sqrt(2.0), s));
}

UnitaryOperator swap_on(SpinLabel a, SpinLabel b) {
    if (a == b) throw std::invalid_argument("swap_on: spins must differ");
    CMatrix s = CMatrix::Zero(4, 4);
    s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
    return UnitaryOperator(embed_spins(s, a, b));
}

Timescales timescales(const HamiltonianModel& model) {
    model.validate();
    const double t1 = kPi / (2 * model.j1_eff());
    return {t1, 2 * t1, t1 / 2, 21 * t1 / 16, t1 / 2};
}

// The canned sequences below are listed in execution order, i.e. reversed
// with respect to the right-to-left operator products they implement.

PulseSequence t_odd(const HamiltonianModel& model) {
    const auto ts = timescales(model);
    const double t1 = ts.tau1;
    const double d = model.delta_eff();
    using S = SpinLabel;
    std::vector<PulseInstruction> p = {
        delay(t1),
        roty(S::kC1, -kPi / 2),
        rotx(S::kC1, -11 * kPi / 8),
        roty(S::kH, -kPi / 2),
        rotx(S::kH, -5 * kPi / 4),
        rotx(S::kC2, kPi / 2),
        roty(S::kC2, d * t1 - kPi / 8),
        rotx(S::kC2, kPi / 2),
        delay(t1),
        rotx(S::kC2, kPi),
        delay(t1),
        roty(S::kC1, -kPi / 2),
        roty(S::kH, -kPi / 2),
        rotx(S::kC1, -3 * kPi / 2),
        rotx(S::kH, -3 * kPi / 2),
        delay(t1),
        rotx(S::kC2, kPi),
        delay(t1),
        roty(S::kC1, -kPi / 2),
        roty(S::kH, -kPi / 2),
        rotx(S::kC1, -3 * kPi / 2),
        rotx(S::kH, -3 * kPi / 2),
        delay(t1),
        rotx(S::kC2, kPi),
        delay(t1),
        roty(S::kC1, -kPi / 2),
        rotx(S::kC1, -kPi / 2),
        roty(S::kC1, kPi / 2),
        roty(S::kH, -kPi / 2),
        rotx(S::kH, -3 * kPi / 2),
    };
    // Logical qubit 0 stays on C1; bits 1 and 2 trade H and C2.
    return PulseSequence("t_odd", std::move(p),
                         Relabeling{{S::kC1, S::kH, S::kC2}, {S::kC1, S::kC2, S::kH}});
}

PulseSequence t_even_as_printed(const HamiltonianModel& model) {
    const auto ts = timescales(model);
    const double t2 = ts.tau2;
    const double t3 = ts.tau3;
    const double d = model.delta_eff();
    using S = SpinLabel;
    std::vector<PulseInstruction> p = {
        delay(5 * t3 / 2),
        rotx(S::kH, kPi),
        delay(3 * t3 / 2),
        roty(S::kC1, -kPi / 2),
        rotx(S::kC1, -11 * kPi / 8),
        roty(S::kC2, -kPi / 2),
        rotx(S::kC2, 4 * d * t3 - 5 * kPi / 4),
        rotx(S::kH, -kPi / 2),
        roty(S::kH, -kPi / 8),
        rotx(S::kH, kPi / 2),
        delay(t2),
        rotx(S::kC1, kPi),
        delay(t2),
        roty(S::kC2, -kPi / 2),
        roty(S::kC1, -kPi / 2),
        rotx(S::kC2, 2 * d * t2 - 3 * kPi / 2),
        rotx(S::kC1, -3 * kPi / 2),
        delay(t2),
        rotx(S::kC1, kPi),
        delay(t2),
        roty(S::kC2, -kPi / 2),
        roty(S::kC1, -kPi / 2),
        rotx(S::kC2, 2 * d * t2 - 3 * kPi / 2),
        rotx(S::kC1, -3 * kPi / 2),
        delay(t2),
        rotx(S::kH, kPi),
        delay(t2),
        roty(S::kC1, kPi / 2),
        rotx(S::kC1, kPi / 2),
        roty(S::kC1, kPi / 2),
        roty(S::kC2, kPi / 2),
        rotx(S::kC2, 2 * d * t2 - 3 * kPi / 2),
    };
    return PulseSequence("t_even_as_printed", std::move(p),
                         Relabeling{{S::kC1, S::kC2, S::kH}, {S::kC1, S::kH, S::kC2}});
}

PulseSequence t_even(const HamiltonianModel& model) {
    const PulseSequence printed = t_even_as_printed(model);
    std::vector<PulseInstruction> p = printed.instructions();
    // The C1-C2 couplings must be isolated with an H echo; a C1 echo
    // refocuses both couplings of C1 and no entangling phase survives.
    p[11] = rotx(SpinLabel::kH, kPi);
    p[18] = rotx(SpinLabel::kH, kPi);
    // The closing Hadamards on C1 and C2 need the opposite y sense.
    p[29] = roty(SpinLabel::kC1, -kPi / 2);
    p[30] = roty(SpinLabel::kC2, -kPi / 2);
    return PulseSequence("t_even", std::move(p), printed.relabel());
}

PulseSequence t_regular(const HamiltonianModel& model) {
    const double t4 = timescales(model).tau4;
    std::vector<PulseInstruction> p;
    for (int k = 0; k < 8; ++k) {
        p.push_back(delay(t4));
        p.push_back(rotx(SpinLabel::kC1, kPi));
    }
    return PulseSequence("t_regular", std::move(p));
}

PulseSequence full_baker_appendix(const HamiltonianModel& model) {
    const double tau = timescales(model).tau_appendix;
    const double d = model.delta_eff();
    using S = SpinLabel;
    std::vector<PulseInstruction> p = {
        rotx(S::kH, kPi / 4),
        roty(S::kH, kPi / 2),
        delay(3 * tau),
        rotx(S::kC2, kPi),
        delay(3 * tau),
        roty(S::kC1, -kPi / 2),
        rotx(S::kC1, -5 * kPi / 4),
        roty(S::kC1, -kPi / 4),
        rotx(S::kC1, -kPi / 2),
        rotx(S::kC2, 4 * d * tau - kPi / 4),
        roty(S::kC2, kPi / 2),
        delay(2 * tau),
        rotx(S::kH, kPi),
        delay(2 * tau),
        roty(S::kH, kPi / 2),
        delay(2 * tau),
        rotx(S::kC2, kPi),
        delay(2 * tau),
        roty(S::kC1, -kPi / 2),
        rotx(S::kC1, -3 * kPi / 2),
        roty(S::kH, -kPi / 2),
        rotx(S::kH, -3 * kPi / 2),
        delay(2 * tau),
        rotx(S::kC2, kPi),
        delay(2 * tau),
        rotx(S::kH, kPi / 2),
        rotx(S::kC1, kPi / 2),
        delay(2 * tau),
        rotx(S::kC2, kPi),
        delay(2 * tau),
        rotx(S::kC2, kPi / 2),
        roty(S::kC2, kPi / 8 - 2 * d * tau),
        rotx(S::kC2, kPi / 2),
        delay(tau),
        rotx(S::kH, kPi),
        delay(tau),
        rotx(S::kC1, -kPi / 2),
        roty(S::kC1, kPi / 8),
        rotx(S::kH, kPi / 2),
        roty(S::kH, kPi / 4),
        rotx(S::kH, kPi / 2),
        rotx(S::kC1, kPi / 2),
        delay(tau),
        rotx(S::kC2, kPi),
        delay(tau),
        rotx(S::kC2, -kPi / 2),
        roty(S::kC2, 8 * d * tau - kPi / 2),
        rotx(S::kC1, kPi / 2),
        roty(S::kC1, -3 * kPi / 4),
        rotx(S::kC2, -kPi / 2),
        rotx(S::kC1, -kPi / 2),
        delay(4 * tau),
        rotx(S::kH, kPi),
        delay(4 * tau),
        rotx(S::kC2, kPi),
        rotx(S::kC1, kPi),
        roty(S::kC2, kPi / 2),
        roty(S::kC1, kPi / 2),
        delay(4 * tau),
        rotx(S::kH, kPi),
        delay(4 * tau),
        rotx(S::kC2, kPi / 2),
        rotx(S::kC1, kPi / 2),
        roty(S::kC2, 8 * tau * d - kPi / 2),
        rotx(S::kC2, 8 * tau * d),
        roty(S::kC2, kPi / 2),
        delay(4 * tau),
        rotx(S::kH, kPi),
        delay(4 * tau),
        rotx(S::kC1, kPi),
        rotx(S::kH, kPi),
        roty(S::kC1, kPi / 2),
    };
    // Bit 0 on H, bit 1 on C1, bit 2 on C2 throughout.
    return PulseSequence("full_baker", std::move(p),
                         Relabeling{{S::kH, S::kC1, S::kC2}, {S::kH, S::kC1, S::kC2}});
}

UnitaryOperator ideal_t_odd() {
    using S = SpinLabel;
    return swap_on(S::kC1, S::kH) * hadamard_on(S::kC1) * nmr_phase_gate(S::kC1, S::kC2, -kPi / 4) *
           nmr_phase_gate(S::kC1, S::kH, -kPi / 2);
}

UnitaryOperator ideal_t_even() {
    using S = SpinLabel;
    return swap_on(S::kC1, S::kC2) * hadamard_on(S::kC1) * nmr_phase_gate(S::kC1, S::kH, -kPi / 4) *
           nmr_phase_gate(S::kC1, S::kC2, -kPi / 2);
}

UnitaryOperator ideal_t_regular(const HamiltonianModel& model) {
    const double t4 = timescales(model).tau4;
    const double phi = -4 * model.delta_eff() * t4;
    CMatrix z = CMatrix::Zero(2, 2);
    z(0, 0) = std::exp(Complex(0.0, phi));
    z(1, 1) = std::exp(Complex(0.0, -phi));
    return UnitaryOperator(embed_spin(z, SpinLabel::kC2));
}

UnitaryOperator ideal_full_baker_appendix() {
    using S = SpinLabel;
    // Gate product with bit 0 = H, bit 1 = C1, bit 2 = C2, rightmost first.
    const S b0 = S::kH, b1 = S::kC1, b2 = S::kC2;
    return swap_on(b1, b2) * hadamard_on(b1) * nmr_phase_gate(b0, b1, -kPi / 2) *
           nmr_phase_gate(b1, b2, -kPi / 4) * hadamard_on(b0) * swap_on(b0, b1) *
           nmr_phase_gate(b1, b2, -kPi / 2) * hadamard_on(b2) * hadamard_on(b1) *
           nmr_phase_gate(b0, b1, kPi / 2) * hadamard_on(b0);
}

SequenceCheck verify_sequence(const PulseSequence& seq, const UnitaryOperator& target,
                              const HamiltonianModel& model, double tol) {
    const double dist = phase_invariant_distance(sequence_unitary(seq, model), target);
    return {seq.name(), dist, tol, dist < tol};
}

}  // namespace bakersim
