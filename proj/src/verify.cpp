#include "bakersim/verify.hpp"

#include "bakersim/baker.hpp"
#include "bakersim/chaos.hpp"
#include "bakersim/lindblad.hpp"
#include "bakersim/nmr.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace bakersim {

namespace {

void add(std::vector<VerifyCheck>& out, std::string name, double value, double tol) {
    out.push_back({std::move(name), value, tol, value < tol});
}

double worst_shift_error(MapVariant variant) {
    const UnitaryOperator t = variant == MapVariant::kFull
                                  ? gate_sequence_unitary(baker_gate_sequence(), 3)
                                  : gate_sequence_unitary(simplified_baker_gate_sequence(), 3);
    double worst = 0.0;
    for (unsigned j = 0; j < 8; ++j) {
        const BitString bits = BitString::from_index(j, 3);
        const double f =
            fidelity(shift_image_state(bits, variant), apply(t, shift_domain_state(bits, variant)));
        worst = std::max(worst, 1.0 - f);
    }
    return worst;
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

std::vector<VerifyCheck> run_verification_suite() {
    std::vector<VerifyCheck> out;

    // Gate level.
    add(out, "baker_gate_product_vs_closed_form",
        phase_invariant_distance(gate_sequence_unitary(baker_gate_sequence(), 3), baker_unitary(3)), 1e-10);
    const UnitaryOperator s01 = gate_unitary(SwapGate{0, 1}, 3);
    add(out, "neighbor_sequence_vs_conjugated_map",
        phase_invariant_distance(gate_sequence_unitary(neighbor_baker_gate_sequence(), 3),
                                 s01 * baker_unitary(3) * s01),
        1e-10);
    add(out, "shift_property_full", worst_shift_error(MapVariant::kFull), 1e-10);
    add(out, "shift_property_simplified", worst_shift_error(MapVariant::kSimplified), 1e-10);

    // Pulse level, j2 = j1/2 exactly, simplified Hamiltonian.
    HamiltonianModel exact;
    exact.variant = HamiltonianVariant::kSimplified;
    exact = exact.with_exact_ratio();
    const Timescales ts = timescales(exact);

    add(out, "t_odd_vs_ideal", verify_sequence(t_odd(exact), ideal_t_odd(), exact, 1e-8).distance, 1e-8);
    add(out, "t_even_vs_ideal", verify_sequence(t_even(exact), ideal_t_even(), exact, 1e-8).distance, 1e-8);
    add(out, "t_regular_vs_ideal",
        verify_sequence(t_regular(exact), ideal_t_regular(exact), exact, 1e-10).distance, 1e-10);
    add(out, "appendix_vs_ideal",
        verify_sequence(full_baker_appendix(exact), ideal_full_baker_appendix(), exact, 1e-7).distance, 1e-7);
    add(out, "t_odd_total_delay", std::abs(t_odd(exact).total_delay() - 7 * ts.tau1) / ts.tau1, 1e-12);
    add(out, "t_even_total_delay", std::abs(t_even(exact).total_delay() - 14 * ts.tau1) / ts.tau1, 1e-12);
    add(out, "t_regular_total_delay", std::abs(t_regular(exact).total_delay() - 10.5 * ts.tau1) / ts.tau1, 1e-12);

    const double theta = 0.7;
    CMatrix zt = CMatrix::Zero(2, 2);
    zt(0, 0) = std::exp(Complex(0.0, theta / 2));
    zt(1, 1) = std::exp(Complex(0.0, -theta / 2));
    double z_worst = 0.0;
    for (int v = 1; v <= 4; ++v) {
        z_worst = std::max(z_worst, phase_invariant_distance(sequence_unitary(z_rotation_pulses(SpinLabel::kC1, theta, v), exact),
                                                             UnitaryOperator(embed_spin(zt, SpinLabel::kC1))));
    }
    add(out, "z_rotation_variants", z_worst, 1e-12);
    double a_worst = 0.0;
    for (int v = 1; v <= 2; ++v) {
        a_worst = std::max(a_worst, phase_invariant_distance(sequence_unitary(hadamard_pulses(SpinLabel::kH, v), exact),
                                                             hadamard_on(SpinLabel::kH)));
    }
    add(out, "hadamard_variants", a_worst, 1e-12);
    add(out, "phase_gate_c1h",
        phase_invariant_distance(sequence_unitary(phase_gate_pulses(CoupledPair::kC1H, kPi / 2, exact), exact),
                                 phase_gate_11(SpinLabel::kC1, SpinLabel::kH, -kPi / 2)),
        1e-8);
    add(out, "phase_gate_c1c2",
        phase_invariant_distance(sequence_unitary(phase_gate_pulses(CoupledPair::kC1C2, kPi / 4, exact), exact),
                                 phase_gate_11(SpinLabel::kC1, SpinLabel::kC2, -kPi / 4)),
        1e-8);
    add(out, "swap_c1h",
        phase_invariant_distance(sequence_unitary(swap_pulses(SpinLabel::kC1, SpinLabel::kH, exact), exact),
                                 swap_on(SpinLabel::kC1, SpinLabel::kH)),
        1e-8);
    add(out, "swap_c1c2",
        phase_invariant_distance(sequence_unitary(swap_pulses(SpinLabel::kC1, SpinLabel::kC2, exact), exact),
                                 swap_on(SpinLabel::kC1, SpinLabel::kC2)),
        1e-8);

    const PulseSequence odd = t_odd();
    add(out, "pulse_format_round_trip",
        parse_pulse_sequence(format_pulse_sequence(odd, FrequencyConvention::kAngular)) == odd ? 0.0 : 1.0, 0.5);

    // Open system, fig2 noise with the default Hamiltonian.
    const ExperimentConfig fig2 = ExperimentConfig::preset_named("fig2");
    const EvolutionEngine expm_engine(fig2.hamiltonian, fig2.noise());
    const EvolutionEngine rk4_engine(fig2.hamiltonian, fig2.noise(), IntegrationMethod::kRk4);
    double rk4_gap = 0.0;
    for (const PulseSequence& seq : {t_odd(fig2.hamiltonian), t_even(fig2.hamiltonian), t_regular(fig2.hamiltonian)}) {
        for (const auto& p : seq.instructions()) {
            if (const auto* d = std::get_if<Delay>(&p)) {
                rk4_gap = std::max(rk4_gap, max_abs(expm_engine.delay_propagator(d->duration) -
                                                    rk4_engine.delay_propagator(d->duration)));
            }
        }
    }
    add(out, "expm_vs_rk4_propagators", rk4_gap, 1e-6);

    NoiseModel one_spin{0.0, 0.0, 2.5};
    HamiltonianModel idle;
    idle.variant = HamiltonianVariant::kSimplified;
    const EvolutionEngine idle_engine(idle, one_spin);
    const double t_idle = 0.13;
    CVector plus(8);
    plus.setZero();
    plus(0) = plus(1) = 1.0;  // C2 in (|0> + |1>)/sqrt 2
    const DensityMatrix rho_plus = DensityMatrix::from_pure(StateVector(plus));
    const CMatrix evolved = apply_superoperator(idle_engine.delay_propagator(t_idle), rho_plus.matrix());
    add(out, "analytic_dephasing",
        std::abs(std::abs(evolved(0, 1)) - 0.5 * std::exp(-2 * one_spin.gamma_c2 * t_idle)), 1e-8);

    ExperimentConfig run6 = fig2;
    double trace_drift = 0.0;
    double min_eig = 1.0;
    {
        DensityMatrix rho = DensityMatrix::from_pure(initial_state());
        for (DynamicsMap m : {DynamicsMap::kChaotic, DynamicsMap::kRegular}) {
            rho = DensityMatrix::from_pure(initial_state());
            for (int n = 1; n <= run6.steps; ++n) {
                rho = run_sequence(rho, step_sequence(m, n, run6.hamiltonian), expm_engine);
                trace_drift = std::max(trace_drift, std::abs(rho.matrix().trace() - 1.0));
                min_eig = std::min(min_eig, rho.eigenvalues().minCoeff());
            }
        }
    }
    add(out, "fig2_trace_drift", trace_drift, 1e-9);
    add(out, "fig2_min_eigenvalue_deficit", std::max(0.0, -min_eig), 1e-9);

    // Information bound over every grouping of the fig5 chaotic ensemble.
    const ExperimentConfig fig5 = ExperimentConfig::preset_named("fig5");
    const auto points = exhaustive_scan(history_ensemble(fig5, fig5.steps));
    double worst_bound = 0.0;
    for (const auto& p : points) worst_bound = std::max(worst_bound, p.delta_s - p.information);
    add(out, "information_bound_all_partitions", std::max(0.0, worst_bound), 1e-12);

    return out;
}

std::string format_verification_table(const std::vector<VerifyCheck>& checks) {
    std::size_t width = 5;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    std::string out = fmt::format("{:<{}}  {:>24}  {:>10}  {}\n", "check", width, "value", "tolerance", "result");
    for (const auto& c : checks) {
        out += fmt::format("{:<{}}  {:>24.17g}  {:>10.3g}  {}\n", c.name, width, c.value, c.tolerance,
                           c.pass ? "pass" : "FAIL");
    }
    return out;
}

}  // namespace bakersim
