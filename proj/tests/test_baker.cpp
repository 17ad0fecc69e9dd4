#include "bakersim/baker.hpp"

#include <doctest.h>

using namespace bakersim;

namespace {
double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("single gates") {
    const UnitaryOperator b = gate_unitary(PhaseGate{0, 1, kPi / 2}, 2);
    CHECK(std::abs(b.matrix()(3, 3) - Complex(0, 1)) < 1e-15);
    CHECK(std::abs(b.matrix()(1, 1) - 1.0) < 1e-15);
    CHECK(std::abs(b.matrix()(2, 2) - 1.0) < 1e-15);

    for (int m = 0; m < 3; ++m) {
        const UnitaryOperator a = gate_unitary(Hadamard{m}, 3);
        CHECK(max_abs((a * a).matrix() - CMatrix::Identity(8, 8)) < 1e-15);
    }

    const UnitaryOperator s = gate_unitary(SwapGate{0, 1}, 2);
    const StateVector out = apply(s, StateVector::basis(4, 1));
    CHECK(std::abs(out.amplitudes()(2) - 1.0) < 1e-15);

    CHECK_THROWS_AS(gate_unitary(Hadamard{3}, 3), std::invalid_argument);
    CHECK_THROWS_AS(gate_unitary(SwapGate{1, 1}, 3), std::invalid_argument);
    CHECK_THROWS_AS(gate_unitary(PhaseGate{0, 2, 0.1}, 2), std::invalid_argument);
}

TEST_CASE("phase gates commute exactly") {
    const UnitaryOperator p = gate_unitary(PhaseGate{0, 1, 0.37}, 3);
    const UnitaryOperator q = gate_unitary(PhaseGate{1, 2, -1.9}, 3);
    CHECK(max_abs((p * q).matrix() - (q * p).matrix()) == 0.0);
}

TEST_CASE("closed-form map") {
    for (int n : {2, 3, 4}) {
        const CMatrix t = baker_unitary(n).matrix();
        CHECK(max_abs(t.adjoint() * t - CMatrix::Identity(t.rows(), t.cols())) < 1e-12);
    }
    CHECK_THROWS_AS(baker_unitary(1), std::invalid_argument);

    // Direct construction from the DFT definition, without dft_matrix.
    const int dim = 8, half = 4;
    CMatrix finv(dim, dim), fhalf(half, half);
    for (int k = 0; k < dim; ++k)
        for (int j = 0; j < dim; ++j) finv(k, j) = std::polar(1.0 / std::sqrt(8.0), -2 * kPi * k * j / dim);
    for (int k = 0; k < half; ++k)
        for (int j = 0; j < half; ++j) fhalf(k, j) = std::polar(0.5, 2 * kPi * k * j / half);
    CMatrix block = CMatrix::Zero(dim, dim);
    block.topLeftCorner(half, half) = fhalf;
    block.bottomRightCorner(half, half) = fhalf;
    CHECK(max_abs(baker_unitary(3).matrix() - finv * block) < 1e-12);
}

TEST_CASE("gate sequences") {
    CHECK(baker_gate_sequence().size() == 11);
    CHECK(simplified_baker_gate_sequence().size() == 5);
    CHECK(phase_invariant_distance(gate_sequence_unitary(baker_gate_sequence(), 3), baker_unitary(3)) < 1e-10);
    CHECK_THROWS_AS(baker_gate_sequence(4), std::invalid_argument);
    CHECK_THROWS_AS(simplified_baker_gate_sequence(2), std::invalid_argument);

    // the rightmost printed gate runs first
    CHECK(baker_gate_sequence().front() == GateSpec{Hadamard{1}});
    CHECK(baker_gate_sequence().back() == GateSpec{SwapGate{0, 2}});
    CHECK(simplified_baker_gate_sequence().back() == GateSpec{SwapGate{0, 1}});

    for (const auto& g : baker_gate_sequence()) {
        const CMatrix u = gate_unitary(g, 3).matrix();
        CHECK(max_abs(u.adjoint() * u - CMatrix::Identity(8, 8)) < 1e-12);
    }

    const UnitaryOperator tm = gate_sequence_unitary(simplified_baker_gate_sequence(), 3);
    CHECK(max_abs(tm.matrix().adjoint() * tm.matrix() - CMatrix::Identity(8, 8)) < 1e-12);

    CVector plus(2);
    plus << 1, 1;
    plus /= std::sqrt(2.0);
    CVector zero(2);
    zero << 1, 0;
    // the T_M domain state keeps |a_2> on qubit 0, the least significant factor
    const CVector domain = kron(kron(plus, plus), zero);
    CHECK(max_abs(domain - shift_domain_state(BitString::from_index(0, 3), MapVariant::kSimplified).amplitudes()) <
          1e-15);
    const CVector image = kron(kron(plus, plus), plus);
    const StateVector mapped = apply(tm, StateVector(domain));
    CHECK(std::abs(std::abs(mapped.amplitudes().dot(image)) - 1.0) < 1e-12);

    const std::string dump = format_gate_sequence(simplified_baker_gate_sequence(), "tm");
    CHECK(dump.find("execution order") != std::string::npos);
}

TEST_CASE("shift states") {
    CVector plus(2);
    plus << 1, 1;
    plus /= std::sqrt(2.0);
    CVector zero(2);
    zero << 1, 0;
    const StateVector d000 = shift_domain_state(BitString::from_index(0, 3), MapVariant::kFull);
    CHECK(max_abs(d000.amplitudes() - kron(kron(zero, plus), plus)) < 1e-15);

    const StateVector i000 = shift_image_state(BitString::from_index(0, 3), MapVariant::kFull);
    CHECK(max_abs(i000.amplitudes() - kron(kron(plus, plus), plus)) < 1e-15);

    // 001: least significant factor picks up e^{-2 pi i 0.01b} = e^{-i pi/2}
    const StateVector d001 = shift_domain_state(BitString::from_index(1, 3), MapVariant::kFull);
    const CVector& a = d001.amplitudes();
    CHECK(std::abs(a(1) / a(0) - std::exp(Complex(0, -kPi / 2))) < 1e-14);

    const UnitaryOperator t = baker_unitary(3);
    const UnitaryOperator tm = gate_sequence_unitary(simplified_baker_gate_sequence(), 3);
    for (unsigned j = 0; j < 8; ++j) {
        const BitString b = BitString::from_index(j, 3);
        for (auto v : {MapVariant::kFull, MapVariant::kSimplified}) {
            CHECK(shift_domain_state(b, v).amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-14));
        }
        CHECK(fidelity(shift_image_state(b, MapVariant::kFull), apply(t, shift_domain_state(b, MapVariant::kFull))) >
              1 - 1e-10);
        CHECK(fidelity(shift_image_state(b, MapVariant::kSimplified),
                       apply(tm, shift_domain_state(b, MapVariant::kSimplified))) > 1 - 1e-10);
    }
}

TEST_CASE("BitString") {
    const BitString b = BitString::from_index(6, 3);
    CHECK(b.to_string() == "110");
    CHECK(b.bit(0) == 0);
    CHECK(b.bit(2) == 1);
    CHECK(b.index() == 6);
    CHECK_THROWS_AS(BitString({}), std::invalid_argument);
    CHECK_THROWS_AS(BitString({0, 2}), std::invalid_argument);
}
