#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qadapt/fcidump.hpp"
#include "qadapt/hamiltonian.hpp"
#include "qadapt/noise.hpp"
#include "qadapt/staircase.hpp"

using namespace qadapt;

TEST_CASE("unphysical models are rejected at construction") {
    CHECK_THROWS_AS(NoiseModel(100.0, 250.0, 1.0), std::invalid_argument);
    CHECK_NOTHROW(NoiseModel(100.0, 200.0, 1.0));
    CHECK_NOTHROW(NoiseModel(100.0, 150.0, 7.5));
}

TEST_CASE("zero-duration instructions add no noise") {
    NoiseModel model(100.0, 150.0, 1.0);
    Circuit c(2);
    c.add(Gate::h(0));       // build coherence first (noisily)
    auto ref = run_circuit_noisy(c, model);

    Circuit c2(2);
    c2.add(Gate::h(0));
    c2.add(Gate::rz(0.7, 0));  // U1 class, 0 ns
    auto got = run_circuit_noisy(c2, model);

    DensityState check = ref;
    check.apply_unitary1(0, gate_unitary2(Gate::rz(0.7, 0)));
    CHECK((got.rho() - check.rho()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("amplitude damping closed form at t = T1") {
    NoiseModel model(100.0, 150.0, 1.0);
    auto state = DensityState::computational_basis(1, 1);
    apply_thermal_relaxation(state, 0, model.t1_ns(), model);
    CHECK(state.rho()(1, 1).real() == Catch::Approx(std::exp(-1.0)).margin(1e-12));
    CHECK(state.trace_real() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("coherence decays with the T2 rate") {
    NoiseModel model(100.0, 150.0, 1.0);
    auto state = DensityState(1);
    state.apply_unitary1(0, gate_unitary2(Gate::h(0)));
    const double t = 40000.0;  // 40 us
    apply_thermal_relaxation(state, 0, t, model);
    const double expected = 0.5 * std::exp(-t / model.t2_ns());
    CHECK(state.rho()(0, 1).real() == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("prep-then-measure matches the closed-form channel composition") {
    NoiseModel model(100.0, 150.0, 1.0);
    Circuit c(2);
    c.add(Gate::x(0));
    QubitOperator h(2);
    h.add_term(PauliString::parse("Z0", 2), 1.0);
    auto est = measure_energy_noisy(c, h, model, 0, 0);
    const double t_total = model.times.u3 + model.times.measure;
    const double p1 = std::exp(-t_total / model.t1_ns());
    CHECK(est.value == Catch::Approx(1.0 - 2.0 * p1).margin(1e-12));
}

TEST_CASE("trace preserved and spectrum positive through a noisy circuit") {
    NoiseModel model(100.0, 150.0, 2.0);
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> angle(-2.0, 2.0);
    DensityState state(3);
    std::vector<Gate> gates = {Gate::x(0),          Gate::h(1),
                               Gate::cx(0, 1),      Gate::rx(angle(rng), 2),
                               Gate::cx(1, 2),      Gate::rz(angle(rng), 2),
                               Gate::u2(0.3, -0.8, 0), Gate::cx(2, 0)};
    for (const auto& g : gates) {
        apply_gate_noisy(state, g, model);
        CHECK(state.trace_real() == Catch::Approx(1.0).margin(1e-10));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(state.rho(),
                                                       Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(0) >= -1e-8);
    CHECK((state.rho() - state.rho().adjoint()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("alpha to infinity reproduces the statevector engine") {
    auto m = parse_fcidump_file(std::string(QADAPT_FIXTURE_DIR) + "/h2.fcidump");
    auto eff = build_effective_hamiltonian(m, ActiveSpaceSpec::full(2));
    auto ham = jordan_wigner(eff.op);

    std::vector<AnsatzLayer> layers{{PauliString::parse("X0 Y1 X2 X3", 4), 0.223},
                                    {PauliString::parse("Z0 Y2", 4), -0.41}};
    auto circuit = build_state_circuit(4, 0b0011, layers);

    NoiseModel model(100.0, 150.0, 1e9);
    auto noisy = measure_energy_noisy(circuit, ham, model, 0, 0);

    auto sv = QuantumState::from_reference(hartree_fock_reference(4, 2));
    for (const auto& l : layers) apply_pauli_exponential(sv, l.pauli, l.theta);
    CHECK(noisy.value == Catch::Approx(expectation_exact(sv, ham)).margin(1e-8));
}

TEST_CASE("energy error is monotone over a geometric alpha grid") {
    auto m = parse_fcidump_file(std::string(QADAPT_FIXTURE_DIR) + "/h2.fcidump");
    auto eff = build_effective_hamiltonian(m, ActiveSpaceSpec::full(2));
    auto ham = jordan_wigner(eff.op);
    std::vector<AnsatzLayer> layers{{PauliString::parse("X0 Y1 X2 X3", 4), 0.12}};
    auto circuit = build_state_circuit(4, 0b0011, layers);

    auto sv = QuantumState::from_reference(hartree_fock_reference(4, 2));
    for (const auto& l : layers) apply_pauli_exponential(sv, l.pauli, l.theta);
    const double exact = expectation_exact(sv, ham);

    double prev_err = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 8; ++k) {
        NoiseModel model(100.0, 150.0, std::pow(2.0, k));
        auto est = measure_energy_noisy(circuit, ham, model, 0, 0);
        const double err = std::abs(est.value - exact);
        CHECK(err <= prev_err + 1e-12);
        prev_err = err;
    }
}

TEST_CASE("sampled noisy estimates are reproducible") {
    NoiseModel model(100.0, 150.0, 5.0);
    Circuit c(2);
    c.add(Gate::x(0));
    c.add(Gate::h(1));
    QubitOperator h(2);
    h.add_term(PauliString::parse("Z0", 2), 0.7);
    h.add_term(PauliString::parse("X1", 2), -0.2);
    auto a = measure_energy_noisy(c, h, model, 500, 42);
    auto b = measure_energy_noisy(c, h, model, 500, 42);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(a.n_terms_measured == 2);
    CHECK_THROWS_AS(measure_energy_noisy(c, h, model, 1, 0), std::domain_error);
}

TEST_CASE("density state size limit") {
    CHECK_THROWS_AS(DensityState(11), std::domain_error);
}
