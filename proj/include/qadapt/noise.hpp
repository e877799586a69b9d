#pragma once

// Density-matrix simulation with per-instruction thermal relaxation.
// After each gate's unitary, every qubit the gate touches relaxes for the
// gate's duration: amplitude damping p_ad = 1 - exp(-t/T1) composed with pure
// dephasing p_pd = 1 - exp(-t/T_phi), 1/T_phi = 1/T2 - 1/(2 T1). The scale
// alpha multiplies both coherence times. Idle qubits do not decay during
// other qubits' gates.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

#include "qadapt/circuit.hpp"
#include "qadapt/pauli.hpp"
#include "qadapt/rng.hpp"
#include "qadapt/statevector.hpp"

namespace qadapt {

inline constexpr uint32_t kDensityMaxQubits = 10;

struct InstructionTimesNs {
    double u1 = 0.0;
    double u2 = 50.0;
    double u3 = 100.0;
    double cx = 300.0;
    double reset = 1000.0;
    double measure = 1000.0;
};

struct NoiseModel {
    double t1_us = 100.0;
    double t2_us = 150.0;
    double alpha = 1.0;   // T1 = alpha * t1_us, T2 = alpha * t2_us
    InstructionTimesNs times;

    NoiseModel() = default;
    NoiseModel(double t1, double t2, double a, InstructionTimesNs t = {})
        : t1_us(t1), t2_us(t2), alpha(a), times(t) {
        validate();
    }

    void validate() const {
        if (t1_us <= 0 || t2_us <= 0 || alpha < 0)
            throw std::invalid_argument("noise model: times and alpha must be positive");
        if (t2_us > 2.0 * t1_us + 1e-12)
            throw std::invalid_argument("noise model: requires T2 <= 2*T1");
        if (times.u1 < 0 || times.u2 < 0 || times.u3 < 0 || times.cx < 0 ||
            times.reset < 0 || times.measure < 0)
            throw std::invalid_argument("noise model: negative instruction time");
    }

    double t1_ns() const { return alpha * t1_us * 1000.0; }
    double t2_ns() const { return alpha * t2_us * 1000.0; }

    /// Duration classes: phase-type gates are free, H and RX(+/-pi/2) count
    /// as U2, general one-qubit rotations as U3.
    double gate_time_ns(const Gate& g) const {
        switch (g.kind) {
            case GateKind::RZ:
            case GateKind::S:
            case GateKind::Sdg:
            case GateKind::U1: return times.u1;
            case GateKind::H:
            case GateKind::U2: return times.u2;
            case GateKind::RX: {
                const double a = std::abs(g.p0);
                return std::abs(a - M_PI_2) < 1e-9 ? times.u2 : times.u3;
            }
            case GateKind::X:
            case GateKind::U3: return times.u3;
            case GateKind::CX: return times.cx;
        }
        return times.u3;
    }
};

class DensityState {
  public:
    explicit DensityState(uint32_t n_qubits)
        : n_(n_qubits), rho_(Eigen::MatrixXcd::Zero(uint64_t{1} << n_qubits,
                                                    uint64_t{1} << n_qubits)) {
        if (n_qubits == 0 || n_qubits > kDensityMaxQubits)
            throw std::domain_error("DensityState: supports 1 to 10 qubits");
        rho_(0, 0) = 1.0;
    }

    static DensityState computational_basis(uint32_t n_qubits, uint64_t index) {
        DensityState s(n_qubits);
        if (index >= s.dim()) throw std::out_of_range("DensityState: index out of range");
        s.rho_(0, 0) = 0.0;
        s.rho_(index, index) = 1.0;
        return s;
    }

    uint32_t n_qubits() const { return n_; }
    uint64_t dim() const { return uint64_t{1} << n_; }
    const Eigen::MatrixXcd& rho() const { return rho_; }

    double trace_real() const { return rho_.trace().real(); }

    /// rho <- (U_q) rho (U_q)^dagger for a one-qubit unitary.
    void apply_unitary1(uint32_t q, const Eigen::Matrix2cd& u) {
        check_qubit(q);
        const uint64_t bit = uint64_t{1} << q;
        // left action on row index pairs
        for (uint64_t c = 0; c < dim(); ++c)
            for (uint64_t r = 0; r < dim(); ++r) {
                if (r & bit) continue;
                const complex a = rho_(r, c), b = rho_(r | bit, c);
                rho_(r, c) = u(0, 0) * a + u(0, 1) * b;
                rho_(r | bit, c) = u(1, 0) * a + u(1, 1) * b;
            }
        // right action on column index pairs with u^dagger
        for (uint64_t r = 0; r < dim(); ++r)
            for (uint64_t c = 0; c < dim(); ++c) {
                if (c & bit) continue;
                const complex a = rho_(r, c), b = rho_(r, c | bit);
                rho_(r, c) = a * std::conj(u(0, 0)) + b * std::conj(u(0, 1));
                rho_(r, c | bit) = a * std::conj(u(1, 0)) + b * std::conj(u(1, 1));
            }
    }

    void apply_cx(uint32_t control, uint32_t target) {
        check_qubit(control);
        check_qubit(target);
        const uint64_t cbit = uint64_t{1} << control;
        const uint64_t tbit = uint64_t{1} << target;
        auto flip = [&](uint64_t b) { return (b & cbit) ? (b ^ tbit) : b; };
        Eigen::MatrixXcd out(dim(), dim());
        for (uint64_t r = 0; r < dim(); ++r)
            for (uint64_t c = 0; c < dim(); ++c) out(flip(r), flip(c)) = rho_(r, c);
        rho_ = std::move(out);
    }

    /// rho <- sum_k K_k rho K_k^dagger for one-qubit Kraus operators.
    void apply_kraus1(uint32_t q, std::span<const Eigen::Matrix2cd> kraus) {
        check_qubit(q);
        const uint64_t bit = uint64_t{1} << q;
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim(), dim());
        for (const auto& k : kraus) {
            Eigen::MatrixXcd tmp = rho_;
            for (uint64_t c = 0; c < dim(); ++c)
                for (uint64_t r = 0; r < dim(); ++r) {
                    if (r & bit) continue;
                    const complex a = tmp(r, c), b = tmp(r | bit, c);
                    tmp(r, c) = k(0, 0) * a + k(0, 1) * b;
                    tmp(r | bit, c) = k(1, 0) * a + k(1, 1) * b;
                }
            for (uint64_t r = 0; r < dim(); ++r)
                for (uint64_t c = 0; c < dim(); ++c) {
                    if (c & bit) continue;
                    const complex a = tmp(r, c), b = tmp(r, c | bit);
                    tmp(r, c) = a * std::conj(k(0, 0)) + b * std::conj(k(0, 1));
                    tmp(r, c | bit) = a * std::conj(k(1, 0)) + b * std::conj(k(1, 1));
                }
            acc += tmp;
        }
        rho_ = std::move(acc);
    }

    /// tr(rho P), exploiting the one-nonzero-per-column structure of P.
    complex pauli_trace(const PauliString& p) const {
        if (p.n_qubits() != n_)
            throw std::invalid_argument("pauli_trace: qubit count mismatch");
        complex acc{0, 0};
        const uint64_t x = p.x_bits();
        for (uint64_t b = 0; b < dim(); ++b)
            acc += rho_(b, b ^ x) * pauli_action_phase(p, b);
        return acc;
    }

  private:
    void check_qubit(uint32_t q) const {
        if (q >= n_) throw std::out_of_range("DensityState: qubit out of range");
    }

    uint32_t n_;
    Eigen::MatrixXcd rho_;
};

/// Thermal relaxation channel for duration t_ns on one qubit: amplitude
/// damping then pure dephasing (the two commute).
inline void apply_thermal_relaxation(DensityState& state, uint32_t q, double t_ns,
                                     const NoiseModel& model) {
    if (t_ns <= 0.0) return;
    const double t1 = model.t1_ns();
    const double t2 = model.t2_ns();
    if (!std::isfinite(t1) || !std::isfinite(t2)) return;  // alpha -> infinity limit
    const double p_ad = 1.0 - std::exp(-t_ns / t1);
    const double inv_tphi = 1.0 / t2 - 0.5 / t1;
    const double p_pd = inv_tphi > 0 ? 1.0 - std::exp(-t_ns * inv_tphi) : 0.0;

    std::array<Eigen::Matrix2cd, 2> ad;
    ad[0] << 1, 0, 0, std::sqrt(1.0 - p_ad);
    ad[1] << 0, std::sqrt(p_ad), 0, 0;
    state.apply_kraus1(q, ad);

    if (p_pd > 0) {
        // phase flip with probability p_pd/2 scales coherences by 1 - p_pd
        const double pf = 0.5 * p_pd;
        std::array<Eigen::Matrix2cd, 2> pd;
        pd[0] << std::sqrt(1.0 - pf), 0, 0, std::sqrt(1.0 - pf);
        pd[1] << std::sqrt(pf), 0, 0, -std::sqrt(pf);
        state.apply_kraus1(q, pd);
    }
}

/// Unitary followed by the relaxation channel on each touched qubit for the
/// gate's duration.
inline void apply_gate_noisy(DensityState& state, const Gate& g,
                             const NoiseModel& model) {
    if (g.kind == GateKind::CX) {
        state.apply_cx(g.q0, g.q1);
    } else {
        state.apply_unitary1(g.q0, gate_unitary2(g));
    }
    const double t = model.gate_time_ns(g);
    if (t > 0) {
        apply_thermal_relaxation(state, g.q0, t, model);
        if (g.arity() == 2) apply_thermal_relaxation(state, g.q1, t, model);
    }
}

/// Run a circuit from |0...0> under the model; a Reset-duration relaxation is
/// applied to every qubit first (a no-op on the all-zeros state, kept for
/// completeness of the instruction accounting).
inline DensityState run_circuit_noisy(const Circuit& circuit, const NoiseModel& model) {
    model.validate();
    DensityState state(circuit.n_qubits());
    for (uint32_t q = 0; q < circuit.n_qubits(); ++q)
        apply_thermal_relaxation(state, q, model.times.reset, model);
    for (const auto& g : circuit.gates()) apply_gate_noisy(state, g, model);
    return state;
}

/// Per-term energy measurement on the noisy state. Measure-duration
/// relaxation is applied before readout (to all qubits; channels on qubits
/// outside a term's support do not change its expectation). shots == 0 uses
/// exact outcome probabilities.
inline EnergyEstimate measure_energy_noisy(const Circuit& circuit,
                                           const QubitOperator& hamiltonian,
                                           const NoiseModel& model, uint64_t shots,
                                           uint64_t seed) {
    if (circuit.n_qubits() != hamiltonian.n_qubits())
        throw std::invalid_argument("measure_energy_noisy: qubit count mismatch");
    if (!hamiltonian.is_hermitian())
        throw std::domain_error("measure_energy_noisy: Hamiltonian must be Hermitian");
    if (shots == 1)
        throw std::domain_error("measure_energy_noisy: need 0 (exact) or >= 2 shots");

    DensityState state = run_circuit_noisy(circuit, model);
    for (uint32_t q = 0; q < state.n_qubits(); ++q)
        apply_thermal_relaxation(state, q, model.times.measure, model);

    EnergyEstimate est;
    est.shots_per_term = shots;
    double variance_sum = 0.0;
    uint64_t term_index = 0;
    for (const auto& [p, c] : hamiltonian.terms()) {
        if (p.is_identity()) {
            est.value += c.real();
            continue;
        }
        const double expv = state.pauli_trace(p).real();
        if (shots == 0) {
            est.value += c.real() * expv;
        } else {
            double prob = 0.5 * (1.0 + expv);
            prob = std::min(1.0, std::max(0.0, prob));
            auto rng = substream(seed, term_index);
            std::binomial_distribution<uint64_t> bin(shots, prob);
            const uint64_t ups = bin(rng);
            const double mean = (2.0 * static_cast<double>(ups) -
                                 static_cast<double>(shots)) /
                                static_cast<double>(shots);
            const double var =
                (static_cast<double>(shots) / (shots - 1.0)) * (1.0 - mean * mean);
            est.value += c.real() * mean;
            variance_sum += c.real() * c.real() * var / static_cast<double>(shots);
        }
        ++est.n_terms_measured;
        ++term_index;
    }
    est.std_error = std::sqrt(variance_sum);
    return est;
}

}  // namespace qadapt
