#pragma once

// Noiseless statevector engine. Pauli exponentials use the P^2 = I closed form
// (no matrix exponential); expectation sampling draws per-term Bernoulli
// outcomes with sub-streams derived from (seed, term index) so serial and
// term-parallel evaluation agree bit-for-bit.

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "qadapt/fermion.hpp"
#include "qadapt/pauli.hpp"
#include "qadapt/rng.hpp"

namespace qadapt {

inline constexpr uint32_t kStatevectorMaxQubits = 26;

class QuantumState {
  public:
    explicit QuantumState(uint32_t n_qubits)
        : n_(n_qubits), amps_(size_t{1} << n_qubits, complex{0, 0}) {
        if (n_qubits == 0 || n_qubits > kStatevectorMaxQubits)
            throw std::invalid_argument("QuantumState: unsupported qubit count");
        amps_[0] = 1.0;
    }

    static QuantumState computational_basis(uint32_t n_qubits, uint64_t index) {
        QuantumState s(n_qubits);
        if (index >= s.amps_.size())
            throw std::out_of_range("QuantumState: basis index out of range");
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    static QuantumState from_reference(const ReferenceState& ref) {
        return computational_basis(ref.n_modes, ref.basis_index());
    }

    uint32_t n_qubits() const { return n_; }
    size_t dim() const { return amps_.size(); }
    const std::vector<complex>& amplitudes() const { return amps_; }
    std::vector<complex>& amplitudes() { return amps_; }
    complex amplitude(uint64_t i) const { return amps_.at(i); }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

  private:
    uint32_t n_;
    std::vector<complex> amps_;
};

/// Phase such that P|b> = phase * |b ^ x_bits>.
inline complex pauli_action_phase(const PauliString& p, uint64_t b) {
    static const complex kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int y_count = std::popcount(p.x_bits() & p.z_bits());
    complex phase = kI[y_count & 3];
    return (std::popcount(b & p.z_bits()) & 1) ? -phase : phase;
}

/// state <- exp(i theta P) state = cos(theta) state + i sin(theta) P state.
inline void apply_pauli_exponential(QuantumState& state, const PauliString& p,
                                    double theta) {
    if (p.n_qubits() != state.n_qubits())
        throw std::invalid_argument("apply_pauli_exponential: qubit count mismatch");
    const double c = std::cos(theta);
    const complex is = complex{0, 1} * std::sin(theta);
    auto& amps = state.amplitudes();
    const uint64_t x = p.x_bits();
    if (x == 0) {
        for (uint64_t b = 0; b < amps.size(); ++b)
            amps[b] *= c + is * pauli_action_phase(p, b);
        return;
    }
    const uint64_t pivot = x & (~x + 1);  // lowest set bit of the flip mask
    for (uint64_t b = 0; b < amps.size(); ++b) {
        if (b & pivot) continue;  // visit each (b, b^x) pair once
        const uint64_t b2 = b ^ x;
        const complex a1 = amps[b], a2 = amps[b2];
        amps[b] = c * a1 + is * pauli_action_phase(p, b2) * a2;
        amps[b2] = c * a2 + is * pauli_action_phase(p, b) * a1;
    }
}

/// Exact expectation <psi|P|psi> (real for Hermitian P up to rounding).
inline complex pauli_expectation(const QuantumState& state, const PauliString& p) {
    const auto& amps = state.amplitudes();
    complex acc{0, 0};
    const uint64_t x = p.x_bits();
    for (uint64_t b = 0; b < amps.size(); ++b)
        acc += std::conj(amps[b ^ x]) * pauli_action_phase(p, b) * amps[b];
    return acc;
}

/// Rayleigh quotient sum over terms; asserts Hermiticity and a small
/// imaginary residue.
inline double expectation_exact(const QuantumState& state, const QubitOperator& op) {
    if (op.n_qubits() != state.n_qubits())
        throw std::invalid_argument("expectation_exact: qubit count mismatch");
    if (!op.is_hermitian())
        throw std::domain_error("expectation_exact: operator must be Hermitian");
    complex acc{0, 0};
    for (const auto& [p, c] : op.terms()) acc += c * pauli_expectation(state, p);
    if (std::abs(acc.imag()) > 1e-10)
        throw std::runtime_error("expectation_exact: imaginary residue too large");
    return acc.real();
}

struct EnergyEstimate {
    double value = 0.0;
    double std_error = 0.0;
    uint64_t shots_per_term = 0;  // 0 marks exact mode
    size_t n_terms_measured = 0;
};

/// Per-term Bernoulli sampling: each non-identity term is measured
/// independently with `shots` single-shot +/-1 outcomes.
inline EnergyEstimate expectation_sampled(const QuantumState& state,
                                          const QubitOperator& op, uint64_t shots,
                                          uint64_t seed) {
    if (op.n_qubits() != state.n_qubits())
        throw std::invalid_argument("expectation_sampled: qubit count mismatch");
    if (!op.is_hermitian())
        throw std::domain_error("expectation_sampled: operator must be Hermitian");
    if (shots < 2)
        throw std::domain_error("expectation_sampled: need at least 2 shots");
    EnergyEstimate est;
    est.shots_per_term = shots;
    double variance_sum = 0.0;
    uint64_t term_index = 0;
    for (const auto& [p, c] : op.terms()) {
        if (p.is_identity()) {
            est.value += c.real();
            continue;
        }
        const double expv = pauli_expectation(state, p).real();
        double prob = 0.5 * (1.0 + expv);
        prob = std::min(1.0, std::max(0.0, prob));
        auto rng = substream(seed, term_index);
        std::binomial_distribution<uint64_t> bin(shots, prob);
        const uint64_t ups = bin(rng);
        const double mean = (2.0 * static_cast<double>(ups) -
                             static_cast<double>(shots)) / static_cast<double>(shots);
        // unbiased sample variance of +/-1 outcomes
        const double var = (static_cast<double>(shots) / (shots - 1.0)) *
                           (1.0 - mean * mean);
        est.value += c.real() * mean;
        variance_sum += c.real() * c.real() * var / static_cast<double>(shots);
        ++est.n_terms_measured;
        ++term_index;
    }
    est.std_error = std::sqrt(variance_sum);
    return est;
}

/// Trotterized exponential of an anti-Hermitian qubit image: for
/// G = sum_j (i c_j) P_j (c_j real) applies prod_j exp(i theta c_j P_j) in
/// canonical term order.
inline void apply_trotter_exponential(QuantumState& state, const QubitOperator& image,
                                      double theta) {
    if (!image.is_anti_hermitian())
        throw std::domain_error("apply_trotter_exponential: image must be anti-Hermitian");
    for (const auto& [p, c] : image.terms()) {
        if (p.is_identity()) continue;  // global phase
        apply_pauli_exponential(state, p, theta * c.imag());
    }
}

}  // namespace qadapt
