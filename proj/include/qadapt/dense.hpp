#pragma once

// Dense-matrix oracle: Kronecker-product expansion of qubit operators and
// small exact eigensolves. Intended for testing and reporting at <= 12 qubits;
// refuses larger systems.

#include <Eigen/Dense>

#include <bit>
#include <stdexcept>
#include <vector>

#include "qadapt/pauli.hpp"

namespace qadapt {

inline constexpr uint32_t kDenseOracleMaxQubits = 12;

inline void check_dense_limit(uint32_t n_qubits, uint32_t limit = kDenseOracleMaxQubits) {
    if (n_qubits > limit)
        throw std::domain_error("dense oracle limited to " + std::to_string(limit) +
                                " qubits, got " + std::to_string(n_qubits));
}

/// Phase picked up by P acting on basis state |b>: P|b> = phase * |b ^ x_bits>.
inline complex pauli_basis_phase(const PauliString& p, uint64_t b) {
    const uint64_t y_mask = p.x_bits() & p.z_bits();
    const int y_count = std::popcount(y_mask);
    const int z_parity = std::popcount(b & p.z_bits()) & 1;
    static const complex kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    complex phase = kI[y_count & 3];
    return z_parity ? -phase : phase;
}

inline Eigen::MatrixXcd to_matrix(const PauliString& p,
                                  uint32_t limit = kDenseOracleMaxQubits) {
    check_dense_limit(p.n_qubits(), limit);
    const uint64_t dim = uint64_t{1} << p.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (uint64_t b = 0; b < dim; ++b) m(b ^ p.x_bits(), b) = pauli_basis_phase(p, b);
    return m;
}

inline Eigen::MatrixXcd to_matrix(const QubitOperator& op,
                                  uint32_t limit = kDenseOracleMaxQubits) {
    check_dense_limit(op.n_qubits(), limit);
    const uint64_t dim = uint64_t{1} << op.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [p, c] : op.terms())
        for (uint64_t b = 0; b < dim; ++b)
            m(b ^ p.x_bits(), b) += c * pauli_basis_phase(p, b);
    return m;
}

/// Lowest eigenvalue over the whole 2^n space.
inline double min_eigenvalue(const QubitOperator& op,
                             uint32_t limit = kDenseOracleMaxQubits) {
    if (!op.is_hermitian())
        throw std::domain_error("min_eigenvalue: operator must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_matrix(op, limit),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// Lowest eigenvalue restricted to basis states satisfying `keep(index)`.
/// Assumes the operator preserves the selected subspace.
template <typename Keep>
inline double min_eigenvalue_filtered(const QubitOperator& op, Keep keep,
                                      uint32_t limit = kDenseOracleMaxQubits) {
    if (!op.is_hermitian())
        throw std::domain_error("min_eigenvalue: operator must be Hermitian");
    check_dense_limit(op.n_qubits(), limit);
    const uint64_t dim = uint64_t{1} << op.n_qubits();
    std::vector<uint64_t> basis;
    for (uint64_t b = 0; b < dim; ++b)
        if (keep(b)) basis.push_back(b);
    if (basis.empty()) throw std::domain_error("min_eigenvalue: empty sector");
    std::vector<int64_t> pos(dim, -1);
    for (size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<int64_t>(i);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
    for (const auto& [p, c] : op.terms()) {
        for (size_t col = 0; col < basis.size(); ++col) {
            const uint64_t b = basis[col];
            const uint64_t out = b ^ p.x_bits();
            const int64_t row = pos[out];
            if (row < 0) continue;  // operator leaves the sector; contribution outside
            m(row, col) += c * pauli_basis_phase(p, b);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// Lowest eigenvalue in the fixed-particle-number sector (qubit i = mode i
/// occupation under the Jordan-Wigner convention).
inline double min_eigenvalue_in_sector(const QubitOperator& op, uint32_t n_particles,
                                       uint32_t limit = kDenseOracleMaxQubits) {
    return min_eigenvalue_filtered(
        op, [&](uint64_t b) { return std::popcount(b) == static_cast<int>(n_particles); },
        limit);
}

}  // namespace qadapt
