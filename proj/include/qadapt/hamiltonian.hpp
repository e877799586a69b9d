#pragma once

// Effective-Hamiltonian construction from molecular integrals: frozen-core
// folding, interleaved spin-orbital expansion, and coefficient-threshold
// compression.
//
// Index conventions: the FCIDUMP two-electron tensor is chemist (ij|kl); the
// second-quantized expansion used throughout is
//     H = sum_pq h_pq a^_p a_q
//       + 1/2 sum_ijkl (ij|kl) sum_st a^_{i,s} a^_{k,t} a_{l,t} a_{j,s}
// with spin-orbital mode 2p = spatial p alpha, 2p+1 = beta. Two-body terms are
// stored one per (i,j,k,l,s,t) tensor entry with coefficient (ij|kl)/2, so
// term counts track nonzero tensor entries.

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qadapt/fcidump.hpp"
#include "qadapt/fermion.hpp"
#include "qadapt/pauli.hpp"

namespace qadapt {

struct ActiveSpaceSpec {
    std::vector<uint32_t> core;    // spatial orbitals folded into the scalar
    std::vector<uint32_t> active;  // spatial orbitals kept explicit

    void validate(uint32_t n_orbitals) const {
        std::set<uint32_t> seen;
        for (uint32_t o : core) {
            if (o >= n_orbitals) throw std::domain_error("active space: core index out of range");
            if (!seen.insert(o).second) throw std::domain_error("active space: duplicate orbital");
        }
        for (uint32_t o : active) {
            if (o >= n_orbitals) throw std::domain_error("active space: active index out of range");
            if (!seen.insert(o).second)
                throw std::domain_error("active space: core and active must be disjoint");
        }
        if (active.empty()) throw std::domain_error("active space: no active orbitals");
    }

    static ActiveSpaceSpec full(uint32_t n_orbitals) {
        ActiveSpaceSpec s;
        for (uint32_t o = 0; o < n_orbitals; ++o) s.active.push_back(o);
        return s;
    }
};

struct EffectiveHamiltonian {
    FermionOperator op;          // on 2*|active| spin-orbital modes, scalar term included
    double offset = 0.0;         // e_core + V_eff, also folded into op's scalar term
    uint32_t n_active_electrons = 0;
    std::vector<int> active_orbsym;  // labels of the active orbitals, in order
};

/// Frozen-core effective Hamiltonian on the active space:
///   h~_pq = h_pq + sum_{i in core} [2(ii|pq) - (pi|qi)]
///   V_eff = 2 sum_i h_ii + sum_ij [2(ii|jj) - (ij|ij)]
/// (spatial form of the spin-orbital core sums; core orbitals doubly occupied).
inline EffectiveHamiltonian build_effective_hamiltonian(const MolecularIntegrals& ints,
                                                        const ActiveSpaceSpec& space) {
    space.validate(ints.n_orbitals);
    const auto& core = space.core;
    const auto& act = space.active;
    const long active_electrons =
        static_cast<long>(ints.n_electrons) - 2 * static_cast<long>(core.size());
    if (active_electrons < 0)
        throw std::domain_error("active space: negative active electron count");

    double v_eff = 0.0;
    for (uint32_t i : core) {
        v_eff += 2.0 * ints.h_at(i, i);
        for (uint32_t j : core)
            v_eff += 2.0 * ints.g_at(i, i, j, j) - ints.g_at(i, j, i, j);
    }
    const double offset = ints.e_core + v_eff;

    const uint32_t na = static_cast<uint32_t>(act.size());
    EffectiveHamiltonian out{FermionOperator(2 * na), offset,
                             static_cast<uint32_t>(active_electrons), {}};
    for (uint32_t a : act)
        out.active_orbsym.push_back(a < ints.orbsym.size() ? ints.orbsym[a] : 1);

    out.op.add_term({}, complex{offset, 0.0});

    for (uint32_t P = 0; P < na; ++P) {
        for (uint32_t Q = 0; Q < na; ++Q) {
            const uint32_t p = act[P], q = act[Q];
            double v = ints.h_at(p, q);
            for (uint32_t i : core)
                v += 2.0 * ints.g_at(i, i, p, q) - ints.g_at(p, i, q, i);
            if (v == 0.0) continue;
            for (uint32_t s = 0; s < 2; ++s)
                out.op.add_term({{2 * P + s, true}, {2 * Q + s, false}}, complex{v, 0.0});
        }
    }
    for (uint32_t I = 0; I < na; ++I)
        for (uint32_t J = 0; J < na; ++J)
            for (uint32_t K = 0; K < na; ++K)
                for (uint32_t L = 0; L < na; ++L) {
                    const double v = ints.g_at(act[I], act[J], act[K], act[L]);
                    if (v == 0.0) continue;
                    for (uint32_t s = 0; s < 2; ++s)
                        for (uint32_t t = 0; t < 2; ++t)
                            out.op.add_term({{2 * I + s, true},
                                             {2 * K + t, true},
                                             {2 * L + t, false},
                                             {2 * J + s, false}},
                                            complex{0.5 * v, 0.0});
                }
    return out;
}

struct CompressionReport {
    double threshold = 0.0;
    size_t kept = 0;
    size_t dropped = 0;
    double dropped_abs_sum = 0.0;
};

/// Remove terms with |coefficient| <= threshold; the scalar term survives
/// regardless so energy offsets are never silently lost.
inline std::pair<QubitOperator, CompressionReport> compress(const QubitOperator& op,
                                                            double threshold) {
    if (threshold < 0) throw std::domain_error("compress: negative threshold");
    QubitOperator out(op.n_qubits());
    CompressionReport rep{threshold, 0, 0, 0.0};
    for (const auto& [p, c] : op.terms()) {
        if (p.is_identity() || std::abs(c) > threshold) {
            out.add_term(p, c);
            ++rep.kept;
        } else {
            ++rep.dropped;
            rep.dropped_abs_sum += std::abs(c);
        }
    }
    return {out, rep};
}

inline std::pair<FermionOperator, CompressionReport> compress(const FermionOperator& op,
                                                              double threshold) {
    if (threshold < 0) throw std::domain_error("compress: negative threshold");
    FermionOperator out(op.n_modes());
    CompressionReport rep{threshold, 0, 0, 0.0};
    for (const auto& [prod, c] : op.terms()) {
        if (prod.empty() || std::abs(c) > threshold) {
            out.add_term(prod, c);
            ++rep.kept;
        } else {
            ++rep.dropped;
            rep.dropped_abs_sum += std::abs(c);
        }
    }
    return {out, rep};
}

inline size_t term_count(const QubitOperator& op) { return op.term_count(); }
inline size_t term_count(const FermionOperator& op) { return op.term_count(); }

/// Abelian irrep product: XOR of zero-based labels, returned 1-based.
inline int irrep_product(int label_a, int label_b) {
    if (label_a < 1 || label_b < 1) throw std::domain_error("irrep labels are 1-based");
    return (((label_a - 1) ^ (label_b - 1)) + 1);
}

}  // namespace qadapt
