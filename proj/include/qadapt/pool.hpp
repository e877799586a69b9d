#pragma once

// Operator pools for adaptive ansatz construction. The fermionic pool holds
// spin-singlet adapted occupied-to-virtual single and double excitations,
// anti-Hermitianized as T - T^dag; mixed doubles are products of two
// spin-summed single excitations. The qubit pool is the set of distinct Pauli
// strings appearing in the Jordan-Wigner images of the fermionic generators,
// each used as the generator i*P.

#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qadapt/fermion.hpp"
#include "qadapt/hamiltonian.hpp"
#include "qadapt/pauli.hpp"

namespace qadapt {

enum class PoolKind { fermionic, qubit };

enum class FermionicPoolVariant {
    singlet_sd,  // spin-adapted occupied-to-virtual singles and doubles
    uccsd_all,   // all-pairs singles plus all occupied-to-virtual mode doubles
};

struct PoolOperator {
    PoolKind kind;
    std::optional<FermionOperator> generator;  // fermionic kind: A = T - T^dag
    std::optional<PauliString> pauli;          // qubit kind: A = i P
    std::string label;
    std::vector<uint32_t> spatial_orbitals;    // excitation orbitals, with multiplicity
    int delta_ms2 = 0;
    bool spin_adapted = false;

    uint32_t n_qubits() const {
        return kind == PoolKind::fermionic ? generator->n_modes() : pauli->n_qubits();
    }

    /// Anti-Hermitian qubit image of the generator.
    QubitOperator qubit_image() const {
        if (kind == PoolKind::fermionic) return jordan_wigner(*generator);
        QubitOperator a(pauli->n_qubits());
        a.add_term(*pauli, complex{0, 1});
        return a;
    }
};

namespace detail {

inline FermionOperator anti_hermitian(const FermionOperator& t) {
    return t + t.dagger() * complex{-1.0, 0.0};
}

}  // namespace detail

/// Spin-summed single excitation generator over spatial orbitals i -> a.
inline FermionOperator singlet_single(uint32_t n_modes, uint32_t i, uint32_t a) {
    FermionOperator t(n_modes);
    for (uint32_t s = 0; s < 2; ++s)
        t.add_term({{2 * a + s, true}, {2 * i + s, false}}, complex{1.0, 0.0});
    return detail::anti_hermitian(t);
}

/// Pair double excitation (ii -> aa).
inline FermionOperator paired_double(uint32_t n_modes, uint32_t i, uint32_t a) {
    FermionOperator t(n_modes);
    t.add_term({{2 * a, true}, {2 * a + 1, true}, {2 * i + 1, false}, {2 * i, false}},
               complex{1.0, 0.0});
    return detail::anti_hermitian(t);
}

/// Product of two spin-summed singles, (i -> a)(j -> b).
inline FermionOperator mixed_double(uint32_t n_modes, uint32_t i, uint32_t a,
                                    uint32_t j, uint32_t b) {
    FermionOperator t(n_modes);
    for (uint32_t s = 0; s < 2; ++s)
        for (uint32_t u = 0; u < 2; ++u)
            t.add_term({{2 * a + s, true},
                        {2 * i + s, false},
                        {2 * b + u, true},
                        {2 * j + u, false}},
                       complex{1.0, 0.0});
    return detail::anti_hermitian(t);
}

inline std::vector<PoolOperator> build_fermionic_pool(
    uint32_t n_spatial_active, uint32_t n_electrons_active,
    FermionicPoolVariant variant = FermionicPoolVariant::singlet_sd) {
    if (n_electrons_active > 2 * n_spatial_active)
        throw std::domain_error("pool: more electrons than spin orbitals");
    const uint32_t n_modes = 2 * n_spatial_active;
    std::vector<PoolOperator> pool;

    if (variant == FermionicPoolVariant::uccsd_all) {
        // all-excitations comparison variant: singles between every mode pair,
        // doubles from every occupied mode pair to every virtual mode pair
        auto ms2_of = [](uint32_t mode) { return mode % 2 == 0 ? 1 : -1; };
        for (uint32_t p = 0; p < n_modes; ++p)
            for (uint32_t q = p + 1; q < n_modes; ++q) {
                FermionOperator t(n_modes);
                t.add_term({{q, true}, {p, false}}, complex{1.0, 0.0});
                PoolOperator op{PoolKind::fermionic, detail::anti_hermitian(t),
                                std::nullopt, "", {p / 2, q / 2},
                                ms2_of(q) - ms2_of(p), false};
                std::ostringstream lbl;
                lbl << "s[" << p << "->" << q << "]";
                op.label = lbl.str();
                pool.push_back(std::move(op));
            }
        for (uint32_t i = 0; i < n_electrons_active; ++i)
            for (uint32_t j = i + 1; j < n_electrons_active; ++j)
                for (uint32_t a = n_electrons_active; a < n_modes; ++a)
                    for (uint32_t b = a + 1; b < n_modes; ++b) {
                        FermionOperator t(n_modes);
                        t.add_term({{a, true}, {b, true}, {j, false}, {i, false}},
                                   complex{1.0, 0.0});
                        PoolOperator op{PoolKind::fermionic, detail::anti_hermitian(t),
                                        std::nullopt, "",
                                        {i / 2, j / 2, a / 2, b / 2},
                                        ms2_of(a) + ms2_of(b) - ms2_of(i) - ms2_of(j),
                                        false};
                        std::ostringstream lbl;
                        lbl << "d[" << i << "," << j << "->" << a << "," << b << "]";
                        op.label = lbl.str();
                        pool.push_back(std::move(op));
                    }
        return pool;
    }

    if (n_electrons_active % 2 != 0)
        throw std::domain_error("singlet pool: needs an even electron count");
    const uint32_t n_occ = n_electrons_active / 2;

    struct Move {
        uint32_t i, a;
    };
    std::vector<Move> moves;
    for (uint32_t i = 0; i < n_occ; ++i)
        for (uint32_t a = n_occ; a < n_spatial_active; ++a) moves.push_back({i, a});

    for (const auto& m : moves) {
        PoolOperator op{PoolKind::fermionic, singlet_single(n_modes, m.i, m.a),
                        std::nullopt, "", {m.i, m.a}, 0, true};
        std::ostringstream lbl;
        lbl << "s(" << m.i << "->" << m.a << ")";
        op.label = lbl.str();
        pool.push_back(std::move(op));
    }
    for (const auto& m : moves) {
        PoolOperator op{PoolKind::fermionic, paired_double(n_modes, m.i, m.a),
                        std::nullopt, "", {m.i, m.i, m.a, m.a}, 0, true};
        std::ostringstream lbl;
        lbl << "d(" << m.i << "," << m.i << "->" << m.a << "," << m.a << ")";
        op.label = lbl.str();
        pool.push_back(std::move(op));
    }
    for (size_t x = 0; x < moves.size(); ++x)
        for (size_t y = x + 1; y < moves.size(); ++y) {
            const auto& m1 = moves[x];
            const auto& m2 = moves[y];
            PoolOperator op{PoolKind::fermionic,
                            mixed_double(n_modes, m1.i, m1.a, m2.i, m2.a),
                            std::nullopt, "",
                            {m1.i, m2.i, m1.a, m2.a}, 0, true};
            std::ostringstream lbl;
            lbl << "d(" << m1.i << "," << m2.i << "->" << m1.a << "," << m2.a << ")";
            op.label = lbl.str();
            pool.push_back(std::move(op));
        }
    return pool;
}

/// Keeps operators whose orbital-label XOR product is totally symmetric and
/// which are spin-adapted with no spin-projection change.
inline std::vector<PoolOperator> filter_pool_by_symmetry(
    const std::vector<PoolOperator>& pool, const std::vector<int>& orbsym,
    int target_irrep = 1) {
    if (target_irrep < 1 || target_irrep > 8)
        throw std::domain_error("symmetry filter: bad target irrep label");
    std::vector<PoolOperator> out;
    for (const auto& op : pool) {
        int product = 0;
        for (uint32_t o : op.spatial_orbitals) {
            if (o >= orbsym.size())
                throw std::domain_error("symmetry filter: orbital without a label");
            const int label = orbsym[o];
            if (label < 1 || label > 8)
                throw std::domain_error("symmetry filter: unknown irrep label");
            product ^= (label - 1);
        }
        // preserving the reference's irrep means a totally symmetric product
        if (product != 0) continue;
        if (!op.spin_adapted || op.delta_ms2 != 0) continue;
        out.push_back(op);
    }
    return out;
}

/// Distinct Pauli strings from the Jordan-Wigner images of the (filtered)
/// fermionic pool, deduplicated into canonical order. strip_z_chains removes
/// Z letters (the hardware-efficient variant); strings reduced to identity
/// are dropped.
inline std::vector<PoolOperator> build_qubit_pool(const std::vector<PoolOperator>& pool,
                                                  bool strip_z_chains = false) {
    std::set<PauliString> strings;
    for (const auto& op : pool) {
        const QubitOperator image = op.qubit_image();
        for (const auto& [p, c] : image.terms()) {
            if (p.is_identity()) continue;
            PauliString s = p;
            if (strip_z_chains) {
                PauliString stripped(p.n_qubits());
                for (uint32_t q : p.support())
                    if (p.letter(q) != Pauli::Z)
                        stripped = stripped.with_letter(q, p.letter(q));
                if (stripped.is_identity()) continue;
                s = stripped;
            }
            strings.insert(s);
        }
    }
    std::vector<PoolOperator> out;
    for (const auto& s : strings)
        out.push_back(PoolOperator{PoolKind::qubit, std::nullopt, s, s.str(), {}, 0,
                                   false});
    return out;
}

}  // namespace qadapt
