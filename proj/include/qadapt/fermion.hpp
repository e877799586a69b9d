#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qadapt/pauli.hpp"

namespace qadapt {

/// One creation or annihilation operator acting on a spin-orbital mode.
struct LadderOp {
    uint32_t mode;
    bool create;

    bool operator==(const LadderOp&) const = default;
    auto operator<=>(const LadderOp&) const = default;
};

using LadderProduct = std::vector<LadderOp>;  // applied right-to-left; empty = identity

/// Linear combination of ladder-operator products. Products are kept exactly
/// as given (no normal-ordering), so term counts mirror the tensor entries
/// the operator was built from. Spin convention: mode 2p = spatial orbital p
/// spin-alpha, mode 2p+1 = spin-beta, fixed toolkit-wide.
class FermionOperator {
  public:
    using TermMap = std::map<LadderProduct, complex>;

    explicit FermionOperator(uint32_t n_modes) : n_modes_(n_modes) {
        if (n_modes == 0) throw std::invalid_argument("FermionOperator: need modes");
    }

    static FermionOperator scalar(uint32_t n_modes, complex value) {
        FermionOperator op(n_modes);
        op.add_term({}, value);
        return op;
    }

    uint32_t n_modes() const { return n_modes_; }
    const TermMap& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    void add_term(const LadderProduct& product, complex coeff) {
        for (const auto& op : product)
            if (op.mode >= n_modes_)
                throw std::out_of_range("FermionOperator: mode index out of range");
        auto it = terms_.find(product);
        if (it == terms_.end()) {
            if (std::abs(coeff) > kCoefficientPruneThreshold)
                terms_.emplace(product, coeff);
        } else {
            it->second += coeff;
            if (std::abs(it->second) <= kCoefficientPruneThreshold) terms_.erase(it);
        }
    }

    complex scalar_part() const {
        auto it = terms_.find(LadderProduct{});
        return it == terms_.end() ? complex{0, 0} : it->second;
    }

    FermionOperator& operator+=(const FermionOperator& o) {
        if (n_modes_ != o.n_modes_)
            throw std::invalid_argument("FermionOperator: mode count mismatch");
        for (const auto& [prod, c] : o.terms_) add_term(prod, c);
        return *this;
    }
    friend FermionOperator operator+(FermionOperator a, const FermionOperator& b) {
        a += b;
        return a;
    }
    FermionOperator& operator*=(complex s) {
        TermMap out;
        for (const auto& [prod, c] : terms_)
            if (std::abs(c * s) > kCoefficientPruneThreshold) out.emplace(prod, c * s);
        terms_ = std::move(out);
        return *this;
    }
    friend FermionOperator operator*(FermionOperator a, complex s) {
        a *= s;
        return a;
    }

    /// Hermitian conjugate: reversed products, flipped dagger flags, conjugated
    /// coefficients.
    FermionOperator dagger() const {
        FermionOperator out(n_modes_);
        for (const auto& [prod, c] : terms_) {
            LadderProduct rev(prod.rbegin(), prod.rend());
            for (auto& op : rev) op.create = !op.create;
            out.add_term(rev, std::conj(c));
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [prod, c] : terms_) {
            if (!first) out << " + ";
            out << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag())
                << "i)";
            for (const auto& op : prod)
                out << " " << op.mode << (op.create ? "^" : "");
            if (prod.empty()) out << " 1";
            first = false;
        }
        return out.str();
    }

  private:
    uint32_t n_modes_;
    TermMap terms_;
};

/// Jordan-Wigner images of a single ladder operator:
///   a_p^dag -> (prod_{j<p} Z_j) (X_p - i Y_p)/2
///   a_p     -> (prod_{j<p} Z_j) (X_p + i Y_p)/2
inline QubitOperator jordan_wigner_ladder(uint32_t n_modes, LadderOp op) {
    QubitOperator out(n_modes);
    PauliString x_part(n_modes);
    PauliString y_part(n_modes);
    for (uint32_t j = 0; j < op.mode; ++j) {
        x_part = x_part.with_letter(j, Pauli::Z);
        y_part = y_part.with_letter(j, Pauli::Z);
    }
    x_part = x_part.with_letter(op.mode, Pauli::X);
    y_part = y_part.with_letter(op.mode, Pauli::Y);
    const double sign = op.create ? -1.0 : 1.0;
    out.add_term(x_part, complex{0.5, 0.0});
    out.add_term(y_part, complex{0.0, 0.5 * sign});
    return out;
}

/// Jordan-Wigner transform, extended multiplicatively over products and
/// linearly over terms. Hermitian inputs map to Hermitian outputs.
inline QubitOperator jordan_wigner(const FermionOperator& f) {
    QubitOperator out(f.n_modes());
    for (const auto& [prod, coeff] : f.terms()) {
        QubitOperator term = QubitOperator::scalar(f.n_modes(), coeff);
        for (const auto& op : prod) term = term * jordan_wigner_ladder(f.n_modes(), op);
        out += term;
    }
    return out;
}

/// Computational-basis reference with the lowest-indexed modes occupied.
struct ReferenceState {
    uint32_t n_modes;
    uint32_t n_electrons;

    /// Statevector index: qubit/mode i is the i-th least-significant bit.
    uint64_t basis_index() const { return (uint64_t{1} << n_electrons) - 1; }

    /// Occupation pattern with mode 0 leftmost, e.g. "1100" for 2-in-4.
    std::string occupation_string() const {
        std::string s(n_modes, '0');
        for (uint32_t m = 0; m < n_electrons; ++m) s[m] = '1';
        return s;
    }
};

inline ReferenceState hartree_fock_reference(uint32_t n_modes, uint32_t n_electrons) {
    if (n_electrons > n_modes)
        throw std::domain_error("hartree_fock_reference: more electrons than modes");
    if (n_modes > PauliString::kMaxQubits)
        throw std::domain_error("hartree_fock_reference: too many modes");
    return ReferenceState{n_modes, n_electrons};
}

/// Total particle-number operator, sum_p a_p^dag a_p.
inline FermionOperator number_operator(uint32_t n_modes) {
    FermionOperator out(n_modes);
    for (uint32_t p = 0; p < n_modes; ++p)
        out.add_term({{p, true}, {p, false}}, complex{1.0, 0.0});
    return out;
}

}  // namespace qadapt
