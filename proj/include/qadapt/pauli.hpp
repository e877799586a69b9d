#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qadapt {

using complex = std::complex<double>;

/// Coefficients with magnitude at or below this are dropped after arithmetic,
/// keeping term counts exact and reproducible.
inline constexpr double kCoefficientPruneThreshold = 1e-14;

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

/// Tensor product of single-qubit Pauli letters, stored as symplectic bit
/// masks (Y has both the X and Z bit set). Immutable after construction.
class PauliString {
  public:
    static constexpr uint32_t kMaxQubits = 64;

    explicit PauliString(uint32_t n_qubits) : n_(n_qubits), x_(0), z_(0) {
        if (n_qubits == 0 || n_qubits > kMaxQubits)
            throw std::invalid_argument("PauliString: qubit count must be in [1, 64]");
    }

    static PauliString from_letters(const std::vector<Pauli>& letters) {
        PauliString p(static_cast<uint32_t>(letters.size()));
        for (uint32_t q = 0; q < letters.size(); ++q) p.set(q, letters[q]);
        return p;
    }

    /// Parse the text rendering, e.g. "X0 Z2 Y3" (identity qubits omitted,
    /// all-identity rendered as "I").
    static PauliString parse(const std::string& text, uint32_t n_qubits) {
        PauliString p(n_qubits);
        std::istringstream in(text);
        std::string tok;
        while (in >> tok) {
            if (tok == "I") continue;
            if (tok.size() < 2)
                throw std::invalid_argument("PauliString: bad token '" + tok + "'");
            Pauli letter;
            switch (tok[0]) {
                case 'X': letter = Pauli::X; break;
                case 'Y': letter = Pauli::Y; break;
                case 'Z': letter = Pauli::Z; break;
                default:
                    throw std::invalid_argument("PauliString: bad token '" + tok + "'");
            }
            uint32_t q = static_cast<uint32_t>(std::stoul(tok.substr(1)));
            if (q >= n_qubits)
                throw std::invalid_argument("PauliString: qubit index out of range in '" +
                                            tok + "'");
            p.set(q, letter);
        }
        return p;
    }

    uint32_t n_qubits() const { return n_; }
    uint64_t x_bits() const { return x_; }
    uint64_t z_bits() const { return z_; }

    Pauli letter(uint32_t q) const {
        check_index(q);
        const int x = static_cast<int>(x_ >> q & 1);
        const int z = static_cast<int>(z_ >> q & 1);
        static constexpr Pauli table[4] = {Pauli::I, Pauli::X, Pauli::Z, Pauli::Y};
        return table[(z << 1) | x];
    }

    PauliString with_letter(uint32_t q, Pauli p) const {
        PauliString out = *this;
        out.set(q, p);
        return out;
    }

    bool is_identity() const { return x_ == 0 && z_ == 0; }

    /// Number of non-identity letters.
    uint32_t weight() const {
        return static_cast<uint32_t>(__builtin_popcountll(x_ | z_));
    }

    std::vector<uint32_t> support() const {
        std::vector<uint32_t> qs;
        uint64_t m = x_ | z_;
        for (uint32_t q = 0; q < n_; ++q)
            if (m >> q & 1) qs.push_back(q);
        return qs;
    }

    std::string str() const {
        if (is_identity()) return "I";
        std::string out;
        for (uint32_t q = 0; q < n_; ++q) {
            Pauli p = letter(q);
            if (p == Pauli::I) continue;
            if (!out.empty()) out += ' ';
            out += pauli_char(p);
            out += std::to_string(q);
        }
        return out;
    }

    bool operator==(const PauliString& o) const {
        return n_ == o.n_ && x_ == o.x_ && z_ == o.z_;
    }
    bool operator!=(const PauliString& o) const { return !(*this == o); }

    /// Lexicographic order on the letter sequence from qubit 0, I < X < Y < Z.
    /// This is the canonical term order used project-wide.
    bool operator<(const PauliString& o) const {
        if (n_ != o.n_) return n_ < o.n_;
        for (uint32_t q = 0; q < n_; ++q) {
            auto a = static_cast<int>(letter(q));
            auto b = static_cast<int>(o.letter(q));
            if (a != b) return a < b;
        }
        return false;
    }

  private:
    void set(uint32_t q, Pauli p) {
        check_index(q);
        const uint64_t bit = uint64_t{1} << q;
        x_ &= ~bit;
        z_ &= ~bit;
        if (p == Pauli::X || p == Pauli::Y) x_ |= bit;
        if (p == Pauli::Z || p == Pauli::Y) z_ |= bit;
    }
    void check_index(uint32_t q) const {
        if (q >= n_) throw std::out_of_range("PauliString: qubit index out of range");
    }

    uint32_t n_;
    uint64_t x_, z_;
};

struct PauliProduct {
    complex phase;  // one of {1, i, -1, -i}
    PauliString string;
};

/// a * b as (phase, string); the phase is a power of i from the single-qubit
/// multiplication table.
inline PauliProduct multiply(const PauliString& a, const PauliString& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("multiply: qubit count mismatch");
    // exponent of i for sigma_a * sigma_b, indexed [a][b] with I,X,Y,Z = 0..3
    static constexpr int kPhase[4][4] = {
        {0, 0, 0, 0},
        {0, 0, 1, 3},
        {0, 3, 0, 1},
        {0, 1, 3, 0},
    };
    PauliString out(a.n_qubits());
    int k = 0;
    uint64_t busy = a.x_bits() | a.z_bits() | b.x_bits() | b.z_bits();
    for (uint32_t q = 0; q < a.n_qubits(); ++q) {
        if (!(busy >> q & 1)) continue;
        Pauli pa = a.letter(q);
        Pauli pb = b.letter(q);
        k += kPhase[static_cast<int>(pa)][static_cast<int>(pb)];
        // product letter: XOR of symplectic bits
        int x = ((a.x_bits() ^ b.x_bits()) >> q) & 1;
        int z = ((a.z_bits() ^ b.z_bits()) >> q) & 1;
        static constexpr Pauli table[4] = {Pauli::I, Pauli::X, Pauli::Z, Pauli::Y};
        out = out.with_letter(q, table[(z << 1) | x]);
    }
    static const complex kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return {kI[k & 3], out};
}

/// Weighted sum of Pauli strings with canonically ordered terms.
/// Values are immutable in spirit: arithmetic returns new operators.
class QubitOperator {
  public:
    using TermMap = std::map<PauliString, complex>;

    explicit QubitOperator(uint32_t n_qubits) : n_(n_qubits) {}

    static QubitOperator scalar(uint32_t n_qubits, complex value) {
        QubitOperator op(n_qubits);
        op.add_term(PauliString(n_qubits), value);
        return op;
    }

    uint32_t n_qubits() const { return n_; }
    const TermMap& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    void add_term(const PauliString& p, complex coeff) {
        if (p.n_qubits() != n_)
            throw std::invalid_argument("QubitOperator: term qubit count mismatch");
        auto it = terms_.find(p);
        if (it == terms_.end()) {
            if (std::abs(coeff) > kCoefficientPruneThreshold) terms_.emplace(p, coeff);
        } else {
            it->second += coeff;
            if (std::abs(it->second) <= kCoefficientPruneThreshold) terms_.erase(it);
        }
    }

    complex coefficient(const PauliString& p) const {
        auto it = terms_.find(p);
        return it == terms_.end() ? complex{0, 0} : it->second;
    }

    complex scalar_part() const { return coefficient(PauliString(n_)); }

    QubitOperator& operator+=(const QubitOperator& o) {
        check_same(o);
        for (const auto& [p, c] : o.terms_) add_term(p, c);
        return *this;
    }
    QubitOperator& operator-=(const QubitOperator& o) {
        check_same(o);
        for (const auto& [p, c] : o.terms_) add_term(p, -c);
        return *this;
    }
    QubitOperator& operator*=(complex s) {
        TermMap out;
        for (const auto& [p, c] : terms_)
            if (std::abs(c * s) > kCoefficientPruneThreshold) out.emplace(p, c * s);
        terms_ = std::move(out);
        return *this;
    }

    friend QubitOperator operator+(QubitOperator a, const QubitOperator& b) {
        a += b;
        return a;
    }
    friend QubitOperator operator-(QubitOperator a, const QubitOperator& b) {
        a -= b;
        return a;
    }
    friend QubitOperator operator*(QubitOperator a, complex s) {
        a *= s;
        return a;
    }
    friend QubitOperator operator*(complex s, QubitOperator a) {
        a *= s;
        return a;
    }

    friend QubitOperator operator*(const QubitOperator& a, const QubitOperator& b) {
        a.check_same(b);
        QubitOperator out(a.n_);
        for (const auto& [pa, ca] : a.terms_) {
            for (const auto& [pb, cb] : b.terms_) {
                auto prod = multiply(pa, pb);
                out.add_term(prod.string, ca * cb * prod.phase);
            }
        }
        return out;
    }

    bool is_hermitian(double tol = 1e-10) const {
        for (const auto& [p, c] : terms_)
            if (std::abs(c.imag()) > tol) return false;
        return true;
    }

    bool is_anti_hermitian(double tol = 1e-10) const {
        for (const auto& [p, c] : terms_)
            if (std::abs(c.real()) > tol) return false;
        return true;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [p, c] : terms_) {
            if (!first) out << " + ";
            out << "(" << c.real() << (c.imag() < 0 ? "-" : "+")
                << std::abs(c.imag()) << "i) " << p.str();
            first = false;
        }
        return out.str();
    }

  private:
    void check_same(const QubitOperator& o) const {
        if (n_ != o.n_)
            throw std::invalid_argument("QubitOperator: qubit count mismatch");
    }

    uint32_t n_;
    TermMap terms_;
};

/// [a, b] = ab - ba with like terms combined.
inline QubitOperator commutator(const QubitOperator& a, const QubitOperator& b) {
    return a * b - b * a;
}

}  // namespace qadapt
