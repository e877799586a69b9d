#pragma once

// FCIDUMP reading/writing. Records are "value i j k l" with 1-based indices:
// (0 0 0 0) the scalar core energy, (i j 0 0) one-electron h, otherwise the
// two-electron integral (ij|kl) in chemist ordering with the 8-fold
// permutational symmetry of real orbitals expanded on read.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qadapt {

struct FcidumpParseError : std::runtime_error {
    FcidumpParseError(size_t line, const std::string& what)
        : std::runtime_error("FCIDUMP line " + std::to_string(line) + ": " + what),
          line_number(line) {}
    size_t line_number;
};

struct MolecularIntegrals {
    uint32_t n_orbitals = 0;   // spatial orbitals
    uint32_t n_electrons = 0;
    int ms2 = 0;
    std::vector<int> orbsym;   // 1-based irrep labels, Abelian XOR convention
    int isym = 1;
    std::vector<double> h;     // n x n, chemist/physicist identical for 1-body
    std::vector<double> g;     // n^4 chemist (ij|kl)
    double e_core = 0.0;

    double& h_at(uint32_t p, uint32_t q) { return h[p * n_orbitals + q]; }
    double h_at(uint32_t p, uint32_t q) const { return h[p * n_orbitals + q]; }
    double& g_at(uint32_t i, uint32_t j, uint32_t k, uint32_t l) {
        const size_t n = n_orbitals;
        return g[((i * n + j) * n + k) * n + l];
    }
    double g_at(uint32_t i, uint32_t j, uint32_t k, uint32_t l) const {
        const size_t n = n_orbitals;
        return g[((i * n + j) * n + k) * n + l];
    }

    void allocate() {
        h.assign(size_t{n_orbitals} * n_orbitals, 0.0);
        g.assign(size_t{n_orbitals} * n_orbitals * n_orbitals * n_orbitals, 0.0);
        if (orbsym.empty()) orbsym.assign(n_orbitals, 1);
    }
};

namespace detail {

// Fortran-style floats may use D exponents.
inline double parse_value(std::string tok, size_t line) {
    for (auto& c : tok)
        if (c == 'D' || c == 'd') c = 'E';
    try {
        size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw FcidumpParseError(line, "non-numeric value '" + tok + "'");
    }
}

inline long parse_index(const std::string& tok, size_t line) {
    try {
        size_t used = 0;
        long v = std::stol(tok, &used);
        if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw FcidumpParseError(line, "bad index '" + tok + "'");
    }
}

// Split the namelist header into KEY=VALUE[,VALUE...] items.
inline void parse_header(const std::string& header, MolecularIntegrals& out,
                         size_t line) {
    std::string text = header;
    for (auto& c : text)
        if (c == '\n' || c == '\t' || c == ',') c = ' ';
    // tokens look like KEY= 1 2 3 or KEY=1; normalize spaces around '='
    std::string squeezed;
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '=') {
            while (!squeezed.empty() && squeezed.back() == ' ') squeezed.pop_back();
            squeezed += '=';
            while (i + 1 < text.size() && text[i + 1] == ' ') ++i;
        } else {
            squeezed += text[i];
        }
    }
    std::istringstream in(squeezed);
    std::string tok;
    std::string key;
    std::vector<long> values;
    auto flush = [&]() {
        if (key.empty()) return;
        if (key == "NORB") {
            if (values.size() != 1 || values[0] <= 0)
                throw FcidumpParseError(line, "bad NORB");
            out.n_orbitals = static_cast<uint32_t>(values[0]);
        } else if (key == "NELEC") {
            if (values.size() != 1 || values[0] < 0)
                throw FcidumpParseError(line, "bad NELEC");
            out.n_electrons = static_cast<uint32_t>(values[0]);
        } else if (key == "MS2") {
            if (values.size() != 1) throw FcidumpParseError(line, "bad MS2");
            out.ms2 = static_cast<int>(values[0]);
        } else if (key == "ORBSYM") {
            out.orbsym.assign(values.begin(), values.end());
        } else if (key == "ISYM") {
            if (values.size() != 1) throw FcidumpParseError(line, "bad ISYM");
            out.isym = static_cast<int>(values[0]);
        }
        key.clear();
        values.clear();
    };
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq != std::string::npos) {
            flush();
            key = tok.substr(0, eq);
            tok = tok.substr(eq + 1);
            if (tok.empty()) continue;
        }
        if (!key.empty()) values.push_back(parse_index(tok, line));
    }
    flush();
}

}  // namespace detail

inline MolecularIntegrals parse_fcidump(std::istream& in) {
    MolecularIntegrals out;
    std::string line;
    size_t line_no = 0;

    // header: collect until &END or a bare '/'
    std::string header;
    bool header_done = false;
    bool saw_amp = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string upper = line;
        for (auto& c : upper) c = static_cast<char>(std::toupper(c));
        if (!saw_amp) {
            auto amp = upper.find("&FCI");
            if (amp == std::string::npos)
                throw FcidumpParseError(line_no, "expected &FCI namelist header");
            saw_amp = true;
            upper = upper.substr(amp + 4);
        }
        auto endpos = upper.find("&END");
        if (endpos == std::string::npos) endpos = upper.find('/');
        if (endpos != std::string::npos) {
            header += ' ' + upper.substr(0, endpos);
            header_done = true;
            break;
        }
        header += ' ' + upper;
    }
    if (!header_done) throw FcidumpParseError(line_no, "unterminated namelist header");
    detail::parse_header(header, out, line_no);
    if (out.n_orbitals == 0) throw FcidumpParseError(line_no, "missing NORB");
    if (!out.orbsym.empty() && out.orbsym.size() != out.n_orbitals)
        throw FcidumpParseError(line_no, "ORBSYM length != NORB");
    out.allocate();

    const long n = out.n_orbitals;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string v_tok;
        if (!(ls >> v_tok)) continue;  // blank line
        std::string i_tok, j_tok, k_tok, l_tok;
        if (!(ls >> i_tok >> j_tok >> k_tok >> l_tok))
            throw FcidumpParseError(line_no, "expected 'value i j k l'");
        std::string extra;
        if (ls >> extra) throw FcidumpParseError(line_no, "trailing fields");
        const double v = detail::parse_value(v_tok, line_no);
        const long i = detail::parse_index(i_tok, line_no);
        const long j = detail::parse_index(j_tok, line_no);
        const long k = detail::parse_index(k_tok, line_no);
        const long l = detail::parse_index(l_tok, line_no);
        if (i > n || j > n || k > n || l > n)
            throw FcidumpParseError(line_no, "orbital index out of range");
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            out.e_core = v;
        } else if (k == 0 && l == 0) {
            if (i == 0 || j == 0)
                throw FcidumpParseError(line_no, "orbital index out of range");
            out.h_at(i - 1, j - 1) = v;
            out.h_at(j - 1, i - 1) = v;
        } else {
            if (i == 0 || j == 0 || k == 0 || l == 0)
                throw FcidumpParseError(line_no, "orbital index out of range");
            const uint32_t a = i - 1, b = j - 1, c = k - 1, d = l - 1;
            out.g_at(a, b, c, d) = v;
            out.g_at(b, a, c, d) = v;
            out.g_at(a, b, d, c) = v;
            out.g_at(b, a, d, c) = v;
            out.g_at(c, d, a, b) = v;
            out.g_at(d, c, a, b) = v;
            out.g_at(c, d, b, a) = v;
            out.g_at(d, c, b, a) = v;
        }
    }
    return out;
}

inline MolecularIntegrals parse_fcidump_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open FCIDUMP file: " + path);
    return parse_fcidump(in);
}

/// Writes with 17 significant digits so parse -> write -> parse is exact.
inline void write_fcidump(std::ostream& os, const MolecularIntegrals& m,
                          double drop_tol = 0.0) {
    const uint32_t n = m.n_orbitals;
    os << "&FCI NORB=" << n << ",NELEC=" << m.n_electrons << ",MS2=" << m.ms2 << ",\n";
    os << " ORBSYM=";
    for (uint32_t i = 0; i < n; ++i) os << (i < m.orbsym.size() ? m.orbsym[i] : 1) << ",";
    os << "\n ISYM=" << m.isym << ",\n&END\n";
    os << std::scientific << std::setprecision(16);
    auto emit = [&](double v, uint32_t i, uint32_t j, uint32_t k, uint32_t l) {
        os << " " << std::setw(24) << v << " " << std::setw(4) << i << " " << std::setw(4)
           << j << " " << std::setw(4) << k << " " << std::setw(4) << l << "\n";
    };
    // unique two-electron records under 8-fold symmetry: canonical key is the
    // lexicographically smallest of the 8 images
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j <= i; ++j)
            for (uint32_t k = 0; k <= i; ++k) {
                const uint32_t lmax = (k == i) ? j : k;
                for (uint32_t l = 0; l <= lmax; ++l) {
                    const double v = m.g_at(i, j, k, l);
                    if (std::abs(v) > drop_tol) emit(v, i + 1, j + 1, k + 1, l + 1);
                }
            }
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j <= i; ++j)
            if (std::abs(m.h_at(i, j)) > drop_tol) emit(m.h_at(i, j), i + 1, j + 1, 0, 0);
    emit(m.e_core, 0, 0, 0, 0);
}

inline std::string fcidump_to_string(const MolecularIntegrals& m) {
    std::ostringstream os;
    write_fcidump(os, m);
    return os.str();
}

}  // namespace qadapt
