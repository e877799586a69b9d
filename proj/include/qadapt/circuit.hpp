#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qadapt/dense.hpp"

namespace qadapt {

enum class GateKind { H, X, S, Sdg, RZ, RX, CX, U1, U2, U3 };

inline const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::S: return "S";
        case GateKind::Sdg: return "SDG";
        case GateKind::RZ: return "RZ";
        case GateKind::RX: return "RX";
        case GateKind::CX: return "CX";
        case GateKind::U1: return "U1";
        case GateKind::U2: return "U2";
        case GateKind::U3: return "U3";
    }
    return "?";
}

struct Gate {
    GateKind kind;
    uint32_t q0 = 0;
    uint32_t q1 = 0;                  // CX target
    double p0 = 0, p1 = 0, p2 = 0;    // rotation parameters, radians

    static Gate h(uint32_t q) { return {GateKind::H, q}; }
    static Gate x(uint32_t q) { return {GateKind::X, q}; }
    static Gate s(uint32_t q) { return {GateKind::S, q}; }
    static Gate sdg(uint32_t q) { return {GateKind::Sdg, q}; }
    static Gate rz(double angle, uint32_t q) {
        Gate g{GateKind::RZ, q};
        g.p0 = angle;
        return g;
    }
    static Gate rx(double angle, uint32_t q) {
        Gate g{GateKind::RX, q};
        g.p0 = angle;
        return g;
    }
    static Gate cx(uint32_t control, uint32_t target) {
        if (control == target) throw std::invalid_argument("CX: control == target");
        Gate g{GateKind::CX, control};
        g.q1 = target;
        return g;
    }
    static Gate u1(double lambda, uint32_t q) {
        Gate g{GateKind::U1, q};
        g.p0 = lambda;
        return g;
    }
    static Gate u2(double phi, double lambda, uint32_t q) {
        Gate g{GateKind::U2, q};
        g.p0 = phi;
        g.p1 = lambda;
        return g;
    }
    static Gate u3(double theta, double phi, double lambda, uint32_t q) {
        Gate g{GateKind::U3, q};
        g.p0 = theta;
        g.p1 = phi;
        g.p2 = lambda;
        return g;
    }

    int arity() const { return kind == GateKind::CX ? 2 : 1; }
    int n_params() const {
        switch (kind) {
            case GateKind::RZ:
            case GateKind::RX:
            case GateKind::U1: return 1;
            case GateKind::U2: return 2;
            case GateKind::U3: return 3;
            default: return 0;
        }
    }
    bool touches(uint32_t q) const { return q0 == q || (arity() == 2 && q1 == q); }

    bool operator==(const Gate& o) const {
        return kind == o.kind && q0 == o.q0 && (arity() == 1 || q1 == o.q1) &&
               p0 == o.p0 && p1 == o.p1 && p2 == o.p2;
    }
};

class Circuit {
  public:
    explicit Circuit(uint32_t n_qubits) : n_(n_qubits) {
        if (n_qubits == 0) throw std::invalid_argument("Circuit: need qubits");
    }

    uint32_t n_qubits() const { return n_; }
    const std::vector<Gate>& gates() const { return gates_; }
    size_t size() const { return gates_.size(); }

    void add(const Gate& g) {
        if (g.q0 >= n_ || (g.arity() == 2 && g.q1 >= n_))
            throw std::out_of_range("Circuit: gate qubit index out of range");
        gates_.push_back(g);
    }
    void append(const Circuit& other) {
        if (other.n_ != n_) throw std::invalid_argument("Circuit: qubit count mismatch");
        for (const auto& g : other.gates_) gates_.push_back(g);
    }

    bool operator==(const Circuit& o) const { return n_ == o.n_ && gates_ == o.gates_; }

  private:
    uint32_t n_;
    std::vector<Gate> gates_;
};

struct DepthReport {
    size_t depth = 0;       // longest path in the gate DAG
    size_t cnot_count = 0;
};

inline DepthReport depth_report(const Circuit& c) {
    DepthReport rep;
    std::vector<size_t> frontier(c.n_qubits(), 0);
    for (const auto& g : c.gates()) {
        if (g.kind == GateKind::CX) {
            ++rep.cnot_count;
            const size_t d = std::max(frontier[g.q0], frontier[g.q1]) + 1;
            frontier[g.q0] = d;
            frontier[g.q1] = d;
        } else {
            frontier[g.q0] += 1;
        }
    }
    for (size_t d : frontier) rep.depth = std::max(rep.depth, d);
    return rep;
}

// ---------------------------------------------------------------------------
// text format: "qubits N" header then one gate per line, e.g.
//   CX 0 1
//   RZ(-1.5707963267948966) 3
// ---------------------------------------------------------------------------

namespace detail {
inline std::string format_params(const Gate& g) {
    char buf[96];
    switch (g.n_params()) {
        case 1: std::snprintf(buf, sizeof buf, "(%.17g)", g.p0); return buf;
        case 2: std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", g.p0, g.p1); return buf;
        case 3:
            std::snprintf(buf, sizeof buf, "(%.17g,%.17g,%.17g)", g.p0, g.p1, g.p2);
            return buf;
        default: return "";
    }
}
}  // namespace detail

inline std::string export_text(const Circuit& c) {
    std::ostringstream out;
    out << "qubits " << c.n_qubits() << "\n";
    for (const auto& g : c.gates()) {
        out << gate_name(g.kind) << detail::format_params(g) << " " << g.q0;
        if (g.arity() == 2) out << " " << g.q1;
        out << "\n";
    }
    return out.str();
}

inline Circuit parse_text(std::istream& in) {
    std::string word;
    if (!(in >> word) || word != "qubits")
        throw std::runtime_error("circuit text: expected 'qubits N' header");
    uint32_t n = 0;
    if (!(in >> n) || n == 0) throw std::runtime_error("circuit text: bad qubit count");
    Circuit c(n);
    std::string tok;
    while (in >> tok) {
        std::string name = tok;
        std::vector<double> params;
        auto paren = tok.find('(');
        if (paren != std::string::npos) {
            name = tok.substr(0, paren);
            if (tok.back() != ')') throw std::runtime_error("circuit text: bad params");
            std::string body = tok.substr(paren + 1, tok.size() - paren - 2);
            std::istringstream ps(body);
            std::string item;
            while (std::getline(ps, item, ',')) params.push_back(std::stod(item));
        }
        for (auto& ch : name) ch = static_cast<char>(std::toupper(ch));
        auto need = [&](int k) {
            if (static_cast<int>(params.size()) != k)
                throw std::runtime_error("circuit text: wrong parameter count for " +
                                         name);
        };
        uint32_t a = 0, b = 0;
        if (name == "CX") {
            if (!(in >> a >> b)) throw std::runtime_error("circuit text: CX needs 2 qubits");
            c.add(Gate::cx(a, b));
            continue;
        }
        if (!(in >> a)) throw std::runtime_error("circuit text: missing qubit index");
        if (name == "H") need(0), c.add(Gate::h(a));
        else if (name == "X") need(0), c.add(Gate::x(a));
        else if (name == "S") need(0), c.add(Gate::s(a));
        else if (name == "SDG") need(0), c.add(Gate::sdg(a));
        else if (name == "RZ") need(1), c.add(Gate::rz(params[0], a));
        else if (name == "RX") need(1), c.add(Gate::rx(params[0], a));
        else if (name == "U1") need(1), c.add(Gate::u1(params[0], a));
        else if (name == "U2") need(2), c.add(Gate::u2(params[0], params[1], a));
        else if (name == "U3") need(3), c.add(Gate::u3(params[0], params[1], params[2], a));
        else throw std::runtime_error("circuit text: unknown gate '" + name + "'");
    }
    return c;
}

inline Circuit parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_text(in);
}

inline std::string export_openqasm(const Circuit& c) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << c.n_qubits() << "];\n";
    char buf[128];
    for (const auto& g : c.gates()) {
        switch (g.kind) {
            case GateKind::H: out << "h q[" << g.q0 << "];\n"; break;
            case GateKind::X: out << "x q[" << g.q0 << "];\n"; break;
            case GateKind::S: out << "s q[" << g.q0 << "];\n"; break;
            case GateKind::Sdg: out << "sdg q[" << g.q0 << "];\n"; break;
            case GateKind::RZ:
                std::snprintf(buf, sizeof buf, "rz(%.17g) q[%u];\n", g.p0, g.q0);
                out << buf;
                break;
            case GateKind::RX:
                std::snprintf(buf, sizeof buf, "rx(%.17g) q[%u];\n", g.p0, g.q0);
                out << buf;
                break;
            case GateKind::CX: out << "cx q[" << g.q0 << "],q[" << g.q1 << "];\n"; break;
            case GateKind::U1:
                std::snprintf(buf, sizeof buf, "u1(%.17g) q[%u];\n", g.p0, g.q0);
                out << buf;
                break;
            case GateKind::U2:
                std::snprintf(buf, sizeof buf, "u2(%.17g,%.17g) q[%u];\n", g.p0, g.p1,
                              g.q0);
                out << buf;
                break;
            case GateKind::U3:
                std::snprintf(buf, sizeof buf, "u3(%.17g,%.17g,%.17g) q[%u];\n", g.p0,
                              g.p1, g.p2, g.q0);
                out << buf;
                break;
            default:
                throw std::runtime_error("openqasm export: unsupported gate");
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// dense unitary oracle
// ---------------------------------------------------------------------------

inline Eigen::Matrix2cd gate_unitary2(const Gate& g) {
    using std::cos;
    using std::sin;
    const complex i{0, 1};
    Eigen::Matrix2cd m;
    switch (g.kind) {
        case GateKind::H:
            m << 1, 1, 1, -1;
            return m / std::sqrt(2.0);
        case GateKind::X:
            m << 0, 1, 1, 0;
            return m;
        case GateKind::S:
            m << 1, 0, 0, i;
            return m;
        case GateKind::Sdg:
            m << 1, 0, 0, -i;
            return m;
        case GateKind::RZ:
            m << std::exp(-i * (g.p0 / 2)), 0, 0, std::exp(i * (g.p0 / 2));
            return m;
        case GateKind::RX:
            m << cos(g.p0 / 2), -i * sin(g.p0 / 2), -i * sin(g.p0 / 2), cos(g.p0 / 2);
            return m;
        case GateKind::U1:
            m << 1, 0, 0, std::exp(i * g.p0);
            return m;
        case GateKind::U2:
            m << 1, -std::exp(i * g.p1), std::exp(i * g.p0),
                std::exp(i * (g.p0 + g.p1));
            return m / std::sqrt(2.0);
        case GateKind::U3:
            m << cos(g.p0 / 2), -std::exp(i * g.p2) * sin(g.p0 / 2),
                std::exp(i * g.p1) * sin(g.p0 / 2),
                std::exp(i * (g.p1 + g.p2)) * cos(g.p0 / 2);
            return m;
        case GateKind::CX:
            throw std::logic_error("gate_unitary2: CX is two-qubit");
    }
    throw std::logic_error("gate_unitary2: unknown gate");
}

inline void apply_gate_to_column(const Gate& g, Eigen::VectorXcd& col) {
    const auto dim = col.size();
    if (g.kind == GateKind::CX) {
        const uint64_t cbit = uint64_t{1} << g.q0;
        const uint64_t tbit = uint64_t{1} << g.q1;
        for (uint64_t b = 0; b < static_cast<uint64_t>(dim); ++b) {
            if ((b & cbit) && !(b & tbit)) std::swap(col(b), col(b | tbit));
        }
        return;
    }
    const Eigen::Matrix2cd u = gate_unitary2(g);
    const uint64_t qbit = uint64_t{1} << g.q0;
    for (uint64_t b = 0; b < static_cast<uint64_t>(dim); ++b) {
        if (b & qbit) continue;
        const complex a0 = col(b), a1 = col(b | qbit);
        col(b) = u(0, 0) * a0 + u(0, 1) * a1;
        col(b | qbit) = u(1, 0) * a0 + u(1, 1) * a1;
    }
}

/// Full unitary of the circuit (first gate acts first), for oracle checks.
inline Eigen::MatrixXcd circuit_unitary(const Circuit& c,
                                        uint32_t limit = kDenseOracleMaxQubits) {
    check_dense_limit(c.n_qubits(), limit);
    const uint64_t dim = uint64_t{1} << c.n_qubits();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (uint64_t col = 0; col < dim; ++col) {
        Eigen::VectorXcd v = u.col(col);
        for (const auto& g : c.gates()) apply_gate_to_column(g, v);
        u.col(col) = v;
    }
    return u;
}

}  // namespace qadapt
