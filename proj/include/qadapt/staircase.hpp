#pragma once

// Staircase compilation of Pauli exponentials: per-qubit basis changes onto Z,
// a CNOT cascade over the support onto the highest support qubit, RZ(-2 theta)
// there, then the mirrored cascade and inverse basis changes. Realizes
// exp(i theta P) exactly. CNOTs come in two orientations; the reverse flips
// control/target and conjugates with Hadamards, which often cancel against
// neighbouring gates. A peephole pass performs those cancellations and an
// orientation search picks the shallowest variant.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qadapt/circuit.hpp"
#include "qadapt/pauli.hpp"

namespace qadapt {

enum class Orientation { standard, reverse };

struct AnsatzLayer {
    PauliString pauli;
    double theta = 0.0;
};

namespace detail {

inline void emit_cx(Circuit& c, uint32_t control, uint32_t target, Orientation o) {
    if (o == Orientation::standard) {
        c.add(Gate::cx(control, target));
    } else {
        c.add(Gate::h(control));
        c.add(Gate::h(target));
        c.add(Gate::cx(target, control));
        c.add(Gate::h(control));
        c.add(Gate::h(target));
    }
}

inline void emit_basis_change(Circuit& c, const PauliString& p, bool inverse) {
    for (uint32_t q : p.support()) {
        switch (p.letter(q)) {
            case Pauli::X: c.add(Gate::h(q)); break;
            case Pauli::Y: c.add(Gate::rx(inverse ? -M_PI_2 : M_PI_2, q)); break;
            default: break;
        }
    }
}

}  // namespace detail

/// exp(i theta P) with one orientation choice per cascade CNOT position
/// (the mirrored cascade reuses the same orientation per position).
inline Circuit staircase_compile(const PauliString& p, double theta,
                                 const std::vector<Orientation>& per_cnot) {
    if (p.is_identity())
        throw std::domain_error("staircase: identity string is a global phase only");
    const auto support = p.support();
    const size_t w = support.size();
    if (per_cnot.size() != w - 1)
        throw std::invalid_argument("staircase: need one orientation per cascade CNOT");
    Circuit c(p.n_qubits());
    detail::emit_basis_change(c, p, false);
    for (size_t i = 0; i + 1 < w; ++i)
        detail::emit_cx(c, support[i], support[i + 1], per_cnot[i]);
    c.add(Gate::rz(-2.0 * theta, support[w - 1]));
    for (size_t i = w - 1; i-- > 0;)
        detail::emit_cx(c, support[i], support[i + 1], per_cnot[i]);
    detail::emit_basis_change(c, p, true);
    return c;
}

inline Circuit staircase_compile(const PauliString& p, double theta,
                                 Orientation uniform = Orientation::standard) {
    const size_t w = p.support().size();
    return staircase_compile(p, theta,
                             std::vector<Orientation>(w > 0 ? w - 1 : 0, uniform));
}

/// Concatenated staircase layers with a per-layer uniform orientation.
inline Circuit compile_layers(uint32_t n_qubits, std::span<const AnsatzLayer> layers,
                              const std::vector<Orientation>& per_layer) {
    if (layers.size() != per_layer.size())
        throw std::invalid_argument("compile_layers: need one orientation per layer");
    Circuit c(n_qubits);
    for (size_t i = 0; i < layers.size(); ++i)
        c.append(staircase_compile(layers[i].pauli, layers[i].theta, per_layer[i]));
    return c;
}

inline Circuit compile_layers(uint32_t n_qubits, std::span<const AnsatzLayer> layers,
                              Orientation uniform) {
    return compile_layers(n_qubits, layers,
                          std::vector<Orientation>(layers.size(), uniform));
}

/// Peephole cancellation: H.H = I, S.Sdg = I, adjacent identical CNOTs,
/// merging consecutive RZ/RX on the same qubit, dropping zero rotations.
/// Adjacency is in the gate DAG (no intervening gate on the shared qubits).
/// Every rule preserves the unitary exactly.
inline Circuit cancellation_pass(const Circuit& input) {
    std::vector<Gate> gates = input.gates();
    std::vector<bool> alive(gates.size(), true);
    constexpr double kZeroAngle = 1e-12;

    // per-qubit stacks of alive gate indices expose the DAG-adjacent
    // predecessor; cancellations pop entries so cascades resolve in one pass
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::vector<size_t>> stack(input.n_qubits());
        auto top = [&](uint32_t q) -> long {
            return stack[q].empty() ? -1 : static_cast<long>(stack[q].back());
        };
        for (size_t k = 0; k < gates.size(); ++k) {
            if (!alive[k]) continue;
            Gate& g = gates[k];
            if (g.kind == GateKind::CX) {
                const long jc = top(g.q0), jt = top(g.q1);
                if (jc >= 0 && jc == jt && gates[jc] == g) {
                    alive[jc] = alive[k] = false;
                    stack[g.q0].pop_back();
                    stack[g.q1].pop_back();
                    changed = true;
                    continue;
                }
                stack[g.q0].push_back(k);
                stack[g.q1].push_back(k);
                continue;
            }
            if ((g.kind == GateKind::RZ || g.kind == GateKind::RX) &&
                std::abs(g.p0) < kZeroAngle) {
                alive[k] = false;
                changed = true;
                continue;
            }
            const long j = top(g.q0);
            if (j >= 0 && gates[j].arity() == 1) {
                Gate& prev = gates[j];
                const bool hh = prev.kind == GateKind::H && g.kind == GateKind::H;
                const bool ss = (prev.kind == GateKind::S && g.kind == GateKind::Sdg) ||
                                (prev.kind == GateKind::Sdg && g.kind == GateKind::S);
                if (hh || ss) {
                    alive[j] = alive[k] = false;
                    stack[g.q0].pop_back();
                    changed = true;
                    continue;
                }
                const bool merge_rot =
                    (prev.kind == GateKind::RZ && g.kind == GateKind::RZ) ||
                    (prev.kind == GateKind::RX && g.kind == GateKind::RX);
                if (merge_rot) {
                    prev.p0 += g.p0;
                    alive[k] = false;
                    if (std::abs(prev.p0) < kZeroAngle) {
                        alive[j] = false;
                        stack[g.q0].pop_back();
                    }
                    changed = true;
                    continue;
                }
            }
            stack[g.q0].push_back(k);
        }
    }

    Circuit out(input.n_qubits());
    for (size_t k = 0; k < gates.size(); ++k)
        if (alive[k]) out.add(gates[k]);
    return out;
}

/// Orientation search: per-layer standard/reverse assignments, exhaustive up
/// to 12 layers and greedy boundary-matching beyond (uniform candidates are
/// always included); every candidate is run through the cancellation pass and
/// the first minimum-depth assignment wins (CNOT count breaks depth ties).
inline std::vector<Orientation> choose_orientations(
    uint32_t n_qubits, std::span<const AnsatzLayer> layers) {
    if (layers.empty()) throw std::domain_error("optimize_orientations: no layers");
    const size_t L = layers.size();

    std::vector<Orientation> best_assignment;
    size_t best_depth = 0;
    size_t best_cnots = 0;
    bool have_best = false;
    auto consider = [&](const std::vector<Orientation>& assignment) {
        const auto rep = depth_report(
            cancellation_pass(compile_layers(n_qubits, layers, assignment)));
        if (!have_best || rep.depth < best_depth ||
            (rep.depth == best_depth && rep.cnot_count < best_cnots)) {
            best_assignment = assignment;
            best_depth = rep.depth;
            best_cnots = rep.cnot_count;
            have_best = true;
        }
    };

    if (L <= 12) {
        std::vector<Orientation> assignment(L, Orientation::standard);
        for (uint64_t mask = 0; mask < (uint64_t{1} << L); ++mask) {
            for (size_t i = 0; i < L; ++i)
                assignment[i] = (mask >> i & 1) ? Orientation::reverse
                                                : Orientation::standard;
            consider(assignment);
        }
        return best_assignment;
    }

    // greedy: grow the circuit layer by layer, keeping the shallower of the
    // two orientations for each new layer
    std::vector<Orientation> greedy;
    Circuit running(n_qubits);
    for (size_t i = 0; i < L; ++i) {
        Circuit with_std = running;
        with_std.append(staircase_compile(layers[i].pauli, layers[i].theta,
                                          Orientation::standard));
        with_std = cancellation_pass(with_std);
        Circuit with_rev = running;
        with_rev.append(staircase_compile(layers[i].pauli, layers[i].theta,
                                          Orientation::reverse));
        with_rev = cancellation_pass(with_rev);
        if (depth_report(with_rev).depth < depth_report(with_std).depth) {
            greedy.push_back(Orientation::reverse);
            running = std::move(with_rev);
        } else {
            greedy.push_back(Orientation::standard);
            running = std::move(with_std);
        }
    }
    consider(std::vector<Orientation>(L, Orientation::standard));
    consider(std::vector<Orientation>(L, Orientation::reverse));
    consider(greedy);
    return best_assignment;
}

inline Circuit optimize_orientations(uint32_t n_qubits,
                                     std::span<const AnsatzLayer> layers) {
    return cancellation_pass(
        compile_layers(n_qubits, layers, choose_orientations(n_qubits, layers)));
}

/// State-preparation X gates for an occupied-mode reference followed by the
/// ansatz layers; the per-iteration energy circuit shape.
inline Circuit build_state_circuit(uint32_t n_qubits, uint64_t occupation_mask,
                                   std::span<const AnsatzLayer> layers,
                                   Orientation uniform = Orientation::standard) {
    Circuit c(n_qubits);
    for (uint32_t q = 0; q < n_qubits; ++q)
        if (occupation_mask >> q & 1) c.add(Gate::x(q));
    if (!layers.empty()) c.append(compile_layers(n_qubits, layers, uniform));
    return c;
}

inline Circuit build_state_circuit_optimized(uint32_t n_qubits, uint64_t occupation_mask,
                                             std::span<const AnsatzLayer> layers) {
    Circuit c(n_qubits);
    for (uint32_t q = 0; q < n_qubits; ++q)
        if (occupation_mask >> q & 1) c.add(Gate::x(q));
    if (!layers.empty()) c.append(optimize_orientations(n_qubits, layers));
    return c;
}

}  // namespace qadapt
