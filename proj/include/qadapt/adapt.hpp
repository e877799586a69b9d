#pragma once

// The adaptive ansatz engine: pool-gradient screening, greedy operator
// selection, iterative growth with parameter recycling, and convergence
// control. Gradients are commutator expectations <psi|[H, A_k]|psi>.

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qadapt/cobyla.hpp"
#include "qadapt/noise.hpp"
#include "qadapt/pool.hpp"
#include "qadapt/rng.hpp"
#include "qadapt/staircase.hpp"
#include "qadapt/statevector.hpp"

namespace qadapt {

struct AnsatzStep {
    PoolOperator op;
    QubitOperator image;  // anti-Hermitian qubit image, cached
    double theta = 0.0;
};

struct Ansatz {
    ReferenceState reference;
    std::vector<AnsatzStep> steps;

    std::vector<double> thetas() const {
        std::vector<double> out;
        out.reserve(steps.size());
        for (const auto& s : steps) out.push_back(s.theta);
        return out;
    }
};

/// Reference state with the ansatz exponentials applied in the order added
/// (the newest operator acts last on the state).
inline QuantumState prepare_state(const Ansatz& ansatz,
                                  const std::vector<double>& thetas) {
    if (thetas.size() != ansatz.steps.size())
        throw std::invalid_argument("prepare_state: parameter count mismatch");
    QuantumState state = QuantumState::from_reference(ansatz.reference);
    for (size_t k = 0; k < ansatz.steps.size(); ++k) {
        const auto& step = ansatz.steps[k];
        if (step.op.kind == PoolKind::qubit)
            apply_pauli_exponential(state, *step.op.pauli, thetas[k]);
        else
            apply_trotter_exponential(state, step.image, thetas[k]);
    }
    return state;
}

/// Staircase layers realizing the ansatz: one layer per qubit generator, the
/// canonical Trotter expansion for fermionic generators.
inline std::vector<AnsatzLayer> ansatz_layers(const Ansatz& ansatz,
                                              const std::vector<double>& thetas) {
    if (thetas.size() != ansatz.steps.size())
        throw std::invalid_argument("ansatz_layers: parameter count mismatch");
    std::vector<AnsatzLayer> layers;
    for (size_t k = 0; k < ansatz.steps.size(); ++k) {
        const auto& step = ansatz.steps[k];
        if (step.op.kind == PoolKind::qubit) {
            layers.push_back({*step.op.pauli, thetas[k]});
        } else {
            for (const auto& [p, c] : step.image.terms()) {
                if (p.is_identity()) continue;
                layers.push_back({p, thetas[k] * c.imag()});
            }
        }
    }
    return layers;
}

/// Precomputed commutators [H, A_k] for a pool; Hermitian by construction.
class GradientEvaluator {
  public:
    GradientEvaluator(const QubitOperator& hamiltonian,
                      const std::vector<PoolOperator>& pool) {
        commutators_.reserve(pool.size());
        for (const auto& op : pool) {
            auto image = op.qubit_image();
            commutators_.push_back(commutator(hamiltonian, image));
        }
    }

    size_t size() const { return commutators_.size(); }
    const QubitOperator& commutator_for(size_t k) const { return commutators_[k]; }

    std::vector<double> exact(const QuantumState& state) const {
        std::vector<double> g;
        g.reserve(commutators_.size());
        for (const auto& c : commutators_) g.push_back(expectation_exact(state, c));
        return g;
    }

    std::vector<double> sampled(const QuantumState& state, uint64_t shots,
                                uint64_t seed) const {
        std::vector<double> g;
        g.reserve(commutators_.size());
        for (size_t k = 0; k < commutators_.size(); ++k)
            g.push_back(
                expectation_sampled(state, commutators_[k], shots, derive_seed(seed, k))
                    .value);
        return g;
    }

  private:
    std::vector<QubitOperator> commutators_;
};

/// One-shot pool gradient evaluation, gradient_k = <psi|[H, A_k]|psi>.
inline std::vector<double> pool_gradients(const QuantumState& state,
                                          const QubitOperator& hamiltonian,
                                          const std::vector<PoolOperator>& pool) {
    return GradientEvaluator(hamiltonian, pool).exact(state);
}

inline std::vector<double> pool_gradients_sampled(const QuantumState& state,
                                                  const QubitOperator& hamiltonian,
                                                  const std::vector<PoolOperator>& pool,
                                                  uint64_t shots, uint64_t seed) {
    return GradientEvaluator(hamiltonian, pool).sampled(state, shots, seed);
}

enum class EnergyMode { exact, sampled, noisy };
enum class OptimizerVariant { cobyla, mod_cobyla };

struct EnergyBackendConfig {
    EnergyMode mode = EnergyMode::exact;
    uint64_t shots = 1000;       // sampled/noisy modes; 0 in noisy mode = exact probabilities
    uint64_t seed = 0;
    NoiseModel noise;            // noisy mode
};

struct AdaptStopRule {
    double gradient_eps = 1e-3;  // Ha/rad
    double energy_eps = 1e-6;    // Ha
    uint32_t max_iterations = 30;
};

struct AdaptConfig {
    OptimizerConfig optimizer;
    OptimizerVariant optimizer_variant = OptimizerVariant::cobyla;
    AdaptStopRule stop;
    bool sampled_gradients = false;  // gradient screening via sampling
    bool allow_reselection = true;   // the same pool operator may be added twice
    bool record_circuits = true;     // depth/CNOT accounting per iteration
};

struct AdaptIterationRecord {
    uint32_t iteration = 0;  // 1-based
    size_t selected_index = 0;
    std::string selected_label;
    std::vector<double> pool_gradients;
    double max_abs_gradient = 0.0;
    double energy = 0.0;
    double energy_std_error = 0.0;
    uint64_t energy_evaluations = 0;  // optimizer evaluations this iteration
    double effective_tol = 0.0;
    size_t circuit_depth = 0;
    size_t cnot_count = 0;
};

enum class AdaptStopReason { gradient_converged, energy_converged, iteration_cap,
                             pool_exhausted, optimizer_failure };

struct AdaptResult {
    Ansatz ansatz;
    std::vector<AdaptIterationRecord> trace;
    double reference_energy = 0.0;
    double final_energy = 0.0;
    uint64_t total_energy_evaluations = 0;
    AdaptStopReason stop_reason = AdaptStopReason::iteration_cap;
    std::string error;  // optimizer_failure detail; trace holds completed iterations
};

inline const char* to_string(AdaptStopReason r) {
    switch (r) {
        case AdaptStopReason::gradient_converged: return "gradient_converged";
        case AdaptStopReason::energy_converged: return "energy_converged";
        case AdaptStopReason::iteration_cap: return "iteration_cap";
        case AdaptStopReason::pool_exhausted: return "pool_exhausted";
        case AdaptStopReason::optimizer_failure: return "optimizer_failure";
    }
    return "?";
}

inline AdaptResult adapt_run(const QubitOperator& hamiltonian,
                             const std::vector<PoolOperator>& pool,
                             const ReferenceState& reference,
                             const EnergyBackendConfig& backend,
                             const AdaptConfig& config) {
    for (const auto& op : pool)
        if (op.n_qubits() != hamiltonian.n_qubits())
            throw std::invalid_argument("adapt_run: pool qubit count mismatch");
    if (reference.n_modes != hamiltonian.n_qubits())
        throw std::invalid_argument("adapt_run: reference qubit count mismatch");
    if (backend.mode == EnergyMode::noisy) backend.noise.validate();

    AdaptResult result{Ansatz{reference, {}}, {}, 0.0, 0.0, 0, AdaptStopReason::iteration_cap, {}};
    uint64_t eval_counter = 0;
    // orientation assignment for noisy-mode circuits, recomputed per ansatz
    // growth from the layer structure (placeholder angles; the choice depends
    // only on gate patterns)
    std::vector<Orientation> noisy_orientations;

    auto refresh_orientations = [&]() {
        if (backend.mode != EnergyMode::noisy) return;
        std::vector<double> placeholder(result.ansatz.steps.size(), 1.0);
        auto layers = ansatz_layers(result.ansatz, placeholder);
        noisy_orientations = layers.empty()
                                 ? std::vector<Orientation>{}
                                 : choose_orientations(hamiltonian.n_qubits(), layers);
    };

    auto energy_of = [&](const std::vector<double>& thetas) -> ObjectiveValue {
        const uint64_t eval_seed = derive_seed(backend.seed, eval_counter);
        ++eval_counter;
        switch (backend.mode) {
            case EnergyMode::exact: {
                auto state = prepare_state(result.ansatz, thetas);
                return {expectation_exact(state, hamiltonian), 0.0};
            }
            case EnergyMode::sampled: {
                auto state = prepare_state(result.ansatz, thetas);
                auto est = expectation_sampled(state, hamiltonian, backend.shots,
                                               eval_seed);
                return {est.value, est.std_error};
            }
            case EnergyMode::noisy: {
                auto layers = ansatz_layers(result.ansatz, thetas);
                Circuit circuit(hamiltonian.n_qubits());
                for (uint32_t q = 0; q < hamiltonian.n_qubits(); ++q)
                    if (reference.basis_index() >> q & 1) circuit.add(Gate::x(q));
                if (!layers.empty())
                    circuit.append(cancellation_pass(compile_layers(
                        hamiltonian.n_qubits(), layers, noisy_orientations)));
                auto est = measure_energy_noisy(circuit, hamiltonian, backend.noise,
                                                backend.shots, eval_seed);
                return {est.value, est.std_error};
            }
        }
        throw std::logic_error("adapt_run: unknown energy mode");
    };

    GradientEvaluator gradients(hamiltonian, pool);
    std::vector<bool> used(pool.size(), false);

    auto ref_value = energy_of({});
    result.reference_energy = ref_value.value;
    result.final_energy = ref_value.value;

    if (pool.empty()) {
        result.stop_reason = AdaptStopReason::pool_exhausted;
        result.total_energy_evaluations = eval_counter;
        return result;
    }

    std::vector<double> thetas;
    double prev_energy = result.reference_energy;

    for (uint32_t iter = 1; iter <= config.stop.max_iterations; ++iter) {
        auto state = prepare_state(result.ansatz, thetas);
        std::vector<double> grads =
            config.sampled_gradients
                ? gradients.sampled(state, backend.shots,
                                    derive_seed(backend.seed, 1000000 + iter))
                : gradients.exact(state);

        size_t best = pool.size();
        double best_abs = -1.0;
        for (size_t k = 0; k < pool.size(); ++k) {
            if (!config.allow_reselection && used[k]) continue;
            const double a = std::abs(grads[k]);
            if (a > best_abs + 1e-15) {  // ties break to the lowest index
                best_abs = a;
                best = k;
            }
        }
        if (best == pool.size()) {
            result.stop_reason = AdaptStopReason::pool_exhausted;
            break;
        }
        if (best_abs < config.stop.gradient_eps) {
            result.stop_reason = AdaptStopReason::gradient_converged;
            break;
        }

        result.ansatz.steps.push_back(
            AnsatzStep{pool[best], pool[best].qubit_image(), 0.0});
        used[best] = true;
        thetas.push_back(0.0);
        refresh_orientations();

        const uint64_t evals_before = eval_counter;
        OptResult opt;
        try {
            if (config.optimizer_variant == OptimizerVariant::mod_cobyla)
                opt = mod_cobyla([&](const std::vector<double>& x) { return energy_of(x); },
                                 thetas, config.optimizer);
            else
                opt = cobyla_minimize(
                    [&](const std::vector<double>& x) { return energy_of(x); }, thetas,
                    config.optimizer);
        } catch (const std::exception& e) {
            result.stop_reason = AdaptStopReason::optimizer_failure;
            result.error = e.what();
            result.ansatz.steps.pop_back();
            thetas.pop_back();
            break;
        }
        thetas = opt.theta;
        for (size_t k = 0; k < thetas.size(); ++k) result.ansatz.steps[k].theta = thetas[k];

        AdaptIterationRecord rec;
        rec.iteration = iter;
        rec.selected_index = best;
        rec.selected_label = pool[best].label;
        rec.pool_gradients = std::move(grads);
        rec.max_abs_gradient = best_abs;
        rec.energy = opt.value;
        rec.energy_std_error = opt.std_error;
        rec.energy_evaluations = eval_counter - evals_before;
        rec.effective_tol = opt.effective_tol;
        if (config.record_circuits) {
            auto circuit = build_state_circuit_optimized(
                hamiltonian.n_qubits(), reference.basis_index(),
                ansatz_layers(result.ansatz, thetas));
            auto dep = depth_report(circuit);
            rec.circuit_depth = dep.depth;
            rec.cnot_count = dep.cnot_count;
        }
        result.trace.push_back(std::move(rec));
        result.final_energy = opt.value;

        const double improvement = prev_energy - opt.value;
        prev_energy = opt.value;
        if (improvement < config.stop.energy_eps) {
            result.stop_reason = AdaptStopReason::energy_converged;
            break;
        }
        if (iter == config.stop.max_iterations)
            result.stop_reason = AdaptStopReason::iteration_cap;
    }

    result.total_energy_evaluations = eval_counter;
    return result;
}

}  // namespace qadapt
