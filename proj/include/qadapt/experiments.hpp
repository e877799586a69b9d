#pragma once

// Reproducible experiment drivers behind the command-line front end. Every
// output embeds its full configuration and base seed; replicate sub-seeds are
// derived as (seed, replicate index), so reruns are byte-identical and
// replicate-level parallelism cannot change results.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qadapt/adapt.hpp"
#include "qadapt/ansatz_io.hpp"
#include "qadapt/dense.hpp"
#include "qadapt/fcidump.hpp"
#include "qadapt/hamiltonian.hpp"
#include "qadapt/planner.hpp"

namespace qadapt {

using nlohmann::json;

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// QADAPT_THREADS=1 forces serial (deferred) execution; results are identical
// either way because every replicate owns a derived seed.
inline std::launch launch_policy() {
    const char* env = std::getenv("QADAPT_THREADS");
    if (env && std::string(env) == "1") return std::launch::deferred;
    return std::launch::async;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hamiltonian pipeline
// ---------------------------------------------------------------------------

enum class CompressionLevel { fermionic, qubit };

struct HamPipelineConfig {
    std::string fcidump_path;
    std::vector<uint32_t> core;    // empty + empty active = full space
    std::vector<uint32_t> active;
    double threshold = 0.0;
    CompressionLevel level = CompressionLevel::fermionic;

    json to_json() const {
        return {{"fcidump", fcidump_path},
                {"core", core},
                {"active", active},
                {"threshold", threshold},
                {"level", level == CompressionLevel::fermionic ? "fermionic" : "qubit"}};
    }
};

struct HamPipeline {
    MolecularIntegrals integrals;
    EffectiveHamiltonian effective;       // full fermionic operator
    FermionOperator fermionic_compressed; // at config.threshold
    CompressionReport fermionic_report;
    QubitOperator qubit_full;
    QubitOperator qubit_compressed;       // per config.level
    CompressionReport qubit_report;       // only meaningful for qubit level
};

inline HamPipeline build_ham_pipeline(const HamPipelineConfig& config) {
    auto ints = parse_fcidump_file(config.fcidump_path);
    ActiveSpaceSpec space;
    if (config.core.empty() && config.active.empty()) {
        space = ActiveSpaceSpec::full(ints.n_orbitals);
    } else {
        space.core = config.core;
        space.active = config.active;
    }
    auto eff = build_effective_hamiltonian(ints, space);
    auto [ferm_comp, ferm_rep] = compress(eff.op, config.threshold);
    auto qubit_full = jordan_wigner(eff.op);
    QubitOperator qubit_comp(qubit_full.n_qubits());
    CompressionReport qubit_rep;
    if (config.level == CompressionLevel::qubit) {
        auto [qc, qr] = compress(qubit_full, config.threshold);
        qubit_comp = std::move(qc);
        qubit_rep = qr;
    } else {
        qubit_comp = jordan_wigner(ferm_comp);
    }
    return HamPipeline{std::move(ints), std::move(eff), std::move(ferm_comp),
                       ferm_rep, std::move(qubit_full), std::move(qubit_comp),
                       qubit_rep};
}

inline json compression_report_json(const CompressionReport& r) {
    return {{"threshold", r.threshold},
            {"kept", r.kept},
            {"dropped", r.dropped},
            {"dropped_abs_sum", r.dropped_abs_sum}};
}

inline json run_ham_report(const HamPipelineConfig& config) {
    auto pipe = build_ham_pipeline(config);
    const auto& eff = pipe.effective;
    json out;
    out["config"] = config.to_json();
    out["n_qubits"] = pipe.qubit_full.n_qubits();
    out["n_active_electrons"] = eff.n_active_electrons;
    out["offset"] = eff.offset;
    out["active_orbsym"] = eff.active_orbsym;
    if (config.level == CompressionLevel::fermionic) {
        out["terms_full"] = term_count(eff.op);
        out["terms_compressed"] = term_count(pipe.fermionic_compressed);
        out["compression"] = compression_report_json(pipe.fermionic_report);
    } else {
        out["terms_full"] = term_count(pipe.qubit_full);
        out["terms_compressed"] = term_count(pipe.qubit_compressed);
        out["compression"] = compression_report_json(pipe.qubit_report);
    }
    out["fermionic_terms_full"] = term_count(eff.op);
    out["fermionic_terms_compressed"] = term_count(pipe.fermionic_compressed);
    out["qubit_terms_full"] = term_count(pipe.qubit_full);
    out["qubit_terms_compressed"] = term_count(pipe.qubit_compressed);
    if (pipe.qubit_full.n_qubits() <= kDenseOracleMaxQubits) {
        out["lambda_min_full"] =
            min_eigenvalue_in_sector(pipe.qubit_full, eff.n_active_electrons);
        out["lambda_min_compressed"] =
            min_eigenvalue_in_sector(pipe.qubit_compressed, eff.n_active_electrons);
    }
    return out;
}

/// Active-space integrals with sub-threshold entries zeroed; the FCIDUMP
/// image of the fermionic-level compressed Hamiltonian.
inline MolecularIntegrals compressed_integrals(const HamPipeline& pipe,
                                               const HamPipelineConfig& config) {
    const auto& src = pipe.integrals;
    ActiveSpaceSpec space;
    if (config.core.empty() && config.active.empty())
        space = ActiveSpaceSpec::full(src.n_orbitals);
    else {
        space.core = config.core;
        space.active = config.active;
    }
    const auto& act = space.active;
    const uint32_t na = static_cast<uint32_t>(act.size());
    MolecularIntegrals out;
    out.n_orbitals = na;
    out.n_electrons = pipe.effective.n_active_electrons;
    out.ms2 = src.ms2;
    out.isym = src.isym;
    out.orbsym = pipe.effective.active_orbsym;
    out.allocate();
    out.e_core = pipe.effective.offset;
    for (uint32_t P = 0; P < na; ++P)
        for (uint32_t Q = 0; Q < na; ++Q) {
            auto it = pipe.effective.op.terms().find(
                LadderProduct{{2 * P, true}, {2 * Q, false}});
            if (it == pipe.effective.op.terms().end()) continue;
            const double v = it->second.real();
            out.h_at(P, Q) = std::abs(v) > config.threshold ? v : 0.0;
        }
    for (uint32_t i = 0; i < na; ++i)
        for (uint32_t j = 0; j < na; ++j)
            for (uint32_t k = 0; k < na; ++k)
                for (uint32_t l = 0; l < na; ++l) {
                    const double v = src.g_at(act[i], act[j], act[k], act[l]);
                    out.g_at(i, j, k, l) = std::abs(0.5 * v) > config.threshold ? v : 0.0;
                }
    return out;
}

// ---------------------------------------------------------------------------
// Adaptive runs
// ---------------------------------------------------------------------------

struct AdaptExperimentConfig {
    HamPipelineConfig ham;
    std::string pool = "fermion";          // fermion | qubit
    std::string pool_variant = "singlet";  // singlet | uccsd
    bool strip_z = false;
    bool symmetry_filter = true;
    std::string backend = "exact";         // exact | sampled | noisy
    uint64_t shots = 1000;
    double noise_alpha = 1.0;
    std::string optimizer = "cobyla";      // cobyla | mod
    OptimizerConfig opt;
    AdaptStopRule stop;
    bool sampled_gradients = false;
    uint32_t replicates = 1;
    uint64_t seed = 0;

    json to_json() const {
        return {{"ham", ham.to_json()},
                {"pool", pool},
                {"pool_variant", pool_variant},
                {"strip_z", strip_z},
                {"symmetry_filter", symmetry_filter},
                {"backend", backend},
                {"shots", shots},
                {"noise_alpha", noise_alpha},
                {"optimizer", optimizer},
                {"tol", opt.tol},
                {"rhobeg", opt.rhobeg},
                {"max_evals", opt.max_evals},
                {"prescan_points", opt.prescan_points},
                {"gradient_eps", stop.gradient_eps},
                {"energy_eps", stop.energy_eps},
                {"max_iterations", stop.max_iterations},
                {"sampled_gradients", sampled_gradients},
                {"replicates", replicates},
                {"seed", seed}};
    }
};

struct AdaptProblem {
    QubitOperator hamiltonian;
    ReferenceState reference;
    std::vector<PoolOperator> pool;
    double fci = std::numeric_limits<double>::quiet_NaN();  // dense oracle when small
};

inline AdaptProblem build_adapt_problem(const AdaptExperimentConfig& config) {
    auto pipe = build_ham_pipeline(config.ham);
    const auto& eff = pipe.effective;
    QubitOperator ham = config.ham.threshold > 0 ? pipe.qubit_compressed
                                                 : pipe.qubit_full;
    const uint32_t n_spatial = ham.n_qubits() / 2;
    auto variant = config.pool_variant == "uccsd" ? FermionicPoolVariant::uccsd_all
                                                  : FermionicPoolVariant::singlet_sd;
    auto pool = build_fermionic_pool(n_spatial, eff.n_active_electrons, variant);
    if (config.symmetry_filter && variant == FermionicPoolVariant::singlet_sd)
        pool = filter_pool_by_symmetry(pool, eff.active_orbsym);
    if (config.pool == "qubit") pool = build_qubit_pool(pool, config.strip_z);

    AdaptProblem prob{std::move(ham),
                      hartree_fock_reference(2 * n_spatial, eff.n_active_electrons),
                      std::move(pool)};
    if (prob.hamiltonian.n_qubits() <= kDenseOracleMaxQubits)
        prob.fci =
            min_eigenvalue_in_sector(prob.hamiltonian, eff.n_active_electrons);
    return prob;
}

inline EnergyBackendConfig backend_for(const AdaptExperimentConfig& config,
                                       uint64_t replicate) {
    EnergyBackendConfig b;
    b.seed = derive_seed(config.seed, replicate);
    b.shots = config.shots;
    if (config.backend == "exact") b.mode = EnergyMode::exact;
    else if (config.backend == "sampled") b.mode = EnergyMode::sampled;
    else if (config.backend == "noisy") {
        b.mode = EnergyMode::noisy;
        b.noise = NoiseModel(100.0, 150.0, config.noise_alpha);
    } else {
        throw std::domain_error("unknown backend '" + config.backend + "'");
    }
    return b;
}

inline AdaptConfig adapt_config_for(const AdaptExperimentConfig& config) {
    AdaptConfig c;
    c.optimizer = config.opt;
    c.optimizer_variant = config.optimizer == "mod" ? OptimizerVariant::mod_cobyla
                                                    : OptimizerVariant::cobyla;
    c.stop = config.stop;
    c.sampled_gradients = config.sampled_gradients;
    return c;
}

struct AdaptExperimentOutput {
    std::vector<AdaptResult> replicates;
    std::string trace_jsonl;  // config line + one record per (replicate, iteration)
    std::string summary_csv;  // per-iteration means and deviations
    json summary;
    Ansatz final_ansatz;      // replicate 0
};

inline AdaptExperimentOutput run_adapt_experiment(const AdaptExperimentConfig& config) {
    auto prob = build_adapt_problem(config);
    const auto adapt_cfg = adapt_config_for(config);

    std::vector<AdaptResult> results(config.replicates);
    std::vector<std::future<AdaptResult>> jobs;
    for (uint32_t r = 0; r < config.replicates; ++r)
        jobs.push_back(std::async(detail::launch_policy(), [&, r]() {
            return adapt_run(prob.hamiltonian, prob.pool, prob.reference,
                             backend_for(config, r), adapt_cfg);
        }));
    for (uint32_t r = 0; r < config.replicates; ++r) results[r] = jobs[r].get();

    AdaptExperimentOutput out{std::move(results), {}, {}, {}, {prob.reference, {}}};

    std::ostringstream jsonl;
    jsonl << json{{"config", config.to_json()}}.dump() << "\n";
    for (uint32_t r = 0; r < out.replicates.size(); ++r) {
        const auto& res = out.replicates[r];
        for (const auto& rec : res.trace) {
            json line{{"replicate", r},
                      {"iteration", rec.iteration},
                      {"selected", rec.selected_label},
                      {"selected_index", rec.selected_index},
                      {"gradients", rec.pool_gradients},
                      {"max_abs_gradient", rec.max_abs_gradient},
                      {"energy", rec.energy},
                      {"energy_std_error", rec.energy_std_error},
                      {"energy_evaluations", rec.energy_evaluations},
                      {"effective_tol", rec.effective_tol},
                      {"depth", rec.circuit_depth},
                      {"cnot_count", rec.cnot_count}};
            jsonl << line.dump() << "\n";
        }
    }
    out.trace_jsonl = jsonl.str();

    size_t max_iters = 0;
    for (const auto& res : out.replicates) max_iters = std::max(max_iters, res.trace.size());
    std::ostringstream csv;
    csv << "# " << json{{"config", config.to_json()}}.dump() << "\n";
    csv << "iteration,replicates,mean_energy,std_energy,mean_evaluations,"
           "mean_cumulative_evaluations,mean_depth,mean_cnots\n";
    std::vector<double> cumulative(out.replicates.size(), 0.0);
    for (size_t it = 0; it < max_iters; ++it) {
        double se = 0, se2 = 0, sev = 0, scum = 0, sd = 0, sc = 0;
        size_t n = 0;
        for (size_t r = 0; r < out.replicates.size(); ++r) {
            const auto& trace = out.replicates[r].trace;
            if (it >= trace.size()) continue;
            const auto& rec = trace[it];
            se += rec.energy;
            se2 += rec.energy * rec.energy;
            sev += static_cast<double>(rec.energy_evaluations);
            cumulative[r] += static_cast<double>(rec.energy_evaluations);
            scum += cumulative[r];
            sd += static_cast<double>(rec.circuit_depth);
            sc += static_cast<double>(rec.cnot_count);
            ++n;
        }
        if (n == 0) break;
        const double mean = se / n;
        const double var = n > 1 ? std::max(0.0, se2 / n - mean * mean) : 0.0;
        csv << (it + 1) << "," << n << "," << detail::fmt(mean) << ","
            << detail::fmt(std::sqrt(var)) << "," << detail::fmt(sev / n) << ","
            << detail::fmt(scum / n) << "," << detail::fmt(sd / n) << ","
            << detail::fmt(sc / n) << "\n";
    }
    out.summary_csv = csv.str();

    double mean_final = 0, mean_evals = 0;
    for (const auto& res : out.replicates) {
        mean_final += res.final_energy;
        mean_evals += static_cast<double>(res.total_energy_evaluations);
    }
    mean_final /= static_cast<double>(out.replicates.size());
    mean_evals /= static_cast<double>(out.replicates.size());
    out.summary = {{"config", config.to_json()},
                   {"replicates", out.replicates.size()},
                   {"mean_final_energy", mean_final},
                   {"mean_total_energy_evaluations", mean_evals},
                   {"reference_energy", out.replicates.front().reference_energy},
                   {"stop_reason", to_string(out.replicates.front().stop_reason)},
                   {"pool_size", prob.pool.size()}};
    if (std::isfinite(prob.fci)) {
        out.summary["fci_energy"] = prob.fci;
        out.summary["mean_error_vs_fci"] = mean_final - prob.fci;
    }
    out.final_ansatz = out.replicates.front().ansatz;
    return out;
}

// ---------------------------------------------------------------------------
// Parameter scans
// ---------------------------------------------------------------------------

struct ScanConfig {
    std::string ansatz_path;
    std::string fcidump_path;  // Hamiltonian for the energies
    std::vector<uint32_t> param_indices;  // 1 or 2 entries
    uint32_t points = 41;
    uint64_t shots = 0;  // 0 = exact
    uint64_t seed = 0;

    json to_json() const {
        return {{"ansatz", ansatz_path},     {"fcidump", fcidump_path},
                {"param_indices", param_indices}, {"points", points},
                {"shots", shots},            {"seed", seed}};
    }
};

inline std::string run_scan(const ScanConfig& config) {
    if (config.param_indices.empty() || config.param_indices.size() > 2)
        throw std::domain_error("scan: need one or two parameter indices");
    if (config.points < 2) throw std::domain_error("scan: need at least two points");
    auto ansatz = load_ansatz_file(config.ansatz_path);
    for (uint32_t p : config.param_indices)
        if (p >= ansatz.steps.size())
            throw std::domain_error("scan: parameter index out of range");
    auto ints = parse_fcidump_file(config.fcidump_path);
    auto eff = build_effective_hamiltonian(ints, ActiveSpaceSpec::full(ints.n_orbitals));
    auto ham = jordan_wigner(eff.op);
    if (ham.n_qubits() != ansatz.reference.n_modes)
        throw std::domain_error("scan: ansatz and Hamiltonian qubit counts differ");

    auto grid = [&](uint32_t k) { return -M_PI + 2.0 * M_PI * k / (config.points - 1); };
    std::ostringstream csv;
    csv << "# " << json{{"config", config.to_json()}}.dump() << "\n";
    uint64_t eval = 0;
    auto energy_at = [&](std::vector<double> thetas) {
        auto state = prepare_state(ansatz, thetas);
        if (config.shots == 0) return expectation_exact(state, ham);
        return expectation_sampled(state, ham, config.shots,
                                   derive_seed(config.seed, eval++))
            .value;
    };
    auto base = ansatz.thetas();
    if (config.param_indices.size() == 1) {
        csv << "theta,energy\n";
        for (uint32_t k = 0; k < config.points; ++k) {
            auto thetas = base;
            thetas[config.param_indices[0]] = grid(k);
            csv << detail::fmt(grid(k)) << "," << detail::fmt(energy_at(thetas)) << "\n";
        }
    } else {
        csv << "theta1,theta2,energy\n";
        for (uint32_t k1 = 0; k1 < config.points; ++k1)
            for (uint32_t k2 = 0; k2 < config.points; ++k2) {
                auto thetas = base;
                thetas[config.param_indices[0]] = grid(k1);
                thetas[config.param_indices[1]] = grid(k2);
                csv << detail::fmt(grid(k1)) << "," << detail::fmt(grid(k2)) << ","
                    << detail::fmt(energy_at(thetas)) << "\n";
            }
    }
    return csv.str();
}

// ---------------------------------------------------------------------------
// Noise sweeps
// ---------------------------------------------------------------------------

struct NoiseSweepConfig {
    std::string ansatz_path;
    std::string fcidump_path;
    std::vector<double> alphas;
    uint64_t shots = 0;       // 0 = exact probabilities
    uint32_t replicates = 1;
    uint64_t seed = 0;

    json to_json() const {
        return {{"ansatz", ansatz_path}, {"fcidump", fcidump_path},
                {"alphas", alphas},      {"shots", shots},
                {"replicates", replicates}, {"seed", seed}};
    }
};

struct NoiseSweepOutput {
    std::string csv;  // alpha, n_operators, mean_error, sigma
    json summary;     // includes the 1 mHa crossing alpha*
    std::vector<double> mean_errors;
};

inline NoiseSweepOutput run_noise_sweep(const NoiseSweepConfig& config) {
    if (config.alphas.empty()) throw std::domain_error("noise sweep: need alphas");
    auto ansatz = load_ansatz_file(config.ansatz_path);
    auto ints = parse_fcidump_file(config.fcidump_path);
    auto eff = build_effective_hamiltonian(ints, ActiveSpaceSpec::full(ints.n_orbitals));
    auto ham = jordan_wigner(eff.op);
    if (ham.n_qubits() > kDensityMaxQubits)
        throw std::domain_error("noise sweep: density simulation limited to 10 qubits");
    if (ham.n_qubits() != ansatz.reference.n_modes)
        throw std::domain_error("noise sweep: qubit count mismatch");

    const auto thetas = ansatz.thetas();
    auto exact_state = prepare_state(ansatz, thetas);
    const double exact_energy = expectation_exact(exact_state, ham);

    auto layers = ansatz_layers(ansatz, thetas);
    Circuit circuit(ham.n_qubits());
    for (uint32_t q = 0; q < ham.n_qubits(); ++q)
        if (ansatz.reference.basis_index() >> q & 1) circuit.add(Gate::x(q));
    if (!layers.empty())
        circuit.append(optimize_orientations(ham.n_qubits(), layers));

    std::ostringstream csv;
    csv << "# " << json{{"config", config.to_json()}}.dump() << "\n";
    csv << "alpha,n_operators,mean_error,sigma\n";
    std::vector<double> means;
    std::vector<double> sigmas;
    for (size_t a = 0; a < config.alphas.size(); ++a) {
        NoiseModel model(100.0, 150.0, config.alphas[a]);
        const uint32_t reps = config.shots == 0 ? 1 : config.replicates;
        std::vector<double> errors(reps);
        std::vector<std::future<double>> jobs;
        for (uint32_t r = 0; r < reps; ++r)
            jobs.push_back(std::async(detail::launch_policy(), [&, a, r]() {
                auto est = measure_energy_noisy(circuit, ham, model, config.shots,
                                                derive_seed(config.seed, a * 10007 + r));
                return std::abs(est.value - exact_energy);
            }));
        for (uint32_t r = 0; r < reps; ++r) errors[r] = jobs[r].get();
        double mean = 0;
        for (double e : errors) mean += e;
        mean /= reps;
        double var = 0;
        for (double e : errors) var += (e - mean) * (e - mean);
        const double sigma = reps > 1 ? std::sqrt(var / (reps - 1)) : 0.0;
        means.push_back(mean);
        sigmas.push_back(sigma);
        csv << detail::fmt(config.alphas[a]) << "," << ansatz.steps.size() << ","
            << detail::fmt(mean) << "," << detail::fmt(sigma) << "\n";
    }

    // alpha* where the mean error crosses 1 mHa, log-log interpolated
    std::optional<double> alpha_star;
    constexpr double kTarget = 1e-3;
    for (size_t a = 0; a < means.size(); ++a) {
        if (means[a] > kTarget) continue;
        if (a == 0) {
            alpha_star = config.alphas[0];
        } else {
            const double x0 = std::log(config.alphas[a - 1]);
            const double x1 = std::log(config.alphas[a]);
            const double y0 = std::log(std::max(means[a - 1], 1e-300));
            const double y1 = std::log(std::max(means[a], 1e-300));
            const double t = (std::log(kTarget) - y0) / (y1 - y0);
            alpha_star = std::exp(x0 + t * (x1 - x0));
        }
        break;
    }

    NoiseSweepOutput out;
    out.csv = csv.str();
    out.mean_errors = means;
    out.summary = {{"config", config.to_json()},
                   {"n_operators", ansatz.steps.size()},
                   {"exact_energy", exact_energy},
                   {"mean_errors", means},
                   {"sigmas", sigmas}};
    if (alpha_star) out.summary["alpha_star_1mha"] = *alpha_star;
    else out.summary["alpha_star_1mha"] = nullptr;
    return out;
}

// ---------------------------------------------------------------------------
// Circuit compilation reports
// ---------------------------------------------------------------------------

struct CircuitReportConfig {
    std::string ansatz_path;
    std::string orientation = "optimal";  // standard | reverse | optimal
    std::string format = "text";          // text | openqasm2
    bool include_prep = true;
    bool check_unitary = false;           // dense oracle, <= 4 qubits

    json to_json() const {
        return {{"ansatz", ansatz_path},
                {"orientation", orientation},
                {"format", format},
                {"include_prep", include_prep},
                {"check_unitary", check_unitary}};
    }
};

struct CircuitReportOutput {
    Circuit circuit;
    json report;
    std::string exported;
};

inline CircuitReportOutput run_circuit_report(const CircuitReportConfig& config) {
    auto ansatz = load_ansatz_file(config.ansatz_path);
    auto layers = ansatz_layers(ansatz, ansatz.thetas());
    if (layers.empty())
        throw std::domain_error("circuit: ansatz has no non-identity layers");
    const uint32_t n = ansatz.reference.n_modes;

    Circuit body(n);
    if (config.orientation == "standard")
        body = cancellation_pass(compile_layers(n, layers, Orientation::standard));
    else if (config.orientation == "reverse")
        body = cancellation_pass(compile_layers(n, layers, Orientation::reverse));
    else if (config.orientation == "optimal")
        body = optimize_orientations(n, layers);
    else
        throw std::domain_error("circuit: unknown orientation '" + config.orientation +
                                "'");

    CircuitReportOutput out{Circuit(n), {}, {}};
    Circuit full(n);
    if (config.include_prep)
        for (uint32_t q = 0; q < n; ++q)
            if (ansatz.reference.basis_index() >> q & 1) full.add(Gate::x(q));
    full.append(body);
    out.circuit = full;

    const auto rep = depth_report(full);
    out.report = {{"config", config.to_json()},
                  {"n_qubits", n},
                  {"n_layers", layers.size()},
                  {"depth", rep.depth},
                  {"cnot_count", rep.cnot_count}};

    if (config.check_unitary) {
        if (n > 4) throw std::domain_error("circuit: unitary check limited to 4 qubits");
        Circuit layers_only(n);
        layers_only.append(body);
        Eigen::MatrixXcd got = circuit_unitary(layers_only);
        const uint64_t dim = uint64_t{1} << n;
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(dim, dim);
        for (const auto& l : layers) {
            // exp(i theta P) column-wise via the statevector engine
            Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
            for (uint64_t col = 0; col < dim; ++col) {
                auto s = QuantumState::computational_basis(n, col);
                apply_pauli_exponential(s, l.pauli, l.theta);
                for (uint64_t row = 0; row < dim; ++row) u(row, col) = s.amplitude(row);
            }
            expected = u * expected;
        }
        const double err = (got - expected).cwiseAbs().maxCoeff();
        out.report["unitary_check_error"] = err;
        if (err > 1e-10) throw std::runtime_error("circuit: unitary check failed");
    }

    out.exported = config.format == "openqasm2" ? export_openqasm(full)
                                                : export_text(full);
    return out;
}

// ---------------------------------------------------------------------------
// Planner front end
// ---------------------------------------------------------------------------

inline json run_layout_report(const std::string& calibration_path, uint32_t n_qubits) {
    std::ifstream in(calibration_path);
    if (!in)
        throw std::invalid_argument("cannot open calibration file: " + calibration_path);
    json j;
    in >> j;
    auto snapshot = calibration_from_json(j);
    auto window = select_layout(n_qubits, snapshot);
    return {{"config", {{"calibration", calibration_path}, {"n_qubits", n_qubits}}},
            {"window", window},
            {"f_q", layout_quality(window, snapshot)}};
}

inline json run_job_plan(uint64_t depth, uint64_t n_terms, uint64_t limit) {
    auto plan = job_split(depth, n_terms, limit);
    json out = to_json(plan);
    out["config"] = {{"depth", depth}, {"terms", n_terms}, {"limit", limit}};
    return out;
}

}  // namespace qadapt
