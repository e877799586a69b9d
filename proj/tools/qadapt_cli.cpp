// Command-line front end. Subcommands wire the toolkit into reproducible
// experiments; every output embeds its configuration and seed. Exit codes:
// 0 success, 2 usage or configuration error, 3 runtime/numeric failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "qadapt/experiments.hpp"

namespace {

using namespace qadapt;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << content;
}

void emit_json(const nlohmann::json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_file(out_path, j.dump(2) + "\n");
}

struct HamCli {
    HamPipelineConfig config;
    std::string level = "fermionic";
    std::string out;
    std::string out_compressed;
};

int cmd_ham(HamCli& cli) {
    cli.config.level =
        cli.level == "qubit" ? CompressionLevel::qubit : CompressionLevel::fermionic;
    auto report = run_ham_report(cli.config);
    emit_json(report, cli.out);
    if (!cli.out_compressed.empty()) {
        auto pipe = build_ham_pipeline(cli.config);
        if (cli.config.level == CompressionLevel::fermionic) {
            auto ints = compressed_integrals(pipe, cli.config);
            std::ofstream f(cli.out_compressed);
            if (!f) throw std::runtime_error("cannot write " + cli.out_compressed);
            write_fcidump(f, ints);
        } else {
            nlohmann::json terms = nlohmann::json::array();
            for (const auto& [p, c] : pipe.qubit_compressed.terms())
                terms.push_back({{"pauli", p.str()}, {"re", c.real()}, {"im", c.imag()}});
            emit_json({{"config", cli.config.to_json()}, {"terms", terms}},
                      cli.out_compressed);
        }
    }
    return 0;
}

struct AdaptCli {
    AdaptExperimentConfig config;
    std::string out_prefix = "adapt";
    bool no_symmetry_filter = false;
};

int cmd_adapt(AdaptCli& cli) {
    cli.config.symmetry_filter = !cli.no_symmetry_filter;
    auto out = run_adapt_experiment(cli.config);
    write_file(cli.out_prefix + ".jsonl", out.trace_jsonl);
    write_file(cli.out_prefix + ".csv", out.summary_csv);
    write_file(cli.out_prefix + "_summary.json", out.summary.dump(2) + "\n");
    save_ansatz_file(cli.out_prefix + "_ansatz.json", out.final_ansatz);
    std::cout << out.summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"classical simulation toolkit for adaptive VQE experiments"};
    app.require_subcommand(1);

    // --- ham ---------------------------------------------------------------
    HamCli ham;
    auto* ham_cmd = app.add_subcommand(
        "ham", "build, compress and report a molecular Hamiltonian");
    ham_cmd->add_option("--fcidump", ham.config.fcidump_path, "FCIDUMP input")
        ->required();
    ham_cmd->add_option("--core", ham.config.core, "core spatial orbitals (0-based)");
    ham_cmd->add_option("--active", ham.config.active, "active spatial orbitals");
    ham_cmd->add_option("--threshold", ham.config.threshold,
                        "compression threshold in Hartree");
    ham_cmd->add_option("--level", ham.level, "compression level")
        ->check(CLI::IsMember({"fermionic", "qubit"}));
    ham_cmd->add_option("--out", ham.out, "report JSON path (default stdout)");
    ham_cmd->add_option("--out-compressed", ham.out_compressed,
                        "compressed Hamiltonian output file");

    // --- adapt -------------------------------------------------------------
    AdaptCli adapt;
    auto* adapt_cmd =
        app.add_subcommand("adapt", "run adaptive ansatz growth with replicates");
    adapt_cmd->add_option("--fcidump", adapt.config.ham.fcidump_path, "FCIDUMP input")
        ->required();
    adapt_cmd->add_option("--core", adapt.config.ham.core, "core spatial orbitals");
    adapt_cmd->add_option("--active", adapt.config.ham.active, "active spatial orbitals");
    adapt_cmd->add_option("--threshold", adapt.config.ham.threshold,
                          "Hamiltonian compression threshold");
    adapt_cmd->add_option("--pool", adapt.config.pool, "operator pool")
        ->check(CLI::IsMember({"fermion", "qubit"}));
    adapt_cmd->add_option("--pool-variant", adapt.config.pool_variant, "pool variant")
        ->check(CLI::IsMember({"singlet", "uccsd"}));
    adapt_cmd->add_flag("--strip-z", adapt.config.strip_z,
                        "strip Z chains from the qubit pool");
    adapt_cmd->add_flag("--no-symmetry-filter", adapt.no_symmetry_filter,
                        "skip the spatial-symmetry pool filter");
    adapt_cmd->add_option("--backend", adapt.config.backend, "energy backend")
        ->check(CLI::IsMember({"exact", "sampled", "noisy"}));
    adapt_cmd->add_option("--shots", adapt.config.shots, "shots per term");
    adapt_cmd->add_option("--alpha", adapt.config.noise_alpha,
                          "coherence scaling for the noisy backend");
    adapt_cmd->add_option("--optimizer", adapt.config.optimizer, "optimizer variant")
        ->check(CLI::IsMember({"cobyla", "mod"}));
    adapt_cmd->add_option("--tol", adapt.config.opt.tol, "optimizer tolerance (Ha)");
    adapt_cmd->add_option("--rhobeg", adapt.config.opt.rhobeg,
                          "initial trust-region radius");
    adapt_cmd->add_option("--max-evals", adapt.config.opt.max_evals,
                          "energy evaluation budget per optimization");
    adapt_cmd->add_option("--prescan-points", adapt.config.opt.prescan_points,
                          "pre-scan grid size");
    adapt_cmd->add_option("--grad-eps", adapt.config.stop.gradient_eps,
                          "gradient stopping threshold");
    adapt_cmd->add_option("--energy-eps", adapt.config.stop.energy_eps,
                          "energy improvement stopping threshold");
    adapt_cmd->add_option("--max-iterations", adapt.config.stop.max_iterations,
                          "iteration cap");
    adapt_cmd->add_flag("--sampled-gradients", adapt.config.sampled_gradients,
                        "sample pool gradients with the shot budget");
    adapt_cmd->add_option("--replicates", adapt.config.replicates, "replicate count");
    adapt_cmd->add_option("--seed", adapt.config.seed, "base seed");
    adapt_cmd->add_option("--out", adapt.out_prefix, "output path prefix");

    // --- scan --------------------------------------------------------------
    ScanConfig scan;
    std::string scan_out;
    auto* scan_cmd = app.add_subcommand("scan", "grid-scan ansatz parameters");
    scan_cmd->add_option("--ansatz", scan.ansatz_path, "ansatz JSON file")->required();
    scan_cmd->add_option("--fcidump", scan.fcidump_path, "FCIDUMP input")->required();
    scan_cmd->add_option("--param-index", scan.param_indices,
                         "parameter index (give twice for a 2-D scan)")
        ->required();
    scan_cmd->add_option("--points", scan.points, "grid points per axis");
    scan_cmd->add_option("--shots", scan.shots, "shots per term (0 = exact)");
    scan_cmd->add_option("--seed", scan.seed, "base seed");
    scan_cmd->add_option("--out", scan_out, "CSV path (default stdout)");

    // --- noise-sweep ---------------------------------------------------------
    NoiseSweepConfig sweep;
    std::string sweep_prefix = "noise_sweep";
    auto* sweep_cmd = app.add_subcommand(
        "noise-sweep", "thermal-relaxation energy-error sweep over alpha");
    sweep_cmd->add_option("--ansatz", sweep.ansatz_path, "ansatz JSON file")->required();
    sweep_cmd->add_option("--fcidump", sweep.fcidump_path, "FCIDUMP input")->required();
    sweep_cmd->add_option("--alphas", sweep.alphas, "coherence scale grid")->required();
    sweep_cmd->add_option("--shots", sweep.shots, "shots per term (0 = exact)");
    sweep_cmd->add_option("--replicates", sweep.replicates, "replicates per alpha");
    sweep_cmd->add_option("--seed", sweep.seed, "base seed");
    sweep_cmd->add_option("--out", sweep_prefix, "output path prefix");

    // --- plan ----------------------------------------------------------------
    std::string plan_calibration;
    uint32_t plan_qubits = 0;
    uint64_t plan_depth = 0, plan_terms = 0, plan_limit = 33000;
    std::string plan_out;
    auto* plan_cmd =
        app.add_subcommand("plan", "qubit layout selection or job splitting");
    plan_cmd->add_option("--calibration", plan_calibration, "calibration JSON");
    plan_cmd->add_option("--n-qubits", plan_qubits, "window size for layout selection");
    plan_cmd->add_option("--depth", plan_depth, "circuit depth for job splitting");
    plan_cmd->add_option("--terms", plan_terms, "Hamiltonian term count");
    plan_cmd->add_option("--limit", plan_limit, "job size limit L");
    plan_cmd->add_option("--out", plan_out, "JSON path (default stdout)");

    // --- circuit ---------------------------------------------------------------
    CircuitReportConfig circ;
    std::string circ_prefix;
    bool circ_no_prep = false;
    auto* circ_cmd =
        app.add_subcommand("circuit", "compile an ansatz and report depth");
    circ_cmd->add_option("--ansatz", circ.ansatz_path, "ansatz JSON file")->required();
    circ_cmd->add_option("--orientation", circ.orientation, "CNOT orientation")
        ->check(CLI::IsMember({"standard", "reverse", "optimal"}));
    circ_cmd->add_option("--export", circ.format, "export format")
        ->check(CLI::IsMember({"text", "openqasm2"}));
    circ_cmd->add_flag("--no-prep", circ_no_prep, "omit reference preparation gates");
    circ_cmd->add_flag("--check", circ.check_unitary,
                       "verify the unitary against the dense oracle (<= 4 qubits)");
    circ_cmd->add_option("--out", circ_prefix,
                         "output prefix (writes <prefix>.json and a circuit file)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ham_cmd) return cmd_ham(ham);
        if (*adapt_cmd) return cmd_adapt(adapt);
        if (*scan_cmd) {
            auto csv = run_scan(scan);
            if (scan_out.empty())
                std::cout << csv;
            else
                write_file(scan_out, csv);
            return 0;
        }
        if (*sweep_cmd) {
            auto out = run_noise_sweep(sweep);
            write_file(sweep_prefix + ".csv", out.csv);
            write_file(sweep_prefix + "_summary.json", out.summary.dump(2) + "\n");
            std::cout << out.summary.dump(2) << "\n";
            return 0;
        }
        if (*plan_cmd) {
            nlohmann::json out;
            if (!plan_calibration.empty()) {
                if (plan_qubits == 0)
                    throw std::domain_error("plan: --n-qubits required with --calibration");
                out = run_layout_report(plan_calibration, plan_qubits);
            } else {
                if (plan_terms == 0)
                    throw std::domain_error(
                        "plan: give --calibration/--n-qubits or --depth/--terms/--limit");
                out = run_job_plan(plan_depth, plan_terms, plan_limit);
            }
            emit_json(out, plan_out);
            return 0;
        }
        if (*circ_cmd) {
            circ.include_prep = !circ_no_prep;
            auto out = run_circuit_report(circ);
            if (circ_prefix.empty()) {
                std::cout << out.report.dump(2) << "\n";
            } else {
                write_file(circ_prefix + ".json", out.report.dump(2) + "\n");
                const std::string ext = circ.format == "openqasm2" ? ".qasm" : ".txt";
                write_file(circ_prefix + ext, out.exported);
                std::cout << out.report.dump(2) << "\n";
            }
            return 0;
        }
    } catch (const FcidumpParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
