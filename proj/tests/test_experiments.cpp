#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qadapt/experiments.hpp"

using namespace qadapt;

namespace {

std::string fixture(const std::string& name) {
    return std::string(QADAPT_FIXTURE_DIR) + "/" + name;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

Ansatz small_h2_ansatz(double theta0) {
    auto ints = parse_fcidump_file(fixture("h2.fcidump"));
    auto eff = build_effective_hamiltonian(ints, ActiveSpaceSpec::full(2));
    auto pool = build_qubit_pool(build_fermionic_pool(2, 2));
    Ansatz ansatz{hartree_fock_reference(4, 2), {}};
    ansatz.steps.push_back({pool[0], pool[0].qubit_image(), theta0});
    return ansatz;
}

}  // namespace

TEST_CASE("benzene ham report reproduces the published counts") {
    HamPipelineConfig cfg;
    cfg.fcidump_path = fixture("benzene_4in4_no.fcidump");
    cfg.threshold = 1e-2;
    auto rep = run_ham_report(cfg);
    CHECK(rep["terms_full"] == 1057);
    CHECK(rep["terms_compressed"] == 233);
    CHECK(rep["lambda_min_full"].get<double>() ==
          Catch::Approx(-227.9458976385).margin(1e-8));
    const double gap = std::abs(rep["lambda_min_compressed"].get<double>() -
                                rep["lambda_min_full"].get<double>());
    CHECK(gap < 1.5e-3);
    CHECK(rep["config"]["threshold"] == 1e-2);
}

TEST_CASE("threshold zero keeps the counts equal") {
    HamPipelineConfig cfg;
    cfg.fcidump_path = fixture("h2.fcidump");
    cfg.threshold = 0.0;
    auto rep = run_ham_report(cfg);
    CHECK(rep["terms_full"] == rep["terms_compressed"]);
}

TEST_CASE("qubit-level compression is available behind the flag") {
    HamPipelineConfig cfg;
    cfg.fcidump_path = fixture("benzene_4in4_no.fcidump");
    cfg.threshold = 1e-2;
    cfg.level = CompressionLevel::qubit;
    auto rep = run_ham_report(cfg);
    CHECK(rep["terms_full"] == rep["qubit_terms_full"]);
    CHECK(rep["qubit_terms_full"].get<size_t>() < 1057);
    CHECK(rep["terms_compressed"].get<size_t>() <
          rep["terms_full"].get<size_t>());
}

TEST_CASE("compressed integrals round trip as FCIDUMP") {
    HamPipelineConfig cfg;
    cfg.fcidump_path = fixture("benzene_4in4_no.fcidump");
    cfg.threshold = 1e-2;
    auto pipe = build_ham_pipeline(cfg);
    auto compressed = compressed_integrals(pipe, cfg);
    auto text = fcidump_to_string(compressed);
    std::istringstream in(text);
    auto parsed = parse_fcidump(in);
    auto eff = build_effective_hamiltonian(parsed, ActiveSpaceSpec::full(4));
    CHECK(term_count(eff.op) == 233);
}

TEST_CASE("h2 ham report lambda matches the dense oracle") {
    HamPipelineConfig cfg;
    cfg.fcidump_path = fixture("h2.fcidump");
    auto rep = run_ham_report(cfg);
    CHECK(rep["lambda_min_full"].get<double>() ==
          Catch::Approx(-1.1373060358).margin(1e-9));
}

TEST_CASE("adapt experiment output is byte-identical across reruns") {
    AdaptExperimentConfig cfg;
    cfg.ham.fcidump_path = fixture("h2.fcidump");
    cfg.pool = "qubit";
    cfg.backend = "sampled";
    cfg.shots = 100;
    cfg.replicates = 3;
    cfg.seed = 12345;
    cfg.stop.max_iterations = 2;
    cfg.opt.max_evals = 300;
    auto a = run_adapt_experiment(cfg);
    auto b = run_adapt_experiment(cfg);
    CHECK(a.trace_jsonl == b.trace_jsonl);
    CHECK(a.summary_csv == b.summary_csv);
    CHECK(a.summary.dump() == b.summary.dump());
    CHECK_FALSE(a.trace_jsonl.empty());

    // different seed changes the sampled trajectory
    cfg.seed = 999;
    auto c = run_adapt_experiment(cfg);
    CHECK(c.trace_jsonl != a.trace_jsonl);
}

TEST_CASE("adapt experiment reaches FCI on H2 and emits an ansatz file") {
    AdaptExperimentConfig cfg;
    cfg.ham.fcidump_path = fixture("h2.fcidump");
    cfg.opt.tol = 1e-7;
    cfg.stop.gradient_eps = 1e-6;
    auto out = run_adapt_experiment(cfg);
    CHECK(out.summary["mean_error_vs_fci"].get<double>() < 1e-6);

    auto path = temp_file("qadapt_test_ansatz.json");
    save_ansatz_file(path.string(), out.final_ansatz);
    auto loaded = load_ansatz_file(path.string());
    CHECK(loaded.steps.size() == out.final_ansatz.steps.size());
    auto s1 = prepare_state(out.final_ansatz, out.final_ansatz.thetas());
    auto s2 = prepare_state(loaded, loaded.thetas());
    for (size_t i = 0; i < s1.dim(); ++i)
        CHECK(std::abs(s1.amplitude(i) - s2.amplitude(i)) < 1e-14);
    std::filesystem::remove(path);
}

TEST_CASE("scan is periodic and fits the expected trigonometric form") {
    auto ansatz = small_h2_ansatz(0.2);
    auto path = temp_file("qadapt_scan_ansatz.json");
    save_ansatz_file(path.string(), ansatz);

    ScanConfig cfg;
    cfg.ansatz_path = path.string();
    cfg.fcidump_path = fixture("h2.fcidump");
    cfg.param_indices = {0};
    cfg.points = 25;
    auto csv = run_scan(cfg);
    std::filesystem::remove(path);

    // parse rows
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // config comment
    std::getline(in, line);  // header
    std::vector<double> thetas, energies;
    while (std::getline(in, line)) {
        auto comma = line.find(',');
        thetas.push_back(std::stod(line.substr(0, comma)));
        energies.push_back(std::stod(line.substr(comma + 1)));
    }
    REQUIRE(thetas.size() == 25);
    CHECK(energies.front() == Catch::Approx(energies.back()).margin(1e-12));

    // least squares fit to a + b cos(2t) + c sin(2t)
    Eigen::MatrixXd design(thetas.size(), 3);
    Eigen::VectorXd y(thetas.size());
    for (size_t i = 0; i < thetas.size(); ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(2 * thetas[i]);
        design(i, 2) = std::sin(2 * thetas[i]);
        y(i) = energies[i];
    }
    Eigen::VectorXd coef = design.colPivHouseholderQr().solve(y);
    const double residual = (design * coef - y).cwiseAbs().maxCoeff();
    CHECK(residual < 1e-10);
}

TEST_CASE("2-D scans emit points^2 rows") {
    auto ints = parse_fcidump_file(fixture("h2.fcidump"));
    auto pool = build_qubit_pool(build_fermionic_pool(2, 2));
    Ansatz ansatz{hartree_fock_reference(4, 2), {}};
    ansatz.steps.push_back({pool[0], pool[0].qubit_image(), 0.1});
    ansatz.steps.push_back({pool[1], pool[1].qubit_image(), -0.2});
    auto path = temp_file("qadapt_scan2_ansatz.json");
    save_ansatz_file(path.string(), ansatz);

    ScanConfig cfg;
    cfg.ansatz_path = path.string();
    cfg.fcidump_path = fixture("h2.fcidump");
    cfg.param_indices = {0, 1};
    cfg.points = 7;
    auto csv = run_scan(cfg);
    size_t rows = 0;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == 2 + 49);

    ScanConfig bad = cfg;
    bad.param_indices = {5};
    CHECK_THROWS_AS(run_scan(bad), std::domain_error);
    std::filesystem::remove(path);
}

TEST_CASE("noise sweep output shape and the noiseless limit") {
    auto ansatz = small_h2_ansatz(0.15);
    auto path = temp_file("qadapt_noise_ansatz.json");
    save_ansatz_file(path.string(), ansatz);

    NoiseSweepConfig cfg;
    cfg.ansatz_path = path.string();
    cfg.fcidump_path = fixture("h2.fcidump");
    cfg.alphas = {1.0, 4.0, 16.0, 64.0, 256.0, 1024.0, 4096.0, 1e9};
    auto out = run_noise_sweep(cfg);
    std::filesystem::remove(path);

    REQUIRE(out.mean_errors.size() == 8);
    for (size_t i = 1; i < out.mean_errors.size(); ++i)
        CHECK(out.mean_errors[i] <= out.mean_errors[i - 1] + 1e-12);
    CHECK(out.mean_errors.back() < 1e-8);  // alpha = 1e9 is noiseless
    CHECK(out.summary["alpha_star_1mha"].is_number());
    CHECK(out.csv.find("alpha,n_operators,mean_error,sigma") != std::string::npos);
}

TEST_CASE("circuit reports compile all orientations and check unitaries") {
    auto ansatz = small_h2_ansatz(0.3);
    auto path = temp_file("qadapt_circ_ansatz.json");
    save_ansatz_file(path.string(), ansatz);

    CircuitReportConfig cfg;
    cfg.ansatz_path = path.string();
    cfg.check_unitary = true;
    auto opt = run_circuit_report(cfg);
    cfg.orientation = "standard";
    auto std_rep = run_circuit_report(cfg);
    cfg.orientation = "reverse";
    auto rev_rep = run_circuit_report(cfg);
    std::filesystem::remove(path);

    const auto d_opt = opt.report["depth"].get<size_t>();
    CHECK(d_opt <= std_rep.report["depth"].get<size_t>());
    CHECK(d_opt <= rev_rep.report["depth"].get<size_t>());
    CHECK(opt.report["unitary_check_error"].get<double>() < 1e-10);
    CHECK(parse_text(opt.exported) == opt.circuit);
}

TEST_CASE("layout and job plan reports") {
    nlohmann::json cal = {{"qubits", nlohmann::json::array()},
                          {"chain", nlohmann::json::array()},
                          {"timestamp", "t"}};
    for (int i = 0; i < 8; ++i) {
        cal["qubits"].push_back({{"index", i},
                                 {"t1_us", i == 3 ? 10.0 : 100.0},
                                 {"t2_us", i == 3 ? 15.0 : 150.0},
                                 {"readout_error", 0.01},
                                 {"eps2", i == 3 ? 0.2 : 0.01}});
        cal["chain"].push_back(i);
    }
    auto path = temp_file("qadapt_cal.json");
    std::ofstream(path) << cal.dump();
    auto layout = run_layout_report(path.string(), 4);
    std::filesystem::remove(path);
    for (auto q : layout["window"]) CHECK(q.get<uint32_t>() != 3);

    auto plan = run_job_plan(181, 233, 33000);
    CHECK(plan["n_j"] == 2);
}
