#pragma once

// Ansatz file format (JSON): reference occupation plus an ordered step list.
// Qubit steps carry the Pauli string text; fermionic steps carry the raw
// ladder terms of the anti-Hermitian generator so any pool variant round
// trips. Files written here are read back bit-identically by parse.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "qadapt/adapt.hpp"

namespace qadapt {

inline nlohmann::json ansatz_to_json(const Ansatz& ansatz) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& step : ansatz.steps) {
        nlohmann::json s;
        s["theta"] = step.theta;
        s["label"] = step.op.label;
        if (step.op.kind == PoolKind::qubit) {
            s["kind"] = "qubit";
            s["pauli"] = step.op.pauli->str();
        } else {
            s["kind"] = "fermionic";
            nlohmann::json terms = nlohmann::json::array();
            for (const auto& [prod, c] : step.op.generator->terms()) {
                nlohmann::json ops = nlohmann::json::array();
                for (const auto& op : prod)
                    ops.push_back({op.mode, op.create ? 1 : 0});
                terms.push_back({{"product", ops}, {"re", c.real()}, {"im", c.imag()}});
            }
            s["terms"] = terms;
        }
        steps.push_back(std::move(s));
    }
    return {{"n_qubits", ansatz.reference.n_modes},
            {"n_electrons", ansatz.reference.n_electrons},
            {"reference", "hartree_fock"},
            {"steps", steps}};
}

inline Ansatz ansatz_from_json(const nlohmann::json& j) {
    const uint32_t n_qubits = j.at("n_qubits").get<uint32_t>();
    const uint32_t n_electrons = j.at("n_electrons").get<uint32_t>();
    Ansatz ansatz{hartree_fock_reference(n_qubits, n_electrons), {}};
    for (const auto& s : j.at("steps")) {
        const std::string kind = s.at("kind").get<std::string>();
        PoolOperator op{PoolKind::qubit, std::nullopt, std::nullopt,
                        s.value("label", ""), {}, 0, false};
        if (kind == "qubit") {
            op.kind = PoolKind::qubit;
            op.pauli = PauliString::parse(s.at("pauli").get<std::string>(), n_qubits);
        } else if (kind == "fermionic") {
            op.kind = PoolKind::fermionic;
            FermionOperator gen(n_qubits);
            for (const auto& t : s.at("terms")) {
                LadderProduct prod;
                for (const auto& o : t.at("product"))
                    prod.push_back({o.at(0).get<uint32_t>(), o.at(1).get<int>() != 0});
                gen.add_term(prod,
                             complex{t.at("re").get<double>(), t.at("im").get<double>()});
            }
            op.generator = std::move(gen);
        } else {
            throw std::runtime_error("ansatz file: unknown step kind '" + kind + "'");
        }
        const double theta = s.at("theta").get<double>();
        AnsatzStep step{op, op.qubit_image(), theta};
        ansatz.steps.push_back(std::move(step));
    }
    return ansatz;
}

inline Ansatz load_ansatz_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open ansatz file: " + path);
    nlohmann::json j;
    in >> j;
    return ansatz_from_json(j);
}

inline void save_ansatz_file(const std::string& path, const Ansatz& ansatz) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write ansatz file: " + path);
    out << ansatz_to_json(ansatz).dump(2) << "\n";
}

}  // namespace qadapt
