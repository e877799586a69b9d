#pragma once

// Hardware-planning arithmetic: qubit-layout ranking over a linear coupling
// chain via the quality function
//     f_q = sum_i [ (1 - eps2_i)/(1 - eps2_bar) + T1_i/T1_bar + T2_i/T2_bar ]
// (bars are averages over all snapshot qubits; readout error is recorded but
// does not enter f_q), and job splitting n_j = ceil(d * n_H / L) floored at 1.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qadapt {

struct QubitCalibration {
    uint32_t index = 0;
    double t1_us = 0.0;
    double t2_us = 0.0;
    double readout_error = 0.0;  // stored, unused by f_q
    double eps2 = 0.0;           // two-qubit gate error
};

struct CalibrationSnapshot {
    std::vector<QubitCalibration> qubits;
    std::vector<uint32_t> chain;  // linear coupling order, entries index `qubits`
    std::string timestamp;

    void validate() const {
        if (qubits.empty()) throw std::domain_error("calibration: no qubits");
        for (const auto& q : qubits) {
            if (q.t1_us <= 0 || q.t2_us <= 0)
                throw std::domain_error("calibration: T1 and T2 must be positive");
            if (q.readout_error < 0 || q.readout_error > 1 || q.eps2 < 0 || q.eps2 > 1)
                throw std::domain_error("calibration: probabilities must be in [0, 1]");
        }
        for (uint32_t c : chain)
            if (c >= qubits.size())
                throw std::domain_error("calibration: chain index out of range");
    }

    const QubitCalibration& at(uint32_t index) const {
        for (const auto& q : qubits)
            if (q.index == index) return q;
        throw std::domain_error("calibration: unknown qubit index " +
                                std::to_string(index));
    }
};

struct SnapshotAverages {
    double t1 = 0.0, t2 = 0.0, eps2 = 0.0;
};

inline SnapshotAverages snapshot_averages(const CalibrationSnapshot& snapshot) {
    SnapshotAverages a;
    for (const auto& q : snapshot.qubits) {
        a.t1 += q.t1_us;
        a.t2 += q.t2_us;
        a.eps2 += q.eps2;
    }
    const double n = static_cast<double>(snapshot.qubits.size());
    a.t1 /= n;
    a.t2 /= n;
    a.eps2 /= n;
    return a;
}

/// f_q over a window of qubit indices.
inline double layout_quality(const std::vector<uint32_t>& window,
                             const CalibrationSnapshot& snapshot) {
    if (window.empty()) throw std::domain_error("layout_quality: empty window");
    const auto a = snapshot_averages(snapshot);
    double f = 0.0;
    for (uint32_t idx : window) {
        const auto& q = snapshot.at(idx);
        f += (1.0 - q.eps2) / (1.0 - a.eps2) + q.t1_us / a.t1 + q.t2_us / a.t2;
    }
    return f;
}

/// The contiguous chain window of n_needed qubits maximizing f_q; ties go to
/// the lowest starting chain position.
inline std::vector<uint32_t> select_layout(uint32_t n_needed,
                                           const CalibrationSnapshot& snapshot) {
    snapshot.validate();
    if (n_needed == 0) throw std::domain_error("select_layout: need qubits");
    if (snapshot.chain.size() < n_needed)
        throw std::domain_error("select_layout: chain shorter than the request");
    std::vector<uint32_t> best;
    double best_f = 0.0;
    for (size_t start = 0; start + n_needed <= snapshot.chain.size(); ++start) {
        std::vector<uint32_t> window(snapshot.chain.begin() + start,
                                     snapshot.chain.begin() + start + n_needed);
        const double f = layout_quality(window, snapshot);
        if (best.empty() || f > best_f) {
            best = std::move(window);
            best_f = f;
        }
    }
    return best;
}

struct JobPlan {
    uint64_t n_j = 1;
    std::vector<std::pair<uint64_t, uint64_t>> ranges;  // [begin, end) per job
    uint64_t depth = 0;
    uint64_t n_terms = 0;
    uint64_t limit = 0;
};

/// n_j = max(1, ceil(d * n_H / L)) with the observables split into near-equal
/// contiguous ranges.
inline JobPlan job_split(uint64_t depth, uint64_t n_terms, uint64_t limit) {
    if (n_terms < 1) throw std::domain_error("job_split: need at least one term");
    if (limit < 1) throw std::domain_error("job_split: limit must be positive");
    JobPlan plan;
    plan.depth = depth;
    plan.n_terms = n_terms;
    plan.limit = limit;
    plan.n_j = std::max<uint64_t>(1, (depth * n_terms + limit - 1) / limit);
    plan.n_j = std::min(plan.n_j, n_terms);  // no empty jobs
    uint64_t begin = 0;
    for (uint64_t j = 0; j < plan.n_j; ++j) {
        const uint64_t count = n_terms / plan.n_j + (j < n_terms % plan.n_j ? 1 : 0);
        plan.ranges.emplace_back(begin, begin + count);
        begin += count;
    }
    return plan;
}

// JSON schemas

inline CalibrationSnapshot calibration_from_json(const nlohmann::json& j) {
    CalibrationSnapshot snap;
    for (const auto& q : j.at("qubits")) {
        QubitCalibration c;
        c.index = q.at("index").get<uint32_t>();
        c.t1_us = q.at("t1_us").get<double>();
        c.t2_us = q.at("t2_us").get<double>();
        c.readout_error = q.at("readout_error").get<double>();
        c.eps2 = q.at("eps2").get<double>();
        snap.qubits.push_back(c);
    }
    if (j.contains("chain"))
        snap.chain = j.at("chain").get<std::vector<uint32_t>>();
    else
        for (const auto& q : snap.qubits) snap.chain.push_back(q.index);
    snap.timestamp = j.value("timestamp", "");
    snap.validate();
    return snap;
}

inline nlohmann::json to_json(const JobPlan& plan) {
    nlohmann::json ranges = nlohmann::json::array();
    for (const auto& [b, e] : plan.ranges) ranges.push_back({{"begin", b}, {"end", e}});
    return {{"n_j", plan.n_j}, {"ranges", ranges},        {"depth", plan.depth},
            {"n_terms", plan.n_terms}, {"limit", plan.limit}};
}

}  // namespace qadapt
