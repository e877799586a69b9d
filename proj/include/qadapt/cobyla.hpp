#pragma once

// Derivative-free trust-region optimizer to the COBYLA contract: linear
// interpolation models on a simplex of n+1 points, steepest-descent steps on
// the model bounded by the trust radius, geometry repair when the simplex
// degenerates, and radius halving down to the floor implied by the tolerance
// (internal constants follow the published algorithm: edge bound 2.1*rho,
// flatness bound 0.25*rho, halving with a final jump to the floor).
//
// The two modifications used with adaptive ansatz growth are layered on top:
// a [-pi, pi] pre-scan of the newest parameter and a dynamic tolerance equal
// to the measured standard error at the initial guess.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qadapt {

struct ObjectiveValue {
    double value = 0.0;
    double std_error = 0.0;
};

using Objective = std::function<ObjectiveValue(const std::vector<double>&)>;

struct OptimizerConfig {
    double tol = 1e-3;        // radius floor; energy-scale tolerance by convention
    double rhobeg = 0.1;      // initial trust-region radius (radians)
    uint64_t max_evals = 10000;
    int prescan_points = 25;
    bool dynamic_tol = true;  // Mod variant: floor raised to the observed std error

    void validate() const {
        if (tol <= 0) throw std::domain_error("optimizer: tol must be positive");
        if (rhobeg <= 0) throw std::domain_error("optimizer: rhobeg must be positive");
        if (prescan_points < 3) throw std::domain_error("optimizer: prescan_points >= 3");
    }
};

struct OptResult {
    std::vector<double> theta;
    double value = 0.0;
    double std_error = 0.0;
    uint64_t n_evals = 0;
    double effective_tol = 0.0;
    bool converged = false;
};

namespace detail {

struct EvalBudget {
    const Objective& objective;
    uint64_t max_evals;
    uint64_t used = 0;

    std::optional<ObjectiveValue> operator()(const std::vector<double>& x) {
        if (used >= max_evals) return std::nullopt;
        ++used;
        ObjectiveValue v = objective(x);
        if (!std::isfinite(v.value))
            throw std::runtime_error("optimizer: objective returned a non-finite value");
        return v;
    }
};

}  // namespace detail

inline OptResult cobyla_minimize(const Objective& objective, std::vector<double> theta0,
                                 const OptimizerConfig& config,
                                 std::optional<double> tol_override = std::nullopt) {
    config.validate();
    const double tol = tol_override.value_or(config.tol);
    if (tol <= 0) throw std::domain_error("optimizer: tolerance must be positive");
    const size_t n = theta0.size();

    detail::EvalBudget eval{objective, config.max_evals};
    OptResult result;
    result.effective_tol = tol;

    if (n == 0) {
        auto v = eval(theta0);
        result.theta = theta0;
        if (v) {
            result.value = v->value;
            result.std_error = v->std_error;
            result.converged = true;
        }
        result.n_evals = eval.used;
        return result;
    }

    const double rhoend = std::min(tol, config.rhobeg);
    double rho = config.rhobeg;
    constexpr double kEdgeBound = 2.1;   // eta_j <= kEdgeBound * rho
    constexpr double kFlatBound = 0.25;  // sigma_j >= kFlatBound * rho
    constexpr double kAcceptRatio = 0.1;

    using Vec = Eigen::VectorXd;
    using Mat = Eigen::MatrixXd;
    auto to_vec = [](const std::vector<double>& x) {
        return Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
    };

    std::vector<Vec> X(n + 1);
    std::vector<ObjectiveValue> F(n + 1);
    X[0] = to_vec(theta0);
    auto f0 = eval(theta0);
    if (!f0) {
        result.theta = theta0;
        result.value = std::numeric_limits<double>::quiet_NaN();
        result.n_evals = eval.used;
        return result;
    }
    F[0] = *f0;
    bool out_of_budget = false;
    for (size_t j = 1; j <= n; ++j) {
        X[j] = X[0];
        X[j](j - 1) += rho;
        std::vector<double> xj(X[j].data(), X[j].data() + n);
        auto fj = eval(xj);
        if (!fj) {
            out_of_budget = true;
            F[j] = F[0];
            continue;
        }
        F[j] = *fj;
        if (F[j].value < F[0].value) {
            std::swap(X[0], X[j]);
            std::swap(F[0], F[j]);
        }
    }

    auto finish = [&](bool converged) {
        result.theta.assign(X[0].data(), X[0].data() + n);
        result.value = F[0].value;
        result.std_error = F[0].std_error;
        result.n_evals = eval.used;
        result.converged = converged;
        return result;
    };
    if (out_of_budget) return finish(false);

    while (true) {
        // linear interpolation model around the best vertex
        Mat D(n, n);
        Vec df(n);
        for (size_t j = 1; j <= n; ++j) {
            D.row(j - 1) = (X[j] - X[0]).transpose();
            df(j - 1) = F[j].value - F[0].value;
        }
        Eigen::FullPivLU<Mat> lu(D);
        lu.setThreshold(1e-12);
        const bool invertible = lu.isInvertible();

        bool acceptable = invertible;
        size_t j_fix = 1;
        double worst_score = -1.0;
        Mat Dinv;
        Vec g = Vec::Zero(n);
        if (invertible) {
            Dinv = lu.inverse();  // columns a_j relate vertices to face normals
            g = Dinv * df;
            for (size_t j = 1; j <= n; ++j) {
                const double eta = (X[j] - X[0]).norm();
                const double sigma = 1.0 / Dinv.col(j - 1).norm();
                const double long_edge = eta / (kEdgeBound * rho);
                const double flat = (kFlatBound * rho) / sigma;
                const double score = std::max(long_edge, flat);
                if (score > worst_score) {
                    worst_score = score;
                    j_fix = j;
                }
                if (eta > kEdgeBound * rho || sigma < kFlatBound * rho)
                    acceptable = false;
            }
        } else {
            // degenerate simplex: rebuild the vertex with the shortest edge
            double best_len = std::numeric_limits<double>::infinity();
            for (size_t j = 1; j <= n; ++j) {
                const double eta = (X[j] - X[0]).norm();
                if (eta < best_len) {
                    best_len = eta;
                    j_fix = j;
                }
            }
        }

        if (!acceptable) {
            Vec d;
            if (invertible) {
                d = Dinv.col(j_fix - 1);
                d.normalize();
            } else {
                d = Vec::Zero(n);
                d((j_fix - 1) % n) = 1.0;
            }
            if (g.dot(d) > 0) d = -d;  // lean toward model descent
            Vec x_new = X[0] + rho * d;
            std::vector<double> xv(x_new.data(), x_new.data() + n);
            auto fv = eval(xv);
            if (!fv) return finish(false);
            X[j_fix] = x_new;
            F[j_fix] = *fv;
            if (F[j_fix].value < F[0].value) {
                std::swap(X[0], X[j_fix]);
                std::swap(F[0], F[j_fix]);
            }
            continue;
        }

        const double gnorm = g.norm();
        bool progressed = false;
        if (gnorm * rho > 1e-15) {
            Vec x_new = X[0] - (rho / gnorm) * g;
            std::vector<double> xv(x_new.data(), x_new.data() + n);
            auto fv = eval(xv);
            if (!fv) return finish(false);
            const double predicted = rho * gnorm;
            const double actual = F[0].value - fv->value;

            // drop the vertex that keeps the simplex volume largest
            Vec step = x_new - X[0];
            size_t j_drop = 1;
            double best_vol = -1.0;
            for (size_t j = 1; j <= n; ++j) {
                const double vol = std::abs(Dinv.col(j - 1).dot(step));
                if (vol > best_vol) {
                    best_vol = vol;
                    j_drop = j;
                }
            }
            if (fv->value < F[0].value) {
                X[j_drop] = x_new;
                F[j_drop] = *fv;
                std::swap(X[0], X[j_drop]);
                std::swap(F[0], F[j_drop]);
            } else if (fv->value < F[j_drop].value) {
                X[j_drop] = x_new;
                F[j_drop] = *fv;
            }
            progressed = actual >= kAcceptRatio * predicted;
        }

        if (!progressed) {
            if (rho <= rhoend * (1.0 + 1e-9)) return finish(true);
            rho *= 0.5;
            if (rho <= 1.5 * rhoend) rho = rhoend;
        }
    }
}

/// Scan the newest (final) parameter over a uniform inclusive grid on
/// [-pi, pi] with the other parameters fixed; returns the grid argmin as the
/// initial value. Ties break toward the smallest |theta|, then the smallest
/// theta. Outputs the objective at the chosen point and the evaluation count.
inline double prescan_last_parameter(const Objective& objective,
                                     const std::vector<double>& theta,
                                     const OptimizerConfig& config,
                                     ObjectiveValue* value_at_best = nullptr,
                                     uint64_t* n_evals = nullptr) {
    config.validate();
    if (theta.empty())
        throw std::domain_error("prescan: parameter vector is empty");
    const int m = config.prescan_points;
    std::vector<double> probe = theta;
    double best_theta = 0.0;
    ObjectiveValue best_value{std::numeric_limits<double>::infinity(), 0.0};
    bool have_best = false;
    for (int k = 0; k < m; ++k) {
        const double t = -M_PI + 2.0 * M_PI * k / (m - 1);
        probe.back() = t;
        ObjectiveValue v = objective(probe);
        if (!std::isfinite(v.value))
            throw std::runtime_error("prescan: objective returned a non-finite value");
        const bool better =
            !have_best || v.value < best_value.value ||
            (v.value == best_value.value &&
             (std::abs(t) < std::abs(best_theta) ||
              (std::abs(t) == std::abs(best_theta) && t < best_theta)));
        if (better) {
            best_theta = t;
            best_value = v;
            have_best = true;
        }
    }
    if (value_at_best) *value_at_best = best_value;
    if (n_evals) *n_evals += m;
    return best_theta;
}

/// Pre-scan of the newest parameter plus the dynamic tolerance update:
/// effective_tol = max(tol, std_error at the initial guess), measured once.
inline OptResult mod_cobyla(const Objective& objective, std::vector<double> theta0,
                            const OptimizerConfig& config) {
    config.validate();
    uint64_t prescan_evals = 0;
    ObjectiveValue at_init{};
    if (!theta0.empty())
        theta0.back() = prescan_last_parameter(objective, theta0, config, &at_init,
                                               &prescan_evals);
    double effective_tol = config.tol;
    if (config.dynamic_tol) effective_tol = std::max(config.tol, at_init.std_error);

    OptimizerConfig inner = config;
    inner.max_evals = (config.max_evals > prescan_evals)
                          ? config.max_evals - prescan_evals
                          : 0;
    auto result = cobyla_minimize(objective, std::move(theta0), inner, effective_tol);
    result.n_evals += prescan_evals;
    result.effective_tol = effective_tol;
    return result;
}

}  // namespace qadapt
