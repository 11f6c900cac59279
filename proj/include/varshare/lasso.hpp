#ifndef VARSHARE_LASSO_HPP
#define VARSHARE_LASSO_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "varshare/common.hpp"

// Single-equation Lasso
//
//   min_b (1/2N) ||y - X b||^2 + lambda * sum_j w_j |b_j|
//
// solved by cyclic coordinate descent on the covariance form (G = X'X/N,
// c = X'y/N). Columns are standardized to unit sample second moment
// internally; this is a pure change of variables, so the reported solution
// and its KKT certificate refer to the problem exactly as posed. Columns
// with zero scale or (effectively) infinite weight are pinned at zero.

namespace varshare {

struct LassoOptions {
    double tol_coord = 1e-7;  // max standardized coordinate update per sweep
    double tol_kkt = 1e-6;    // max KKT violation, original scale
    int max_iter = 10000;     // coordinate sweeps
    bool record_objective = false;
};

struct LassoSolution {
    Eigen::VectorXd coefficients;
    double objective_value = 0.0;
    int iterations = 0;
    bool converged = false;
    double dual_gap_proxy = 0.0;  // max KKT violation at exit
    std::vector<double> objective_trace;
};

namespace detail {

constexpr double kInfiniteWeight = 1e100;

inline double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

// Covariance-form CD core. gram = X'X/N, cross = X'y/N, ynorm2_over_n = y'y/N.
inline LassoSolution cd_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXd& cross,
                              double ynorm2_over_n, double lambda,
                              const Eigen::VectorXd& weights,
                              const Eigen::VectorXd* warm_start, const LassoOptions& opts) {
    const int m = static_cast<int>(gram.cols());
    if (lambda < 0.0) throw ValidationError("lasso: lambda must be >= 0");
    if (weights.size() != m) throw ValidationError("lasso: weight size mismatch");
    if ((weights.array() < 0.0).any()) throw ValidationError("lasso: negative penalty weight");

    Eigen::VectorXd scale(m);
    std::vector<bool> dead(m, false);
    for (int j = 0; j < m; ++j) {
        double g = gram(j, j);
        scale[j] = g > 0.0 ? std::sqrt(g) : 0.0;
        dead[j] = scale[j] <= 1e-14 || weights[j] >= kInfiniteWeight;
    }

    // standardized Gram and cross moments
    Eigen::MatrixXd gs = gram;
    Eigen::VectorXd cs = cross;
    for (int j = 0; j < m; ++j) {
        double sj = dead[j] ? 1.0 : scale[j];
        gs.col(j) /= sj;
        gs.row(j) /= sj;
        cs[j] /= sj;
    }
    // penalty thresholds in standardized coordinates
    Eigen::VectorXd thr(m);
    for (int j = 0; j < m; ++j)
        thr[j] = dead[j] ? 0.0 : lambda * weights[j] / scale[j];

    Eigen::VectorXd beta_s = Eigen::VectorXd::Zero(m);
    if (warm_start && warm_start->size() == m) {
        for (int j = 0; j < m; ++j)
            if (!dead[j]) beta_s[j] = (*warm_start)[j] * scale[j];
    }
    Eigen::VectorXd a = gs * beta_s;  // gs * beta_s, maintained incrementally

    auto objective = [&](const Eigen::VectorXd& bs) {
        double quad = 0.5 * (ynorm2_over_n - 2.0 * cs.dot(bs) + bs.dot(gs * bs));
        double pen = 0.0;
        for (int j = 0; j < m; ++j)
            if (!dead[j]) pen += lambda * weights[j] * std::fabs(bs[j]) / scale[j];
        return quad + pen;
    };

    auto kkt_violation = [&]() {
        // gradient of the smooth part in original coordinates: c - G b
        double worst = 0.0;
        for (int j = 0; j < m; ++j) {
            if (dead[j]) continue;
            double g = (cs[j] - a[j]) * scale[j];  // = c_j - (G b)_j
            double t = lambda * weights[j];
            double b = beta_s[j];
            double v = b == 0.0 ? std::max(0.0, std::fabs(g) - t)
                                : std::fabs(g - t * (b > 0 ? 1.0 : -1.0));
            worst = std::max(worst, v);
        }
        return worst;
    };

    LassoSolution sol;
    if (opts.record_objective) sol.objective_trace.push_back(objective(beta_s));

    int sweep = 0;
    bool converged = false;
    for (; sweep < opts.max_iter; ++sweep) {
        double max_delta = 0.0;
        for (int j = 0; j < m; ++j) {
            if (dead[j]) continue;
            // unit curvature after standardization: gs(j,j) == 1
            double z = cs[j] - a[j] + beta_s[j];
            double bj = soft_threshold(z, thr[j]);
            double delta = bj - beta_s[j];
            if (delta != 0.0) {
                a += gs.col(j) * delta;
                beta_s[j] = bj;
                max_delta = std::max(max_delta, std::fabs(delta));
            }
        }
        if (opts.record_objective) sol.objective_trace.push_back(objective(beta_s));
        if (max_delta < opts.tol_coord) {
            // refresh a to clear incremental drift before certifying
            a = gs * beta_s;
            if (kkt_violation() < opts.tol_kkt) {
                converged = true;
                ++sweep;
                break;
            }
        }
    }

    a = gs * beta_s;
    sol.iterations = sweep;
    sol.converged = converged;
    sol.dual_gap_proxy = kkt_violation();
    sol.objective_value = objective(beta_s);
    sol.coefficients = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < m; ++j)
        if (!dead[j]) sol.coefficients[j] = beta_s[j] / scale[j];
    return sol;
}

}  // namespace detail

struct LassoProblem {
    Eigen::MatrixXd design;    // N x m
    Eigen::VectorXd response;  // N
    double lambda = 0.0;
    Eigen::VectorXd weights;  // optional per-coordinate penalty weights; empty = all ones
};

inline LassoSolution solve_lasso(const LassoProblem& problem,
                                 const Eigen::VectorXd* warm_start = nullptr,
                                 const LassoOptions& opts = {}) {
    const Eigen::Index n = problem.design.rows();
    const Eigen::Index m = problem.design.cols();
    if (n < 1) throw ValidationError("lasso: empty design");
    if (problem.response.size() != n) throw ValidationError("lasso: response size mismatch");
    if (!problem.design.allFinite() || !problem.response.allFinite())
        throw ValidationError("lasso: non-finite input");
    const double dn = static_cast<double>(n);
    Eigen::MatrixXd gram = (problem.design.transpose() * problem.design) / dn;
    Eigen::VectorXd cross = (problem.design.transpose() * problem.response) / dn;
    Eigen::VectorXd w = problem.weights.size() == m ? problem.weights
                                                    : Eigen::VectorXd::Ones(m);
    if (problem.weights.size() != 0 && problem.weights.size() != m)
        throw ValidationError("lasso: weight size mismatch");
    return detail::cd_solve(gram, cross, problem.response.squaredNorm() / dn, problem.lambda, w,
                            warm_start, opts);
}

// Geometric grid from lambda_max = max_j |X'y|_j / N down to ratio*lambda_max,
// in decreasing order.
inline std::vector<double> lambda_path(const Eigen::MatrixXd& design,
                                       const Eigen::VectorXd& response, int n_lambda,
                                       double ratio) {
    if (n_lambda < 2) throw ValidationError("lambda_path: need at least 2 grid points");
    if (ratio <= 0.0 || ratio >= 1.0) throw ValidationError("lambda_path: ratio must be in (0,1)");
    const double n = static_cast<double>(design.rows());
    double lmax = (design.transpose() * response).cwiseAbs().maxCoeff() / n;
    if (lmax <= 0.0) return {0.0};
    std::vector<double> grid(n_lambda);
    double step = std::pow(ratio, 1.0 / static_cast<double>(n_lambda - 1));
    double l = lmax;
    for (int i = 0; i < n_lambda; ++i, l *= step) grid[i] = l;
    grid.back() = lmax * ratio;
    return grid;
}

// Temporal holdout selection: fit on the first 80% of rows, score one-step
// squared prediction error on the final block, pick the arg-min with ties
// broken toward the larger (sparser) lambda.
inline double select_lambda_timeseries(const Eigen::MatrixXd& design,
                                       const Eigen::VectorXd& response,
                                       const std::vector<double>& grid,
                                       const LassoOptions& opts = {}) {
    const int n = static_cast<int>(design.rows());
    if (n < 30) throw ValidationError("select_lambda_timeseries: need N >= 30");
    if (grid.empty()) throw ValidationError("select_lambda_timeseries: empty grid");
    const int n_fit = static_cast<int>(std::floor(0.8 * n));
    const int n_hold = n - n_fit;
    if (n_hold < 5) {
        // degenerate holdout; fall back to the rate-based scale
        double m = static_cast<double>(std::max<Eigen::Index>(design.cols(), 2));
        return std::sqrt(std::log(m) / static_cast<double>(n));
    }
    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());

    LassoProblem sub;
    sub.design = design.topRows(n_fit);
    sub.response = response.head(n_fit);
    const Eigen::MatrixXd hold_x = design.bottomRows(n_hold);
    const Eigen::VectorXd hold_y = response.tail(n_hold);

    double best_lambda = sorted.front();
    double best_err = std::numeric_limits<double>::infinity();
    Eigen::VectorXd warm;
    for (double lambda : sorted) {
        sub.lambda = lambda;
        LassoSolution sol = solve_lasso(sub, warm.size() ? &warm : nullptr, opts);
        warm = sol.coefficients;
        double err = (hold_y - hold_x * sol.coefficients).squaredNorm() /
                     static_cast<double>(n_hold);
        if (err < best_err) {  // strict: ties keep the larger lambda
            best_err = err;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

}  // namespace varshare

#endif  // VARSHARE_LASSO_HPP
