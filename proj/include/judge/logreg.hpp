#pragma once

// Binary logistic regression fitted by iteratively reweighted least squares
// (Newton's method on the Bernoulli log-likelihood). A tiny ridge on the
// non-intercept weights keeps the Hessian invertible under separation or
// constant columns. Standard errors come from the inverse observed
// information at the returned coefficients.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "judge/error.hpp"

namespace judge {

struct LogRegConfig {
    int max_iter = 100;
    double tol = 1e-8;     // on |delta deviance|
    double ridge = 1e-8;
};

struct LogRegFit {
    std::vector<double> weights;
    double intercept = 0;
    std::vector<double> standard_errors;  // [intercept, w0, w1, ...]
    bool converged = false;
    int iterations = 0;
    double deviance = 0;
    std::string diagnostic;
};

inline double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// Row-major design: X[i] is observation i (no intercept column).
using DesignMatrix = std::vector<std::vector<double>>;

namespace detail {

inline Eigen::MatrixXd design_with_intercept(const DesignMatrix& X, std::size_t d) {
    Eigen::MatrixXd A(static_cast<Eigen::Index>(X.size()), static_cast<Eigen::Index>(d + 1));
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (X[i].size() != d) throw DataError("logreg: ragged design matrix");
        A(static_cast<Eigen::Index>(i), 0) = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (!std::isfinite(X[i][j])) throw DataError("logreg: non-finite feature value");
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = X[i][j];
        }
    }
    return A;
}

// log(1 + exp(x)) without overflow.
inline double log1p_exp(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

inline double log_likelihood(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = A * beta;
    double ll = 0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y[i] * eta[i] - log1p_exp(eta[i]);
    return ll;
}

} // namespace detail

inline LogRegFit logreg_fit(const DesignMatrix& X, std::span<const int> y, const LogRegConfig& cfg = {}) {
    if (X.size() != y.size()) throw DataError("logreg: X and y lengths differ");
    const std::size_t n = X.size();
    const std::size_t d = n ? X.front().size() : 0;
    if (n <= d) throw DataError("logreg: need more observations than features");
    for (int v : y) {
        if (v != 0 && v != 1) throw DataError("logreg: labels must be 0 or 1");
    }

    const Eigen::MatrixXd A = detail::design_with_intercept(X, d);
    Eigen::VectorXd yv(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) yv[static_cast<Eigen::Index>(i)] = y[i];

    const auto p = static_cast<Eigen::Index>(d + 1);
    Eigen::VectorXd ridge = Eigen::VectorXd::Constant(p, cfg.ridge);
    ridge[0] = 0;

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    double deviance = -2 * detail::log_likelihood(A, yv, beta);
    LogRegFit fit;
    Eigen::MatrixXd info(p, p);
    auto information = [&](const Eigen::VectorXd& b) {
        const Eigen::VectorXd eta = A * b;
        Eigen::VectorXd w(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            const double mu = sigmoid(eta[i]);
            w[i] = mu * (1 - mu);
        }
        Eigen::MatrixXd h = A.transpose() * w.asDiagonal() * A;
        h.diagonal() += ridge;
        return h;
    };

    for (int it = 1; it <= cfg.max_iter; ++it) {
        const Eigen::VectorXd eta = A * beta;
        Eigen::VectorXd resid(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < eta.size(); ++i) resid[i] = yv[i] - sigmoid(eta[i]);
        const Eigen::VectorXd grad = A.transpose() * resid - ridge.cwiseProduct(beta);
        info = information(beta);
        const Eigen::VectorXd step = info.ldlt().solve(grad);
        if (!step.allFinite()) {
            fit.diagnostic = "singular information matrix";
            break;
        }
        beta += step;
        const double next = -2 * detail::log_likelihood(A, yv, beta);
        fit.iterations = it;
        const double change = std::abs(deviance - next);
        deviance = next;
        if (change < cfg.tol) {
            fit.converged = true;
            break;
        }
    }
    if (!fit.converged && fit.diagnostic.empty()) fit.diagnostic = "iteration limit reached";
    if (deviance < 1e-6 * static_cast<double>(n)) {
        fit.converged = false;
        fit.diagnostic = "perfect separation: coefficients diverge";
    }

    info = information(beta);
    const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    fit.intercept = beta[0];
    fit.weights.assign(beta.data() + 1, beta.data() + p);
    fit.standard_errors.resize(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) fit.standard_errors[static_cast<std::size_t>(j)] = std::sqrt(cov(j, j));
    fit.deviance = deviance;
    return fit;
}

inline double logreg_predict(const LogRegFit& fit, std::span<const double> x) {
    if (x.size() != fit.weights.size()) throw std::invalid_argument("logreg_predict: dimension mismatch");
    double eta = fit.intercept;
    for (std::size_t j = 0; j < x.size(); ++j) eta += fit.weights[j] * x[j];
    return sigmoid(eta);
}

// Mean log-likelihood per observation and its analytic gradient
// ([intercept, w...]); used to audit fitted optima.
struct LikelihoodProbe {
    double mean_log_likelihood = 0;
    std::vector<double> gradient;
};

inline LikelihoodProbe logreg_probe(const DesignMatrix& X, std::span<const int> y, double intercept,
                                    std::span<const double> weights) {
    const std::size_t n = X.size(), d = weights.size();
    const Eigen::MatrixXd A = detail::design_with_intercept(X, d);
    Eigen::VectorXd yv(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) yv[static_cast<Eigen::Index>(i)] = y[i];
    Eigen::VectorXd beta(static_cast<Eigen::Index>(d + 1));
    beta[0] = intercept;
    for (std::size_t j = 0; j < d; ++j) beta[static_cast<Eigen::Index>(j + 1)] = weights[j];

    LikelihoodProbe probe;
    probe.mean_log_likelihood = detail::log_likelihood(A, yv, beta) / static_cast<double>(n);
    const Eigen::VectorXd eta = A * beta;
    Eigen::VectorXd resid(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < eta.size(); ++i) resid[i] = yv[i] - sigmoid(eta[i]);
    const Eigen::VectorXd g = A.transpose() * resid / static_cast<double>(n);
    probe.gradient.assign(g.data(), g.data() + g.size());
    return probe;
}

// Two-sided Wald p-value for coefficient / standard error.
inline double wald_p_value(double coefficient, double se) {
    if (!(se > 0)) return 1.0;
    return std::erfc(std::abs(coefficient / se) / std::sqrt(2.0));
}

} // namespace judge
