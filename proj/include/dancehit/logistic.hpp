#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dancehit/model.hpp"

namespace dancehit {

inline double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

struct LogisticParams {
    double lambda = 1e-4;  // L2 strength on coefficients; the bias is free
    double tol = 1e-8;     // gradient max-norm convergence threshold
    int max_iter = 200;
};

// L2-regularized negative log-likelihood and its gradient, over the packed
// parameter vector [bias, coefficients...]. Exposed for gradient checks.
inline double logistic_objective(const Matrix& rows, std::span<const int> y01,
                                 std::span<const double> theta, double lambda) {
    const std::size_t p = theta.size() - 1;
    double obj = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double s = theta[0];
        for (std::size_t j = 0; j < p; ++j) s += theta[j + 1] * rows[i][j];
        // log(1+e^s) - y*s, written to avoid overflow for |s| large
        double softplus = s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
        obj += softplus - y01[i] * s;
    }
    for (std::size_t j = 0; j < p; ++j) obj += 0.5 * lambda * theta[j + 1] * theta[j + 1];
    return obj;
}

inline std::vector<double> logistic_gradient(const Matrix& rows, std::span<const int> y01,
                                             std::span<const double> theta, double lambda) {
    const std::size_t p = theta.size() - 1;
    std::vector<double> grad(theta.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double s = theta[0];
        for (std::size_t j = 0; j < p; ++j) s += theta[j + 1] * rows[i][j];
        double resid = sigmoid(s) - y01[i];
        grad[0] += resid;
        for (std::size_t j = 0; j < p; ++j) grad[j + 1] += resid * rows[i][j];
    }
    for (std::size_t j = 0; j < p; ++j) grad[j + 1] += lambda * theta[j + 1];
    return grad;
}

// Hit probability through the logistic curve of the linear score
// s = b + sum a_j x_j; classification cutoff 0.5.
class LogisticModel final : public TrainedModel {
public:
    std::string kind() const override { return "logistic"; }
    const std::vector<std::string>& feature_names() const override { return feature_names_; }

    double linear_score(std::span<const double> row) const {
        check_width(row);
        double s = bias_;
        for (std::size_t j = 0; j < row.size(); ++j) s += coefficients_[j] * row[j];
        return s;
    }

    double score_hit(std::span<const double> row) const override {
        return sigmoid(linear_score(row));
    }

    SongClass classify(std::span<const double> row) const override {
        return score_hit(row) >= 0.5 ? SongClass::Hit : SongClass::NonHit;
    }

    nlohmann::json to_json() const override {
        auto j = detail::model_envelope(kind(), feature_names_);
        j["bias"] = bias_;
        j["coefficients"] = coefficients_;
        j["lambda"] = lambda_;
        j["converged"] = converged_;
        return j;
    }

    static LogisticModel from_json(const nlohmann::json& j) {
        detail::check_envelope(j, "logistic");
        LogisticModel m;
        m.feature_names_ = j.at("feature_names").get<std::vector<std::string>>();
        m.bias_ = j.at("bias").get<double>();
        m.coefficients_ = j.at("coefficients").get<std::vector<double>>();
        m.lambda_ = j.at("lambda").get<double>();
        m.converged_ = j.at("converged").get<bool>();
        return m;
    }

    double bias() const { return bias_; }
    const std::vector<double>& coefficients() const { return coefficients_; }
    bool converged() const { return converged_; }

    friend LogisticModel logistic_fit(const Dataset&, const LogisticParams&);

private:
    std::vector<std::string> feature_names_;
    double bias_ = 0;
    std::vector<double> coefficients_;
    double lambda_ = 0;
    bool converged_ = false;
};

namespace detail {

// Solves A x = b in place by Gaussian elimination with partial pivoting;
// returns false on a (numerically) singular system.
inline bool solve_linear(Matrix& a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        double s = b[col];
        for (std::size_t c = col + 1; c < n; ++c) s -= a[col][c] * b[c];
        b[col] = s / a[col][col];
    }
    return true;
}

}  // namespace detail

// Damped Newton with backtracking on the regularized negative
// log-likelihood. Falls back to a gradient step when the Hessian solve
// fails. Non-convergence within max_iter returns the best iterate with the
// converged flag cleared.
inline LogisticModel logistic_fit(const Dataset& train, const LogisticParams& params = {}) {
    if (train.n_rows() == 0) throw std::invalid_argument("logistic_fit: empty dataset");
    const std::size_t p = train.n_features();
    std::vector<int> y01(train.n_rows());
    for (std::size_t i = 0; i < train.n_rows(); ++i)
        y01[i] = train.labels[i] == SongClass::Hit ? 1 : 0;

    std::vector<double> theta(p + 1, 0.0);
    double obj = logistic_objective(train.rows, y01, theta, params.lambda);
    bool converged = false;

    for (int iter = 0; iter < params.max_iter; ++iter) {
        auto grad = logistic_gradient(train.rows, y01, theta, params.lambda);
        double gmax = 0;
        for (double g : grad) gmax = std::max(gmax, std::fabs(g));
        if (gmax < params.tol) {
            converged = true;
            break;
        }

        // Hessian of the objective: X^T W X plus lambda on the coefficient block.
        Matrix hess(p + 1, std::vector<double>(p + 1, 0.0));
        for (std::size_t i = 0; i < train.n_rows(); ++i) {
            double s = theta[0];
            for (std::size_t j = 0; j < p; ++j) s += theta[j + 1] * train.rows[i][j];
            double mu = sigmoid(s);
            double w = mu * (1.0 - mu);
            if (w < 1e-12) w = 1e-12;
            hess[0][0] += w;
            for (std::size_t j = 0; j < p; ++j) {
                double wx = w * train.rows[i][j];
                hess[0][j + 1] += wx;
                hess[j + 1][0] += wx;
                for (std::size_t l = j; l < p; ++l) {
                    hess[j + 1][l + 1] += wx * train.rows[i][l];
                }
            }
        }
        for (std::size_t j = 1; j <= p; ++j)
            for (std::size_t l = 1; l < j; ++l) hess[j][l] = hess[l][j];
        for (std::size_t j = 1; j <= p; ++j) hess[j][j] += params.lambda;

        std::vector<double> step = grad;
        Matrix hcopy = hess;
        bool solved = detail::solve_linear(hcopy, step);
        if (!solved) {
            double scale = 1.0 / std::max(1.0, gmax);
            for (std::size_t j = 0; j < step.size(); ++j) step[j] = grad[j] * scale;
        }

        // Backtracking line search on the descent direction -step.
        double t = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            std::vector<double> cand(theta.size());
            for (std::size_t j = 0; j < theta.size(); ++j) cand[j] = theta[j] - t * step[j];
            double cand_obj = logistic_objective(train.rows, y01, cand, params.lambda);
            if (cand_obj < obj) {
                theta = std::move(cand);
                obj = cand_obj;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // no descent possible at machine precision
    }

    LogisticModel m;
    m.feature_names_ = train.feature_names;
    m.bias_ = theta[0];
    m.coefficients_.assign(theta.begin() + 1, theta.end());
    m.lambda_ = params.lambda;
    m.converged_ = converged;
    return m;
}

}  // namespace dancehit
