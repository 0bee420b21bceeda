#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dancehit/model.hpp"
#include "dancehit/rng.hpp"

namespace dancehit {

// Polynomial (1 + x.z/c)^d or RBF exp(-|x-z|^2 / sigma^2).
struct KernelSpec {
    enum class Kind { Polynomial, Rbf };

    Kind kind = Kind::Polynomial;
    int degree = 1;      // d, polynomial only
    double scale = 1.0;  // c, polynomial only
    double sigma = 1.0;  // RBF width

    static KernelSpec polynomial(int d, double c = 1.0) {
        KernelSpec k;
        k.kind = Kind::Polynomial;
        k.degree = d;
        k.scale = c;
        k.validate();
        return k;
    }
    static KernelSpec rbf(double sigma) {
        KernelSpec k;
        k.kind = Kind::Rbf;
        k.sigma = sigma;
        k.validate();
        return k;
    }

    void validate() const {
        if (degree < 1) throw std::invalid_argument("KernelSpec: degree >= 1");
        if (!(scale > 0)) throw std::invalid_argument("KernelSpec: scale > 0");
        if (!(sigma > 0)) throw std::invalid_argument("KernelSpec: sigma > 0");
    }

    nlohmann::json to_json() const {
        return nlohmann::json{{"kind", kind == Kind::Polynomial ? "polynomial" : "rbf"},
                              {"degree", degree},
                              {"scale", scale},
                              {"sigma", sigma}};
    }
    static KernelSpec from_json(const nlohmann::json& j) {
        KernelSpec k;
        k.kind = j.at("kind").get<std::string>() == "polynomial" ? Kind::Polynomial : Kind::Rbf;
        k.degree = j.at("degree").get<int>();
        k.scale = j.at("scale").get<double>();
        k.sigma = j.at("sigma").get<double>();
        k.validate();
        return k;
    }
};

inline double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                          std::span<const double> z) {
    if (x.size() != z.size())
        throw std::invalid_argument("kernel_eval: dimension mismatch");
    if (spec.kind == KernelSpec::Kind::Polynomial) {
        double dot = 0;
        for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * z[i];
        return std::pow(1.0 + dot / spec.scale, spec.degree);
    }
    double d2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - z[i];
        d2 += d * d;
    }
    return std::exp(-d2 / (spec.sigma * spec.sigma));
}

// Soft-margin SVM in dual form. Only support vectors (alpha > 0) are kept;
// the margin is sum_i alpha_i y_i K(x_i, x) + b and the class is its sign.
class SvmModel final : public TrainedModel {
public:
    std::string kind() const override { return "svm"; }
    const std::vector<std::string>& feature_names() const override { return feature_names_; }

    double margin(std::span<const double> row) const {
        check_width(row);
        double m = bias_;
        for (std::size_t i = 0; i < support_x_.size(); ++i)
            m += alpha_[i] * y_[i] * kernel_eval(kernel_, support_x_[i], row);
        return m;
    }

    double score_hit(std::span<const double> row) const override { return margin(row); }

    SongClass classify(std::span<const double> row) const override {
        return margin(row) >= 0 ? SongClass::Hit : SongClass::NonHit;
    }

    const Matrix& support_vectors() const { return support_x_; }
    const std::vector<double>& alphas() const { return alpha_; }
    const std::vector<double>& support_labels() const { return y_; }
    double bias() const { return bias_; }
    const KernelSpec& kernel() const { return kernel_; }
    double c() const { return c_; }
    double tol() const { return tol_; }

    nlohmann::json to_json() const override {
        auto j = detail::model_envelope(kind(), feature_names_);
        j["kernel"] = kernel_.to_json();
        j["C"] = c_;
        j["tol"] = tol_;
        j["bias"] = bias_;
        j["support_vectors"] = support_x_;
        j["alphas"] = alpha_;
        j["labels"] = y_;
        return j;
    }

    static SvmModel from_json(const nlohmann::json& j) {
        detail::check_envelope(j, "svm");
        SvmModel m;
        m.feature_names_ = j.at("feature_names").get<std::vector<std::string>>();
        m.kernel_ = KernelSpec::from_json(j.at("kernel"));
        m.c_ = j.at("C").get<double>();
        m.tol_ = j.at("tol").get<double>();
        m.bias_ = j.at("bias").get<double>();
        m.support_x_ = j.at("support_vectors").get<Matrix>();
        m.alpha_ = j.at("alphas").get<std::vector<double>>();
        m.y_ = j.at("labels").get<std::vector<double>>();
        return m;
    }

    friend SvmModel smo_fit(const Dataset&, const KernelSpec&, double, double);

private:
    std::vector<std::string> feature_names_;
    Matrix support_x_;
    std::vector<double> alpha_;
    std::vector<double> y_;  // -1 / +1
    double bias_ = 0;
    KernelSpec kernel_;
    double c_ = 1;
    double tol_ = 1e-3;
};

// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij of a
// trained model, recomputed from its support set.
inline double svm_dual_objective(const SvmModel& m) {
    const auto& a = m.alphas();
    const auto& y = m.support_labels();
    const auto& x = m.support_vectors();
    double obj = 0;
    for (double ai : a) obj += ai;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            obj -= 0.5 * a[i] * a[j] * y[i] * y[j] * kernel_eval(m.kernel(), x[i], x[j]);
    return obj;
}

// Sequential minimal optimization with first-order maximal-violating-pair
// selection. Terminates when no KKT violation exceeds tol.
inline SvmModel smo_fit(const Dataset& train, const KernelSpec& kernel, double c_reg,
                        double tol = 1e-3) {
    kernel.validate();
    if (!(c_reg > 0)) throw std::invalid_argument("smo_fit: C > 0 required");
    const std::size_t n = train.n_rows();
    if (n < 2) throw std::invalid_argument("smo_fit: need >= 2 instances");

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = train.labels[i] == SongClass::Hit ? 1.0 : -1.0;

    Matrix k(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            k[i][j] = k[j][i] = kernel_eval(kernel, train.rows[i], train.rows[j]);

    std::vector<double> alpha(n, 0.0);
    // grad_i of the minimization form 1/2 a'Qa - e'a; starts at -1.
    std::vector<double> grad(n, -1.0);

    const long max_iter = 200000 + 200 * static_cast<long>(n);
    for (long iter = 0; iter < max_iter; ++iter) {
        // i: most violating in I_up, j: most violating in I_low.
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        std::size_t i = n, j = n;
        for (std::size_t t = 0; t < n; ++t) {
            double v = -y[t] * grad[t];
            bool in_up = (y[t] > 0 && alpha[t] < c_reg) || (y[t] < 0 && alpha[t] > 0);
            bool in_low = (y[t] < 0 && alpha[t] < c_reg) || (y[t] > 0 && alpha[t] > 0);
            if (in_up && v > m_up) {
                m_up = v;
                i = t;
            }
            if (in_low && v < m_low) {
                m_low = v;
                j = t;
            }
        }
        if (i == n || j == n || m_up - m_low <= tol) break;

        double s = y[i] * y[j];
        double eta = k[i][i] + k[j][j] - 2.0 * k[i][j];
        double low, high;
        if (s < 0) {
            low = std::max(0.0, alpha[j] - alpha[i]);
            high = std::min(c_reg, c_reg + alpha[j] - alpha[i]);
        } else {
            low = std::max(0.0, alpha[i] + alpha[j] - c_reg);
            high = std::min(c_reg, alpha[i] + alpha[j]);
        }

        double aj;
        if (eta > 1e-12) {
            aj = alpha[j] + (s * grad[i] - grad[j]) / eta;
        } else {
            // Flat direction: walk to the bound with decreasing objective.
            double slope = grad[j] - s * grad[i];
            if (slope == 0) break;
            aj = slope < 0 ? high : low;
        }
        aj = std::clamp(aj, low, high);
        double ai = alpha[i] - s * (aj - alpha[j]);
        ai = std::clamp(ai, 0.0, c_reg);

        double di = ai - alpha[i];
        double dj = aj - alpha[j];
        if (std::fabs(di) < 1e-15 && std::fabs(dj) < 1e-15) break;
        alpha[i] = ai;
        alpha[j] = aj;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += y[t] * (y[i] * k[i][t] * di + y[j] * k[j][t] * dj);
    }

    // Bias from free support vectors, else the midpoint of the KKT range.
    double b_sum = 0;
    int b_count = 0;
    for (std::size_t t = 0; t < n; ++t)
        if (alpha[t] > 0 && alpha[t] < c_reg) {
            b_sum += -y[t] * grad[t];
            ++b_count;
        }
    double bias;
    if (b_count > 0) {
        bias = b_sum / b_count;
    } else {
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            double v = -y[t] * grad[t];
            bool in_up = (y[t] > 0 && alpha[t] < c_reg) || (y[t] < 0 && alpha[t] > 0);
            bool in_low = (y[t] < 0 && alpha[t] < c_reg) || (y[t] > 0 && alpha[t] > 0);
            if (in_up) m_up = std::max(m_up, v);
            if (in_low) m_low = std::min(m_low, v);
        }
        bias = (m_up + m_low) / 2.0;
    }

    SvmModel m;
    m.feature_names_ = train.feature_names;
    m.kernel_ = kernel;
    m.c_ = c_reg;
    m.tol_ = tol;
    m.bias_ = bias;
    for (std::size_t t = 0; t < n; ++t)
        if (alpha[t] > 0) {
            m.support_x_.push_back(train.rows[t]);
            m.alpha_.push_back(alpha[t]);
            m.y_.push_back(y[t]);
        }
    return m;
}

// Hill-climbing grid refinement over a (C, kernel-parameter) grid. The
// whole grid is screened with a cheap evaluation, then the best point and
// its neighbors are re-scored with the expensive one; climbing stops when
// no neighbor improves or the grid border is reached.
struct GridClimbResult {
    std::size_t a = 0;  // C-axis index
    std::size_t b = 0;  // kernel-parameter index
    double value = 0;
};

inline GridClimbResult grid_search_climb(
    std::size_t na, std::size_t nb,
    const std::function<double(std::size_t, std::size_t)>& screen_eval,
    const std::function<double(std::size_t, std::size_t)>& refine_eval,
    bool eight_neighborhood = true) {
    if (na == 0 || nb == 0) throw std::invalid_argument("grid_search_climb: empty grid");

    GridClimbResult cur;
    double best_screen = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < nb; ++b) {
            double v = screen_eval(a, b);
            if (v > best_screen) {
                best_screen = v;
                cur.a = a;
                cur.b = b;
            }
        }

    std::map<std::pair<std::size_t, std::size_t>, double> cache;
    auto refined = [&](std::size_t a, std::size_t b) {
        auto key = std::make_pair(a, b);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        double v = refine_eval(a, b);
        cache.emplace(key, v);
        return v;
    };
    auto on_border = [&](std::size_t a, std::size_t b) {
        return a == 0 || b == 0 || a + 1 == na || b + 1 == nb;
    };

    cur.value = refined(cur.a, cur.b);
    while (true) {
        GridClimbResult best_neighbor = cur;
        for (int da = -1; da <= 1; ++da)
            for (int db = -1; db <= 1; ++db) {
                if (da == 0 && db == 0) continue;
                if (!eight_neighborhood && da != 0 && db != 0) continue;
                long a = static_cast<long>(cur.a) + da;
                long b = static_cast<long>(cur.b) + db;
                if (a < 0 || b < 0 || a >= static_cast<long>(na) || b >= static_cast<long>(nb))
                    continue;
                double v = refined(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
                if (v > best_neighbor.value) {
                    best_neighbor.a = static_cast<std::size_t>(a);
                    best_neighbor.b = static_cast<std::size_t>(b);
                    best_neighbor.value = v;
                }
            }
        if (best_neighbor.a == cur.a && best_neighbor.b == cur.b) break;
        cur = best_neighbor;
        if (on_border(cur.a, cur.b)) break;
    }
    return cur;
}

}  // namespace dancehit
