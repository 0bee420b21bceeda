#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dancehit/bayes.hpp"
#include "dancehit/logistic.hpp"
#include "dancehit/rules.hpp"
#include "dancehit/svm.hpp"
#include "dancehit/tree.hpp"

namespace dancehit {

// A trainable model family: display name, CLI id, and a deterministic fit
// callback (the seed feeds any internal randomness).
struct ModelSpec {
    std::string name;
    std::string id;
    std::function<std::unique_ptr<TrainedModel>(const Dataset&, std::uint64_t)> fit;
};

inline ModelSpec spec_c45(C45Params params = {}) {
    return ModelSpec{"C4.5", "c45",
                     [params](const Dataset& ds, std::uint64_t) {
                         return std::make_unique<DecisionTreeModel>(c45_fit(ds, params));
                     }};
}

inline ModelSpec spec_ripper(RipperParams params = {}) {
    return ModelSpec{"RIPPER", "ripper",
                     [params](const Dataset& ds, std::uint64_t seed) {
                         RipperParams p = params;
                         p.seed = seed;
                         return std::make_unique<RuleSetModel>(ripper_fit(ds, p));
                     }};
}

inline ModelSpec spec_nb(NbParams params = {}) {
    return ModelSpec{"Naive Bayes", "nb",
                     [params](const Dataset& ds, std::uint64_t) {
                         return std::make_unique<GaussianNbModel>(nb_fit(ds, params));
                     }};
}

inline ModelSpec spec_logistic(LogisticParams params = {}) {
    return ModelSpec{"Logistic regression", "logistic",
                     [params](const Dataset& ds, std::uint64_t) {
                         return std::make_unique<LogisticModel>(logistic_fit(ds, params));
                     }};
}

inline ModelSpec spec_svm_poly(int degree = 1, double scale = 1.0, double c_reg = 1.0,
                               double tol = 1e-3) {
    KernelSpec kernel = KernelSpec::polynomial(degree, scale);
    return ModelSpec{"SVM (Polynomial)", "svm-poly",
                     [kernel, c_reg, tol](const Dataset& ds, std::uint64_t) {
                         return std::make_unique<SvmModel>(smo_fit(ds, kernel, c_reg, tol));
                     }};
}

inline ModelSpec spec_svm_rbf(double sigma = 10.0, double c_reg = 1.0, double tol = 1e-3) {
    KernelSpec kernel = KernelSpec::rbf(sigma);
    return ModelSpec{"SVM (RBF)", "svm-rbf",
                     [kernel, c_reg, tol](const Dataset& ds, std::uint64_t) {
                         return std::make_unique<SvmModel>(smo_fit(ds, kernel, c_reg, tol));
                     }};
}

inline std::vector<ModelSpec> default_model_specs() {
    return {spec_c45(),      spec_ripper(),   spec_nb(),
            spec_logistic(), spec_svm_poly(), spec_svm_rbf()};
}

inline ModelSpec model_spec_by_id(const std::string& id) {
    for (auto& s : default_model_specs())
        if (s.id == id) return s;
    throw std::invalid_argument(
        "unknown model '" + id +
        "' (expected one of c45, ripper, nb, logistic, svm-poly, svm-rbf)");
}

inline std::unique_ptr<TrainedModel> model_from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "c45") return std::make_unique<DecisionTreeModel>(DecisionTreeModel::from_json(j));
    if (kind == "ripper") return std::make_unique<RuleSetModel>(RuleSetModel::from_json(j));
    if (kind == "naive_bayes")
        return std::make_unique<GaussianNbModel>(GaussianNbModel::from_json(j));
    if (kind == "logistic") return std::make_unique<LogisticModel>(LogisticModel::from_json(j));
    if (kind == "svm") return std::make_unique<SvmModel>(SvmModel::from_json(j));
    throw std::runtime_error("model_from_json: unknown kind '" + kind + "'");
}

}  // namespace dancehit
