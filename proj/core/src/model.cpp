#include "gradecast/model.hpp"

#include "gradecast/error.hpp"

namespace gradecast {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

TrainedModel fit_model(const ModelConfig& cfg, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       std::vector<std::string> feature_names) {
    validate_config(cfg);
    if (feature_names.empty())
        for (Eigen::Index j = 0; j < X.cols(); ++j) feature_names.push_back("x" + std::to_string(j));
    if (static_cast<Eigen::Index>(feature_names.size()) != X.cols())
        throw Error(ErrorCode::FeatureCountMismatch, "feature name count differs from design columns");

    TrainedModel m{cfg, LinearModel{}, std::move(feature_names)};
    switch (cfg.family) {
        case Family::Linear: m.parameters = fit_linear(X, y, cfg.hp); break;
        case Family::Logistic: m.parameters = fit_logistic(X, y, cfg.hp); break;
        case Family::Tree: m.parameters = fit_tree(X, y, cfg); break;
        case Family::Forest: m.parameters = fit_forest(X, y, cfg); break;
    }
    return m;
}

double predict_one(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (static_cast<std::size_t>(x.size()) != model.n_features())
        throw Error(ErrorCode::FeatureCountMismatch, "model expects " + std::to_string(model.n_features()) +
                                                         " features, got " + std::to_string(x.size()));
    return std::visit(overloaded{
                          [&](const LinearModel& m) { return m.score(x); },
                          [&](const LogisticModel& m) { return m.probability(x); },
                          [&](const TreeModel& m) { return m.predict_one(x); },
                          [&](const ForestModel& m) { return m.predict_one(x); },
                      },
                      model.parameters);
}

Predictions predict(const TrainedModel& model, const Eigen::MatrixXd& X) {
    if (static_cast<std::size_t>(X.cols()) != model.n_features())
        throw Error(ErrorCode::FeatureCountMismatch, "model expects " + std::to_string(model.n_features()) +
                                                         " features, got " + std::to_string(X.cols()));
    Predictions out;
    out.values.resize(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out.values(i) = predict_one(model, X.row(i).transpose());
    if (model.task() == Task::Classification) {
        out.labels.resize(static_cast<std::size_t>(X.rows()));
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            out.labels[static_cast<std::size_t>(i)] = out.values(i) >= kClassificationCutoff ? 1 : 0;
    }
    return out;
}

}  // namespace gradecast
