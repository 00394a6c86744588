#include "lrqr/serialize.hpp"

#include <fstream>

#include "lrqr/errors.hpp"

namespace lrqr {

nlohmann::json basis_to_json(const Basis& basis) {
    nlohmann::json j;
    j["kind"] = std::string(to_string(basis.kind()));
    j["dim"] = basis.dim();
    if (basis.standardized()) {
        j["standardize_mean"] = basis.standardize_mean();
        j["standardize_scale"] = basis.standardize_scale();
    }
    return j;
}

Basis basis_from_json(const nlohmann::json& j) {
    const auto kind = basis_kind_from_string(j.at("kind").get<std::string>());
    const auto dim = j.at("dim").get<std::size_t>();
    Basis basis = [&] {
        switch (kind) {
        case BasisKind::raw_with_intercept:
            if (dim == 0) throw parse_error("basis: raw_with_intercept needs dim >= 1");
            return Basis::raw_with_intercept(dim - 1);
        case BasisKind::group_indicators: return Basis::group_indicators(dim);
        case BasisKind::precomputed_columns: return Basis::precomputed_columns(dim);
        }
        throw parse_error("basis: unknown kind");
    }();
    if (j.contains("standardize_mean")) {
        basis.set_standardization(j.at("standardize_mean").get<std::vector<double>>(),
                                  j.at("standardize_scale").get<std::vector<double>>());
    }
    return basis;
}

nlohmann::json model_to_json(const ThresholdModel& model, const SolveDiagnostics& diagnostics) {
    nlohmann::json j;
    j["basis"] = basis_to_json(model.basis);
    j["gamma"] = model.gamma.gamma;
    j["beta"] = model.beta;
    j["lambda"] = model.lambda;
    j["alpha"] = model.alpha.value;
    j["diagnostics"] = {{"outer_iters", diagnostics.outer_iters},
                        {"final_objective", diagnostics.final_objective},
                        {"stationarity_residual", diagnostics.stationarity_residual},
                        {"objective_trace", diagnostics.objective_trace},
                        {"converged", diagnostics.converged},
                        {"gamma_at_boundary", diagnostics.gamma_at_boundary},
                        {"beta_at_boundary", diagnostics.beta_at_boundary}};
    return j;
}

ThresholdModel model_from_json(const nlohmann::json& j, SolveDiagnostics* diagnostics) {
    ThresholdModel model{basis_from_json(j.at("basis")),
                         Hypothesis{j.at("gamma").get<std::vector<double>>()},
                         j.at("beta").get<double>(), j.at("lambda").get<double>(),
                         Alpha(j.at("alpha").get<double>())};
    if (model.gamma.gamma.size() != model.basis.dim())
        throw parse_error("model: gamma length does not match basis dim");
    if (diagnostics != nullptr && j.contains("diagnostics")) {
        const auto& d = j.at("diagnostics");
        diagnostics->outer_iters = d.at("outer_iters").get<int>();
        diagnostics->final_objective = d.at("final_objective").get<double>();
        diagnostics->stationarity_residual = d.at("stationarity_residual").get<double>();
        diagnostics->objective_trace = d.at("objective_trace").get<std::vector<double>>();
        diagnostics->converged = d.at("converged").get<bool>();
        diagnostics->gamma_at_boundary = d.value("gamma_at_boundary", false);
        diagnostics->beta_at_boundary = d.value("beta_at_boundary", false);
    }
    return model;
}

nlohmann::json tune_to_json(const TuneResult& result) {
    nlohmann::json j;
    j["lambda_star"] = result.lambda_star;
    j["grid"] = result.grid;
    j["fold_scores"] = result.fold_scores;
    j["chosen_lambda"] = result.chosen_lambda;
    j["seed"] = result.seed;
    j["final_model"] = model_to_json(result.final_model, result.final_diagnostics);
    return j;
}

nlohmann::json ratio_to_json(const RatioModel& model) {
    return nlohmann::json{{"weights", model.weights},
                          {"prior_correction", model.prior_correction},
                          {"n_source", model.n_source},
                          {"n_target", model.n_target}};
}

RatioModel ratio_from_json(const nlohmann::json& j) {
    RatioModel model;
    model.weights = j.at("weights").get<std::vector<double>>();
    model.prior_correction = j.at("prior_correction").get<bool>();
    model.n_source = j.at("n_source").get<std::size_t>();
    model.n_target = j.at("n_target").get<std::size_t>();
    return model;
}

void save_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

} // namespace lrqr
