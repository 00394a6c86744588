#pragma once

#include <string>

#include <json.hpp>

#include "lrqr/ratio.hpp"
#include "lrqr/solver.hpp"
#include "lrqr/tuning.hpp"

namespace lrqr {

// Model files are JSON objects {basis, gamma, beta, lambda, alpha,
// diagnostics}. Numbers are emitted in shortest round-trip form, so gamma and
// beta survive a save/load cycle bit for bit.

nlohmann::json basis_to_json(const Basis& basis);
Basis basis_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const ThresholdModel& model, const SolveDiagnostics& diagnostics);
ThresholdModel model_from_json(const nlohmann::json& j, SolveDiagnostics* diagnostics = nullptr);

nlohmann::json tune_to_json(const TuneResult& result);

nlohmann::json ratio_to_json(const RatioModel& model);
RatioModel ratio_from_json(const nlohmann::json& j);

void save_json(const std::string& path, const nlohmann::json& j);
nlohmann::json load_json(const std::string& path);

} // namespace lrqr
