#include "lrqr/eval.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "lrqr/errors.hpp"
#include "lrqr/predictors.hpp"

namespace lrqr {

Interval predict_set_regression(double f_hat, double threshold) {
    if (threshold < 0.0) return Interval{};
    return Interval{f_hat - threshold, f_hat + threshold, false};
}

std::vector<std::size_t> predict_set_classification(std::span<const double> probs,
                                                    ScoreVariant variant, double threshold) {
    std::vector<std::size_t> labels;
    for (std::size_t y = 0; y < probs.size(); ++y) {
        const double s = variant == ScoreVariant::one_minus_prob
                             ? score_one_minus_prob(probs, y)
                             : score_neg_log_prob(probs, y);
        if (s <= threshold) labels.push_back(y);
    }
    return labels;
}

double coverage(std::span<const double> scores, std::span<const double> thresholds) {
    if (scores.empty()) throw std::invalid_argument("coverage: empty input");
    if (scores.size() != thresholds.size())
        throw shape_error("coverage: scores/thresholds length mismatch");
    std::size_t covered = 0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] <= thresholds[i]) ++covered;
    return static_cast<double>(covered) / static_cast<double>(scores.size());
}

std::vector<std::optional<double>> group_coverage(std::span<const double> scores,
                                                  std::span<const double> thresholds,
                                                  const Matrix& memberships) {
    if (scores.size() != thresholds.size() || scores.size() != memberships.rows())
        throw shape_error("group_coverage: row count mismatch");
    std::vector<std::optional<double>> out(memberships.cols());
    for (std::size_t g = 0; g < memberships.cols(); ++g) {
        std::size_t n = 0, covered = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (memberships(i, g) == 0.0) continue;
            ++n;
            if (scores[i] <= thresholds[i]) ++covered;
        }
        if (n > 0) out[g] = static_cast<double>(covered) / static_cast<double>(n);
    }
    return out;
}

double weighted_coverage_check(std::span<const double> scores_source,
                               std::span<const double> thresholds_source,
                               std::span<const double> oracle_r) {
    if (scores_source.size() != thresholds_source.size() ||
        scores_source.size() != oracle_r.size())
        throw shape_error("weighted_coverage_check: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < scores_source.size(); ++i) {
        if (!(oracle_r[i] > 0.0))
            throw std::invalid_argument("weighted_coverage_check: ratios must be > 0");
        if (scores_source[i] <= thresholds_source[i]) acc += oracle_r[i];
    }
    return acc / static_cast<double>(scores_source.size());
}

std::vector<MethodSummary> summarize(const std::vector<EvalReport>& rows) {
    std::map<std::string, std::vector<const EvalReport*>> by_method;
    for (const auto& row : rows) by_method[row.method].push_back(&row);
    std::vector<MethodSummary> out;
    for (const auto& [method, group] : by_method) {
        MethodSummary s;
        s.method = method;
        s.replications = static_cast<int>(group.size());
        double c = 0.0, z = 0.0;
        for (const auto* r : group) {
            c += r->coverage;
            z += r->avg_size;
        }
        const double n = static_cast<double>(group.size());
        s.mean_coverage = c / n;
        s.mean_size = z / n;
        double vc = 0.0, vz = 0.0;
        for (const auto* r : group) {
            vc += (r->coverage - s.mean_coverage) * (r->coverage - s.mean_coverage);
            vz += (r->avg_size - s.mean_size) * (r->avg_size - s.mean_size);
        }
        s.sd_coverage = group.size() > 1 ? std::sqrt(vc / (n - 1.0)) : 0.0;
        s.sd_size = group.size() > 1 ? std::sqrt(vz / (n - 1.0)) : 0.0;
        out.push_back(std::move(s));
    }
    return out;
}

void write_report_csv(const std::string& path, const std::vector<EvalReport>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    // avg_size is the total interval length for regression sets
    out << "method,replication,coverage,avg_size,lambda,seed\n";
    char buf[128];
    for (const auto& r : rows) {
        out << r.method << ',' << r.replication << ',';
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,", r.coverage, r.avg_size, r.lambda);
        out << buf << r.seed << '\n';
    }
}

void write_report_json(const std::string& path, const std::vector<EvalReport>& rows) {
    nlohmann::json j;
    j["n_replications"] =
        rows.empty() ? 0
                     : 1 + std::max_element(rows.begin(), rows.end(),
                                            [](const auto& a, const auto& b) {
                                                return a.replication < b.replication;
                                            })
                               ->replication;
    j["size_convention"] = "total interval length";
    nlohmann::json methods = nlohmann::json::object();
    for (const auto& s : summarize(rows)) {
        methods[s.method] = {{"mean_coverage", s.mean_coverage},
                             {"sd_coverage", s.sd_coverage},
                             {"mean_size", s.mean_size},
                             {"sd_size", s.sd_size},
                             {"replications", s.replications}};
    }
    j["methods"] = std::move(methods);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

} // namespace lrqr
