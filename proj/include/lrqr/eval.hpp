#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrqr/matrix.hpp"

namespace lrqr {

// Regression prediction set [f - h, f + h]; empty when h < 0.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool is_empty = true;

    double length() const { return is_empty ? 0.0 : hi - lo; }
    bool contains(double y) const { return !is_empty && y >= lo && y <= hi; }
};

Interval predict_set_regression(double f_hat, double threshold);

enum class ScoreVariant {
    one_minus_prob, // s(x,y) = 1 - p_y
    neg_log_prob,   // s(x,y) = -log p_y
};

// Labels whose score is at most the threshold.
std::vector<std::size_t> predict_set_classification(std::span<const double> probs,
                                                    ScoreVariant variant, double threshold);

// Fraction of test points with score <= threshold.
double coverage(std::span<const double> scores, std::span<const double> thresholds);

// Coverage restricted to each group; memberships is a 0/1 matrix with one
// column per group. Groups with no test rows come back empty.
std::vector<std::optional<double>> group_coverage(std::span<const double> scores,
                                                  std::span<const double> thresholds,
                                                  const Matrix& memberships);

// r-weighted source-sample mean of the coverage indicator: a change-of-measure
// estimate of target coverage.
double weighted_coverage_check(std::span<const double> scores_source,
                               std::span<const double> thresholds_source,
                               std::span<const double> oracle_r);

struct EvalReport {
    std::string method;
    int replication = 0;
    double coverage = 0.0;
    double avg_size = 0.0; // total interval length for regression sets
    double lambda = 0.0;
    std::uint64_t seed = 0;
    std::size_t n_test = 0;
    std::vector<std::optional<double>> group_coverage;
};

struct MethodSummary {
    std::string method;
    double mean_coverage = 0.0;
    double sd_coverage = 0.0;
    double mean_size = 0.0;
    double sd_size = 0.0;
    int replications = 0;
};

std::vector<MethodSummary> summarize(const std::vector<EvalReport>& rows);

// CSV with fixed columns: method,replication,coverage,avg_size,lambda,seed.
void write_report_csv(const std::string& path, const std::vector<EvalReport>& rows);
// JSON summary of per-method means and standard deviations across replications.
void write_report_json(const std::string& path, const std::vector<EvalReport>& rows);

} // namespace lrqr
