#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lrqr/matrix.hpp"

namespace lrqr {

// X ~ N(0,I) on source, N(mu,I) on target; S|x ~ Uniform(0, scale(x)) with
// scale(x) = score_base + score_slope * |x_0|. The oracle likelihood ratio is
// exp(<mu,x> - |mu|^2/2) and the conditional (1-level) quantile is
// level * scale(x).
struct GaussianShiftSpec {
    std::size_t dim = 1;
    std::vector<double> mu; // empty means no shift
    double score_base = 1.0;
    double score_slope = 0.0;
};

// Discrete groups with source probabilities p and target probabilities q;
// S|group g ~ Uniform(0, score_scale[g]). Features are the one-hot membership
// row, so the oracle ratio is q_g/p_g and the conditional (1-alpha) quantile
// is (1-alpha)*score_scale[g].
struct GroupShiftSpec {
    std::vector<double> p_source;
    std::vector<double> p_target;
    std::vector<double> score_scale;
};

struct SyntheticSpec {
    std::variant<GaussianShiftSpec, GroupShiftSpec> law;
    std::size_t n1 = 1000;
    std::size_t n2 = 1000;
    std::size_t n3 = 1000;
    std::size_t n_test = 1000;
    std::uint64_t seed = 0;

    // The group-shift scenario used by the coverage experiments: five groups,
    // source mass on the small-score groups, target mass on the large-score
    // ones.
    static SyntheticSpec default_group_shift(std::size_t n1, std::size_t n2, std::size_t n3,
                                             std::size_t n_test, std::uint64_t seed);
};

struct SyntheticData {
    Matrix x1;                  // labeled source features
    std::vector<double> s1;     // their scores
    Matrix x2;                  // unlabeled target features
    Matrix x3;                  // unlabeled source features
    Matrix x_test;              // labeled target test features
    std::vector<double> s_test; // their scores
    std::vector<double> r1, r2, r3, r_test; // oracle likelihood ratio per row
};

SyntheticData generate(const SyntheticSpec& spec);

// Conditional (level)-quantile of the score law at x; ground truth for tests.
double oracle_conditional_quantile(const SyntheticSpec& spec, std::span<const double> x,
                                   double level);

struct SplitScenario {
    std::size_t feature_index;
    double median;
    std::vector<std::size_t> source_rows;
    std::vector<std::size_t> target_unlabeled_rows;
    std::vector<std::size_t> target_labeled_rows;
};

// Median split on one feature column: rows with value <= median form the
// source, the rest the target; the target is further shuffled into
// floor(n/2) unlabeled and ceil(n/2) labeled rows. Label-blind by signature.
SplitScenario median_split(const Matrix& features, std::size_t column, std::uint64_t seed);

struct CsvSchema {
    std::vector<std::string> feature_columns;
    std::optional<std::string> label_column;
    std::optional<std::string> score_column;
    std::optional<std::string> group_column;
};

struct Dataset {
    Matrix features;
    std::vector<double> labels; // present iff schema named a label column
    bool has_labels = false;
    std::vector<double> scores; // present iff schema named a score column
    bool has_scores = false;
    std::vector<std::size_t> groups; // dense ids, present iff schema named a group column
    std::vector<std::string> group_names;
    bool has_groups = false;
};

// UTF-8 CSV with a header row, '.' decimal separator, no quoting. Parse
// failures name the row and column.
Dataset load_csv(const std::string& path, const CsvSchema& schema);

} // namespace lrqr
