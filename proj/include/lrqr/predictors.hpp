#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lrqr/matrix.hpp"

namespace lrqr {

struct RidgeModel {
    std::vector<double> coefficients;
    double intercept = 0.0;
    double penalty = 0.0;

    double predict(std::span<const double> x) const;
};

// Penalized least squares with an unpenalized intercept, fit by centering.
RidgeModel ridge_fit(const Matrix& X, std::span<const double> y, double penalty);

// Selects the grid penalty with the smallest mean held-out squared error,
// then refits on all rows. Fold assignment is a seeded shuffle.
RidgeModel ridge_cv_fit(const Matrix& X, std::span<const double> y,
                        std::span<const double> penalty_grid, int folds = 5,
                        std::uint64_t seed = 0);

// 13 log-spaced penalties covering 1e-4 .. 1e2.
std::vector<double> default_ridge_grid();

double score_abs_residual(const RidgeModel& model, std::span<const double> x, double y);

// -log of the probability at the label; +infinity when that probability is 0.
double score_neg_log_prob(std::span<const double> probs, std::size_t label);

// 1 - probability at the label.
double score_one_minus_prob(std::span<const double> probs, std::size_t label);

} // namespace lrqr
