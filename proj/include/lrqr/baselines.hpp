#pragma once

#include <span>

#include "lrqr/loss.hpp"

namespace lrqr {

// Split conformal constant threshold: the ceil((1-alpha)(n+1))-th smallest
// score, or +infinity when that rank exceeds n.
double split_conformal_threshold(std::span<const double> scores, Alpha alpha);

// Weighted conformal threshold with a point mass at +infinity for the test
// point: weights are normalized by (sum of calibration weights + test weight)
// and the threshold is the smallest score whose cumulative normalized weight
// reaches 1-alpha, or +infinity if none does. With equal weights this reduces
// exactly to split_conformal_threshold.
double weighted_conformal_threshold(std::span<const double> scores,
                                    std::span<const double> cal_weights, double test_weight,
                                    Alpha alpha);

} // namespace lrqr
