#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lrqr/solver.hpp"

namespace lrqr {

// Theory-guided regularization scale: c0 * n1^(-1/3) * (1/n2 + 1/n3)^(-1/3).
double lambda_star(std::size_t n1, std::size_t n2, std::size_t n3, double c0);

// Uniform 10-point grid from lambda_star/10 to lambda_star inclusive.
std::array<double, 10> lambda_grid(double lambda_star);

struct TuneResult {
    double lambda_star;
    std::array<double, 10> grid;
    // [grid index][fold] -> held-out gradient norm; 10 x folds (3 by default)
    std::array<std::vector<double>, 10> fold_scores;
    double chosen_lambda;
    ThresholdModel final_model;
    SolveDiagnostics final_diagnostics;
    std::uint64_t seed;
};

// Cross-validation by held-out gradient norm. All three samples are folded
// jointly (seeded shuffle from config.seed) so the validation gradient uses
// held-out means throughout. Ties in the mean score go to the smallest
// lambda. Refits on the full bundle with the winner.
TuneResult cross_validate(const CalibrationBundle& bundle, const Basis& basis,
                          const LrqrConfig& config, int folds = 3, double c0 = 1.0,
                          int jobs = 1);

} // namespace lrqr
