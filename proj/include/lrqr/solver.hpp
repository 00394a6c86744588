#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lrqr/basis.hpp"
#include "lrqr/bundle.hpp"
#include "lrqr/loss.hpp"

namespace lrqr {

struct LrqrConfig {
    Alpha alpha{0.1};
    double lambda = 0.0;
    // Radius of the coefficient ball. <= 0 selects the default
    // 10*||gamma0||_2 + 10 from the split-conformal initializer.
    double B = 0.0;
    double beta_min = 1e-3;
    double beta_max = 1e3;
    int max_outer = 200;
    int max_inner = 500;
    double step0 = 0.5;
    // Base step multiplier applied between outer iterations; the inner pass
    // itself decays as 1/sqrt(t). Normalized subgradient directions plus this
    // geometric tempering reach much tighter solutions than a flat 1/sqrt(t)
    // schedule on the kinked objective.
    double step_decay = 0.75;
    // Inner pass ends after this many consecutive steps without improving the
    // incumbent.
    int inner_patience = 60;
    double tol_stationarity = 1e-4;
    double tol_objective = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
};

// Fitted threshold function h(x) = <gamma, Phi(x)> with its normalizing
// scalar and the settings it was trained under.
struct ThresholdModel {
    Basis basis;
    Hypothesis gamma;
    double beta;
    double lambda;
    Alpha alpha;

    double threshold_at(std::span<const double> x) const { return eval_h(basis, gamma, x); }
    // Thresholds for rows that are already basis-evaluated.
    std::vector<double> thresholds(const Matrix& phi_rows) const;
};

struct SolveDiagnostics {
    int outer_iters = 0;
    double final_objective = 0.0;
    // Norm of the projected gradient at the returned iterate. Guaranteed to be
    // below tol_stationarity only when convergence fired through the
    // stationarity branch; objective-stall exits report the achieved value.
    double stationarity_residual = 0.0;
    std::vector<double> objective_trace;
    bool converged = false;
    bool gamma_at_boundary = false;
    bool beta_at_boundary = false;
};

double empirical_objective(const ThresholdModel& model, const CalibrationBundle& bundle);

struct LrqrGradient {
    std::vector<double> gamma;
    double beta;

    double norm2() const;
};

LrqrGradient empirical_gradient(const ThresholdModel& model, const CalibrationBundle& bundle);

// Exact minimizer of the empirical objective in beta for fixed h, clipped to
// [beta_min, beta_max]. Throws degenerate_hypothesis_error when h vanishes on
// all of S3.
double beta_star(const Hypothesis& hyp, const CalibrationBundle& bundle, double beta_min,
                 double beta_max);

// Alternating minimization: closed-form beta step, then projected subgradient
// descent in gamma. Non-convergence within max_outer returns the best iterate
// with converged = false.
std::pair<ThresholdModel, SolveDiagnostics> solve(const LrqrConfig& config,
                                                  const CalibrationBundle& bundle,
                                                  const Basis& basis);

// l2 norm of (gamma_grad, beta_grad) on a held-out bundle; the cross-validation
// measure.
double gradient_norm_measure(const ThresholdModel& model, const CalibrationBundle& heldout);

// Gamma fit with beta held fixed. Diagnostic entry point.
Hypothesis solve_gamma_for_beta(const LrqrConfig& config, const CalibrationBundle& bundle,
                                const Basis& basis, double beta);

} // namespace lrqr
