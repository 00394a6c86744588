#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lrqr/matrix.hpp"

namespace lrqr {

// Logistic domain classifier over Phi-features; r_hat(x) = p/(1-p), optionally
// rescaled by n_source/n_target to undo the class prior.
struct RatioModel {
    std::vector<double> weights; // intercept first, then one weight per feature
    bool prior_correction = true;
    std::size_t n_source = 0;
    std::size_t n_target = 0;

    // Predicted probability that phi_x came from the target sample, clamped
    // away from {0,1} so the odds stay finite.
    double predict_prob(std::span<const double> phi_x) const;
};

struct DomainClassifierOptions {
    double tol_grad = 1e-6;
    int max_iter = 2000;
    bool prior_correction = true;
};

// L2-penalized logistic fit (labels: source = 0, target = 1) by gradient
// descent with backtracking; the intercept is not penalized.
RatioModel fit_domain_classifier(const Matrix& source_phi, const Matrix& target_phi,
                                 double l2_penalty, DomainClassifierOptions opts = {});

double ratio_at(const RatioModel& model, std::span<const double> phi_x);

// Density ratio of N(mu, I) to N(0, I): exp(<mu,x> - |mu|^2/2). Test oracle
// for synthetic mean shifts.
double oracle_gaussian_ratio(std::span<const double> mu, std::span<const double> x);

// Penalized negative log-likelihood of the classifier on its training data;
// exposed so descent monotonicity can be checked.
double domain_classifier_loss(const RatioModel& model, const Matrix& source_phi,
                              const Matrix& target_phi, double l2_penalty);

} // namespace lrqr
