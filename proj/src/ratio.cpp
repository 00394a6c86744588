#include "lrqr/ratio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lrqr/kernels.hpp"

namespace lrqr {

namespace {

constexpr double kProbClamp = 1e-12;

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
double log1pexp(double z) {
    if (z > 35.0) return z;
    return std::log1p(std::exp(z));
}

double logit(std::span<const double> weights, std::span<const double> phi_x) {
    return weights[0] + kernels::dot(weights.data() + 1, phi_x.data(), phi_x.size());
}

struct LogisticProblem {
    const Matrix& source;
    const Matrix& target;
    double l2;

    std::size_t dim() const { return source.cols(); }
    double n() const { return static_cast<double>(source.rows() + target.rows()); }

    double loss(const std::vector<double>& w) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < source.rows(); ++i)
            acc += log1pexp(logit(w, source.row(i))); // y = 0
        for (std::size_t i = 0; i < target.rows(); ++i) {
            const double z = logit(w, target.row(i)); // y = 1
            acc += log1pexp(z) - z;
        }
        acc /= n();
        double pen = 0.0;
        for (std::size_t j = 1; j < w.size(); ++j) pen += w[j] * w[j];
        return acc + 0.5 * l2 * pen;
    }

    void gradient(const std::vector<double>& w, std::vector<double>& grad) const {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < source.rows(); ++i) {
            const auto row = source.row(i);
            const double resid = sigmoid(logit(w, row)); // sigma - 0
            grad[0] += resid;
            kernels::axpy(resid, row.data(), grad.data() + 1, row.size());
        }
        for (std::size_t i = 0; i < target.rows(); ++i) {
            const auto row = target.row(i);
            const double resid = sigmoid(logit(w, row)) - 1.0;
            grad[0] += resid;
            kernels::axpy(resid, row.data(), grad.data() + 1, row.size());
        }
        const double inv_n = 1.0 / n();
        for (double& g : grad) g *= inv_n;
        for (std::size_t j = 1; j < w.size(); ++j) grad[j] += l2 * w[j];
    }
};

} // namespace

double RatioModel::predict_prob(std::span<const double> phi_x) const {
    if (phi_x.size() + 1 != weights.size())
        throw shape_error("RatioModel: feature arity mismatch");
    const double p = sigmoid(logit(weights, phi_x));
    return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

RatioModel fit_domain_classifier(const Matrix& source_phi, const Matrix& target_phi,
                                 double l2_penalty, DomainClassifierOptions opts) {
    if (source_phi.rows() == 0 || target_phi.rows() == 0)
        throw std::invalid_argument("fit_domain_classifier: both samples must be non-empty");
    if (source_phi.cols() != target_phi.cols())
        throw shape_error("fit_domain_classifier: column count mismatch");
    if (l2_penalty < 0.0)
        throw std::invalid_argument("fit_domain_classifier: l2_penalty must be >= 0");

    LogisticProblem prob{source_phi, target_phi, l2_penalty};
    std::vector<double> w(prob.dim() + 1, 0.0);
    std::vector<double> grad(w.size()), trial(w.size());
    double f = prob.loss(w);
    double step = 1.0;
    for (int it = 0; it < opts.max_iter; ++it) {
        prob.gradient(w, grad);
        const double gnorm = std::sqrt(kernels::sumsq(grad.data(), grad.size()));
        if (gnorm <= opts.tol_grad) break;
        // backtracking keeps the training loss non-increasing
        step *= 2.0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t j = 0; j < w.size(); ++j) trial[j] = w[j] - step * grad[j];
            const double f_trial = prob.loss(trial);
            if (f_trial <= f - 1e-4 * step * gnorm * gnorm) {
                w.swap(trial);
                f = f_trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }

    RatioModel model;
    model.weights = std::move(w);
    model.prior_correction = opts.prior_correction;
    model.n_source = source_phi.rows();
    model.n_target = target_phi.rows();
    return model;
}

double ratio_at(const RatioModel& model, std::span<const double> phi_x) {
    const double p = model.predict_prob(phi_x);
    double r = p / (1.0 - p);
    if (model.prior_correction)
        r *= static_cast<double>(model.n_source) / static_cast<double>(model.n_target);
    return r;
}

double oracle_gaussian_ratio(std::span<const double> mu, std::span<const double> x) {
    if (mu.size() != x.size()) throw shape_error("oracle_gaussian_ratio: dimension mismatch");
    const double mx = kernels::dot(mu.data(), x.data(), x.size());
    const double mm = kernels::sumsq(mu.data(), mu.size());
    return std::exp(mx - 0.5 * mm);
}

double domain_classifier_loss(const RatioModel& model, const Matrix& source_phi,
                              const Matrix& target_phi, double l2_penalty) {
    LogisticProblem prob{source_phi, target_phi, l2_penalty};
    return prob.loss(model.weights);
}

} // namespace lrqr
