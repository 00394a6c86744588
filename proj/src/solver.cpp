#include "lrqr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lrqr/errors.hpp"
#include "lrqr/kernels.hpp"

namespace lrqr {

namespace {

double empirical_quantile(std::vector<double> values, double level) {
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    auto k = static_cast<std::size_t>(std::ceil(level * n));
    k = std::clamp<std::size_t>(k, 1, values.size());
    return values[k - 1];
}

// Shared state for objective/gradient evaluation on one bundle.
struct Workspace {
    const CalibrationBundle& bundle;
    double lambda;
    double alpha;
    std::vector<double> h1, h2, h3, w, mean_phi2;

    Workspace(const CalibrationBundle& b, double lam, double a)
        : bundle(b), lambda(lam), alpha(a), h1(b.n1()), h2(b.n2()), h3(b.n3()), w(b.n1()),
          mean_phi2(b.dim(), 0.0) {
        std::vector<double> ones(b.n2(), 1.0 / static_cast<double>(b.n2()));
        kernels::weighted_colsum(b.s2_phi().data(), b.n2(), b.dim(), ones.data(),
                                 mean_phi2.data());
    }

    void compute_h(const double* gamma) {
        const std::size_t d = bundle.dim();
        kernels::matvec(bundle.s1_phi().data(), bundle.n1(), d, gamma, h1.data());
        kernels::matvec(bundle.s2_phi().data(), bundle.n2(), d, gamma, h2.data());
        kernels::matvec(bundle.s3_phi().data(), bundle.n3(), d, gamma, h3.data());
    }

    // Expects compute_h(gamma) to have run.
    double objective(double beta) const {
        const double pin =
            kernels::pinball_sum(h1.data(), bundle.s1_scores().data(), bundle.n1(), alpha) /
            static_cast<double>(bundle.n1());
        const double m3 = kernels::sumsq(h3.data(), h3.size()) / static_cast<double>(bundle.n3());
        const double m2 = kernels::sum(h2.data(), h2.size()) / static_cast<double>(bundle.n2());
        return pin + lambda * beta * beta * m3 - 2.0 * lambda * beta * m2;
    }

    // Expects compute_h(gamma) to have run.
    void gamma_gradient(double beta, std::vector<double>& out) {
        const std::size_t d = bundle.dim();
        kernels::pinball_weights(h1.data(), bundle.s1_scores().data(), bundle.n1(), alpha,
                                 w.data());
        std::fill(out.begin(), out.end(), 0.0);
        kernels::weighted_colsum(bundle.s1_phi().data(), bundle.n1(), d, w.data(), out.data());
        const double inv_n1 = 1.0 / static_cast<double>(bundle.n1());
        for (std::size_t j = 0; j < d; ++j) out[j] *= inv_n1;
        if (lambda != 0.0) {
            std::vector<double> reg(d, 0.0);
            kernels::weighted_colsum(bundle.s3_phi().data(), bundle.n3(), d, h3.data(),
                                     reg.data());
            const double c3 = 2.0 * lambda * beta * beta / static_cast<double>(bundle.n3());
            const double c2 = 2.0 * lambda * beta;
            for (std::size_t j = 0; j < d; ++j) out[j] += c3 * reg[j] - c2 * mean_phi2[j];
        }
    }

    double beta_gradient(double beta) const {
        const double m3 = kernels::sumsq(h3.data(), h3.size()) / static_cast<double>(bundle.n3());
        const double m2 = kernels::sum(h2.data(), h2.size()) / static_cast<double>(bundle.n2());
        return 2.0 * lambda * beta * m3 - 2.0 * lambda * m2;
    }

    double mean2_h() const {
        return kernels::sum(h2.data(), h2.size()) / static_cast<double>(bundle.n2());
    }
    double mean3_h2() const {
        return kernels::sumsq(h3.data(), h3.size()) / static_cast<double>(bundle.n3());
    }
};

void project_ball(std::vector<double>& gamma, double B) {
    const double nrm = std::sqrt(kernels::sumsq(gamma.data(), gamma.size()));
    if (nrm > B && nrm > 0.0) {
        const double scale = B / nrm;
        for (double& g : gamma) g *= scale;
    }
}

std::vector<double> initial_gamma(const Basis& basis, const CalibrationBundle& bundle,
                                  double level) {
    std::vector<double> gamma(basis.dim(), 0.0);
    const double q0 = empirical_quantile(bundle.s1_scores(), level);
    if (auto ic = basis.intercept_column()) {
        gamma[*ic] = q0;
    } else if (basis.kind() == BasisKind::group_indicators) {
        // all-ones combination realizes the constant threshold q0 for
        // disjoint groups
        std::fill(gamma.begin(), gamma.end(), q0);
    }
    return gamma;
}

double projected_residual(const std::vector<double>& gamma, const std::vector<double>& ggrad,
                          double B, double beta, double bgrad, double beta_min,
                          double beta_max) {
    std::vector<double> stepped(gamma.size());
    for (std::size_t j = 0; j < gamma.size(); ++j) stepped[j] = gamma[j] - ggrad[j];
    project_ball(stepped, B);
    double acc = 0.0;
    for (std::size_t j = 0; j < gamma.size(); ++j) {
        const double r = gamma[j] - stepped[j];
        acc += r * r;
    }
    const double bstep = std::clamp(beta - bgrad, beta_min, beta_max);
    const double rb = beta - bstep;
    return std::sqrt(acc + rb * rb);
}

struct GammaFitResult {
    std::vector<double> gamma;
    double objective;
    long long steps = 0;
};

// One tempered pass of projected subgradient steps from `gamma`, at fixed
// beta. Keeps the best iterate seen; also tries the running average.
GammaFitResult descend_gamma(Workspace& ws, std::vector<double> gamma, double beta, double B,
                             double base_step, int max_inner, int patience, double f_start) {
    const std::size_t d = gamma.size();
    std::vector<double> grad(d), cur = gamma, avg(d, 0.0);
    GammaFitResult best{std::move(gamma), f_start};
    int since_improve = 0;
    long long n_avg = 0;
    for (int t = 1; t <= max_inner; ++t) {
        ws.compute_h(cur.data());
        ws.gamma_gradient(beta, grad);
        const double gnorm = std::sqrt(kernels::sumsq(grad.data(), d));
        if (gnorm == 0.0) break;
        const double eta = base_step / (std::sqrt(static_cast<double>(t)) * gnorm);
        for (std::size_t j = 0; j < d; ++j) cur[j] -= eta * grad[j];
        project_ball(cur, B);
        ws.compute_h(cur.data());
        const double f = ws.objective(beta);
        ++best.steps;
        for (std::size_t j = 0; j < d; ++j) avg[j] += cur[j];
        ++n_avg;
        if (f < best.objective) {
            best.objective = f;
            best.gamma = cur;
            since_improve = 0;
        } else if (++since_improve >= patience) {
            break;
        }
    }
    if (n_avg > 0) {
        for (std::size_t j = 0; j < d; ++j) avg[j] /= static_cast<double>(n_avg);
        project_ball(avg, B);
        ws.compute_h(avg.data());
        const double f = ws.objective(beta);
        if (f < best.objective) {
            best.objective = f;
            best.gamma = std::move(avg);
        }
    }
    return best;
}

} // namespace

void LrqrConfig::validate() const {
    if (lambda < 0.0) throw std::invalid_argument("LrqrConfig: lambda must be >= 0");
    if (!(beta_min > 0.0) || beta_min > beta_max)
        throw std::invalid_argument("LrqrConfig: need 0 < beta_min <= beta_max");
    if (max_outer < 1 || max_inner < 1)
        throw std::invalid_argument("LrqrConfig: iteration limits must be positive");
    if (!(step0 > 0.0)) throw std::invalid_argument("LrqrConfig: step0 must be > 0");
    if (!(step_decay > 0.0) || step_decay >= 1.0)
        throw std::invalid_argument("LrqrConfig: step_decay must be in (0,1)");
    if (!(tol_stationarity > 0.0) || !(tol_objective > 0.0))
        throw std::invalid_argument("LrqrConfig: tolerances must be > 0");
}

std::vector<double> ThresholdModel::thresholds(const Matrix& phi_rows) const {
    if (phi_rows.cols() != gamma.gamma.size())
        throw shape_error("ThresholdModel::thresholds: column count mismatch");
    std::vector<double> out(phi_rows.rows());
    kernels::matvec(phi_rows.data(), phi_rows.rows(), phi_rows.cols(), gamma.gamma.data(),
                    out.data());
    return out;
}

double LrqrGradient::norm2() const {
    return std::sqrt(kernels::sumsq(gamma.data(), gamma.size()) + beta * beta);
}

double empirical_objective(const ThresholdModel& model, const CalibrationBundle& bundle) {
    if (model.gamma.gamma.size() != bundle.dim())
        throw shape_error("empirical_objective: model/bundle dimension mismatch");
    Workspace ws(bundle, model.lambda, model.alpha.value);
    ws.compute_h(model.gamma.gamma.data());
    return ws.objective(model.beta);
}

LrqrGradient empirical_gradient(const ThresholdModel& model, const CalibrationBundle& bundle) {
    if (model.gamma.gamma.size() != bundle.dim())
        throw shape_error("empirical_gradient: model/bundle dimension mismatch");
    Workspace ws(bundle, model.lambda, model.alpha.value);
    ws.compute_h(model.gamma.gamma.data());
    LrqrGradient g{std::vector<double>(bundle.dim()), 0.0};
    ws.gamma_gradient(model.beta, g.gamma);
    g.beta = ws.beta_gradient(model.beta);
    return g;
}

double beta_star(const Hypothesis& hyp, const CalibrationBundle& bundle, double beta_min,
                 double beta_max) {
    if (hyp.gamma.size() != bundle.dim())
        throw shape_error("beta_star: hypothesis/bundle dimension mismatch");
    std::vector<double> h2(bundle.n2()), h3(bundle.n3());
    kernels::matvec(bundle.s2_phi().data(), bundle.n2(), bundle.dim(), hyp.gamma.data(),
                    h2.data());
    kernels::matvec(bundle.s3_phi().data(), bundle.n3(), bundle.dim(), hyp.gamma.data(),
                    h3.data());
    const double m3 = kernels::sumsq(h3.data(), h3.size()) / static_cast<double>(bundle.n3());
    if (m3 == 0.0)
        throw degenerate_hypothesis_error("beta_star: hypothesis vanishes on all of S3");
    const double m2 = kernels::sum(h2.data(), h2.size()) / static_cast<double>(bundle.n2());
    return std::clamp(m2 / m3, beta_min, beta_max);
}

std::pair<ThresholdModel, SolveDiagnostics> solve(const LrqrConfig& config,
                                                  const CalibrationBundle& bundle,
                                                  const Basis& basis) {
    config.validate();
    if (basis.dim() != bundle.dim())
        throw shape_error("solve: basis dimension does not match bundle");

    const double level = 1.0 - config.alpha.value;
    std::vector<double> gamma = initial_gamma(basis, bundle, level);
    const double gamma0_norm = std::sqrt(kernels::sumsq(gamma.data(), gamma.size()));
    const double B = config.B > 0.0 ? config.B : 10.0 * gamma0_norm + 10.0;
    project_ball(gamma, B);

    Workspace ws(bundle, config.lambda, config.alpha.value);
    Hypothesis hyp{gamma};

    auto safe_beta = [&](const std::vector<double>& g, double fallback) {
        if (config.lambda == 0.0) return std::clamp(1.0, config.beta_min, config.beta_max);
        try {
            return beta_star(Hypothesis{g}, bundle, config.beta_min, config.beta_max);
        } catch (const degenerate_hypothesis_error&) {
            return std::clamp(fallback, config.beta_min, config.beta_max);
        }
    };

    double beta = safe_beta(gamma, 1.0);
    ws.compute_h(gamma.data());
    double f_cur = ws.objective(beta);

    SolveDiagnostics diag;
    diag.objective_trace.push_back(f_cur);

    std::vector<double> grad(bundle.dim());
    int stall = 0;
    double residual = 0.0;
    for (int outer = 0; outer < config.max_outer; ++outer) {
        ++diag.outer_iters;
        // exact beta block step; never accepted if it would increase f
        const double beta_new = safe_beta(gamma, beta);
        ws.compute_h(gamma.data());
        const double f_beta = ws.objective(beta_new);
        if (f_beta <= f_cur) {
            beta = beta_new;
            f_cur = f_beta;
        }

        const double base = config.step0 * std::pow(config.step_decay, outer);
        GammaFitResult fit = descend_gamma(ws, gamma, beta, B, base, config.max_inner,
                                           config.inner_patience, f_cur);
        const double improve = f_cur - fit.objective;
        if (fit.objective <= f_cur) {
            gamma = std::move(fit.gamma);
            f_cur = fit.objective;
        }
        diag.objective_trace.push_back(f_cur);

        ws.compute_h(gamma.data());
        ws.gamma_gradient(beta, grad);
        residual = projected_residual(gamma, grad, B, beta, ws.beta_gradient(beta),
                                      config.beta_min, config.beta_max);
        if (residual <= config.tol_stationarity) {
            diag.converged = true;
            break;
        }
        if (improve < config.tol_objective) {
            if (++stall >= 3) {
                diag.converged = true;
                break;
            }
        } else {
            stall = 0;
        }
    }

    diag.final_objective = f_cur;
    diag.stationarity_residual = residual;
    const double gnorm = std::sqrt(kernels::sumsq(gamma.data(), gamma.size()));
    diag.gamma_at_boundary = gnorm >= B * (1.0 - 1e-12);
    diag.beta_at_boundary = beta <= config.beta_min || beta >= config.beta_max;

    ThresholdModel model{basis, Hypothesis{std::move(gamma)}, beta, config.lambda, config.alpha};
    return {std::move(model), std::move(diag)};
}

double gradient_norm_measure(const ThresholdModel& model, const CalibrationBundle& heldout) {
    return empirical_gradient(model, heldout).norm2();
}

Hypothesis solve_gamma_for_beta(const LrqrConfig& config, const CalibrationBundle& bundle,
                                const Basis& basis, double beta) {
    config.validate();
    if (basis.dim() != bundle.dim())
        throw shape_error("solve_gamma_for_beta: basis dimension does not match bundle");
    std::vector<double> gamma = initial_gamma(basis, bundle, 1.0 - config.alpha.value);
    const double gamma0_norm = std::sqrt(kernels::sumsq(gamma.data(), gamma.size()));
    const double B = config.B > 0.0 ? config.B : 10.0 * gamma0_norm + 10.0;
    project_ball(gamma, B);

    Workspace ws(bundle, config.lambda, config.alpha.value);
    ws.compute_h(gamma.data());
    double f_cur = ws.objective(beta);
    int stall = 0;
    for (int outer = 0; outer < config.max_outer; ++outer) {
        const double base = config.step0 * std::pow(config.step_decay, outer);
        GammaFitResult fit = descend_gamma(ws, gamma, beta, B, base, config.max_inner,
                                           config.inner_patience, f_cur);
        const double improve = f_cur - fit.objective;
        if (fit.objective <= f_cur) {
            gamma = std::move(fit.gamma);
            f_cur = fit.objective;
        }
        if (improve < config.tol_objective) {
            if (++stall >= 3) break;
        } else {
            stall = 0;
        }
    }
    return Hypothesis{std::move(gamma)};
}

} // namespace lrqr
