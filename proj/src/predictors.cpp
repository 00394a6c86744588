#include "lrqr/predictors.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lrqr/kernels.hpp"
#include "lrqr/rng.hpp"

namespace lrqr {

double RidgeModel::predict(std::span<const double> x) const {
    if (x.size() != coefficients.size())
        throw shape_error("RidgeModel::predict: feature arity mismatch");
    return intercept + kernels::dot(coefficients.data(), x.data(), x.size());
}

RidgeModel ridge_fit(const Matrix& X, std::span<const double> y, double penalty) {
    if (X.rows() == 0) throw std::invalid_argument("ridge_fit: empty design matrix");
    if (X.rows() != y.size()) throw shape_error("ridge_fit: X/y row mismatch");
    if (penalty < 0.0) throw std::invalid_argument("ridge_fit: penalty must be >= 0");

    const auto n = static_cast<Eigen::Index>(X.rows());
    const auto p = static_cast<Eigen::Index>(X.cols());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        Xm(X.data(), n, p);
    Eigen::Map<const Eigen::VectorXd> ym(y.data(), n);

    const Eigen::RowVectorXd x_mean = Xm.colwise().mean();
    const double y_mean = ym.mean();
    const Eigen::MatrixXd Xc = Xm.rowwise() - x_mean;
    const Eigen::VectorXd yc = ym.array() - y_mean;

    Eigen::MatrixXd gram = Xc.transpose() * Xc;
    gram.diagonal().array() += penalty;
    const Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw singular_system_error("ridge_fit: normal equations are singular");
    const Eigen::VectorXd rhs = Xc.transpose() * yc;
    const Eigen::VectorXd coef = llt.solve(rhs);
    const double scale = std::max(rhs.norm(), gram.norm() * coef.norm());
    if (scale > 0.0 && (gram * coef - rhs).norm() > 1e-8 * scale)
        throw singular_system_error("ridge_fit: normal equations are numerically singular");

    RidgeModel model;
    model.coefficients.assign(coef.data(), coef.data() + p);
    model.intercept = y_mean - x_mean * coef;
    model.penalty = penalty;
    return model;
}

RidgeModel ridge_cv_fit(const Matrix& X, std::span<const double> y,
                        std::span<const double> penalty_grid, int folds, std::uint64_t seed) {
    if (penalty_grid.empty()) throw std::invalid_argument("ridge_cv_fit: empty penalty grid");
    if (folds < 2) throw std::invalid_argument("ridge_cv_fit: need at least 2 folds");
    if (X.rows() < static_cast<std::size_t>(folds))
        throw std::invalid_argument("ridge_cv_fit: more folds than rows");
    if (X.rows() != y.size()) throw shape_error("ridge_cv_fit: X/y row mismatch");

    std::mt19937_64 gen(seed);
    const std::vector<int> fold = fold_assignment(X.rows(), folds, gen);

    double best_penalty = penalty_grid[0];
    double best_mse = std::numeric_limits<double>::infinity();
    for (double penalty : penalty_grid) {
        double sse = 0.0;
        std::size_t held = 0;
        for (int f = 0; f < folds; ++f) {
            std::vector<std::size_t> train_rows, test_rows;
            for (std::size_t i = 0; i < X.rows(); ++i)
                (fold[i] == f ? test_rows : train_rows).push_back(i);
            if (train_rows.empty() || test_rows.empty()) continue;
            const Matrix Xtr = X.select_rows(train_rows);
            const std::vector<double> ytr = select(y, train_rows);
            const RidgeModel m = ridge_fit(Xtr, ytr, penalty);
            for (std::size_t i : test_rows) {
                const double r = y[i] - m.predict(X.row(i));
                sse += r * r;
                ++held;
            }
        }
        const double mse = sse / static_cast<double>(held);
        if (mse < best_mse) {
            best_mse = mse;
            best_penalty = penalty;
        }
    }
    return ridge_fit(X, y, best_penalty);
}

std::vector<double> default_ridge_grid() {
    std::vector<double> grid;
    grid.reserve(13);
    for (int i = 0; i < 13; ++i)
        grid.push_back(std::pow(10.0, -4.0 + 6.0 * static_cast<double>(i) / 12.0));
    return grid;
}

double score_abs_residual(const RidgeModel& model, std::span<const double> x, double y) {
    return std::abs(y - model.predict(x));
}

namespace {

void check_probs(std::span<const double> probs, std::size_t label) {
    if (label >= probs.size()) throw shape_error("score: label index out of range");
    double total = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw std::invalid_argument("score: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("score: probabilities do not sum to 1");
}

} // namespace

double score_neg_log_prob(std::span<const double> probs, std::size_t label) {
    check_probs(probs, label);
    const double p = probs[label];
    if (p == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(p);
}

double score_one_minus_prob(std::span<const double> probs, std::size_t label) {
    check_probs(probs, label);
    return 1.0 - probs[label];
}

} // namespace lrqr
