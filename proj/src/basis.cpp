#include "lrqr/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "lrqr/kernels.hpp"

namespace lrqr {

std::string_view to_string(BasisKind k) {
    switch (k) {
    case BasisKind::raw_with_intercept: return "raw_with_intercept";
    case BasisKind::group_indicators: return "group_indicators";
    case BasisKind::precomputed_columns: return "precomputed_columns";
    }
    return "?";
}

BasisKind basis_kind_from_string(std::string_view s) {
    if (s == "raw_with_intercept") return BasisKind::raw_with_intercept;
    if (s == "group_indicators") return BasisKind::group_indicators;
    if (s == "precomputed_columns") return BasisKind::precomputed_columns;
    throw std::invalid_argument("unknown basis kind: " + std::string(s));
}

Basis Basis::raw_with_intercept(std::size_t n_features) {
    return Basis(BasisKind::raw_with_intercept, n_features + 1);
}

Basis Basis::group_indicators(std::size_t n_groups) {
    if (n_groups == 0) throw std::invalid_argument("group_indicators: need at least one group");
    return Basis(BasisKind::group_indicators, n_groups);
}

Basis Basis::precomputed_columns(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("precomputed_columns: need at least one column");
    return Basis(BasisKind::precomputed_columns, dim);
}

std::optional<std::size_t> Basis::intercept_column() const {
    if (kind_ == BasisKind::raw_with_intercept) return 0;
    return std::nullopt;
}

void Basis::eval_into(std::span<const double> x, std::span<double> out) const {
    if (out.size() != dim_) throw shape_error("Basis::eval: output size mismatch");
    switch (kind_) {
    case BasisKind::raw_with_intercept: {
        if (x.size() + 1 != dim_)
            throw shape_error("Basis::eval: expected " + std::to_string(dim_ - 1) +
                              " features, got " + std::to_string(x.size()));
        out[0] = 1.0;
        for (std::size_t j = 0; j < x.size(); ++j) out[j + 1] = x[j];
        return;
    }
    case BasisKind::group_indicators: {
        if (x.size() == 1 && dim_ != 1) {
            const double g = x[0];
            if (g != std::floor(g) || g < 1.0 || g > static_cast<double>(dim_))
                throw shape_error("Basis::eval: group index out of range 1.." +
                                  std::to_string(dim_));
            for (std::size_t j = 0; j < dim_; ++j) out[j] = 0.0;
            out[static_cast<std::size_t>(g) - 1] = 1.0;
            return;
        }
        if (x.size() != dim_)
            throw shape_error("Basis::eval: expected membership row of length " +
                              std::to_string(dim_));
        bool any = false;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (x[j] != 0.0 && x[j] != 1.0)
                throw shape_error("Basis::eval: membership entries must be 0 or 1");
            any = any || x[j] == 1.0;
            out[j] = x[j];
        }
        if (!any) throw shape_error("Basis::eval: input belongs to no group");
        return;
    }
    case BasisKind::precomputed_columns: {
        if (x.size() != dim_)
            throw shape_error("Basis::eval: expected " + std::to_string(dim_) +
                              " columns, got " + std::to_string(x.size()));
        if (standardized()) {
            for (std::size_t j = 0; j < dim_; ++j)
                out[j] = (x[j] - standardize_mean_[j]) / standardize_scale_[j];
        } else {
            for (std::size_t j = 0; j < dim_; ++j) out[j] = x[j];
        }
        return;
    }
    }
}

std::vector<double> Basis::eval(std::span<const double> x) const {
    std::vector<double> out(dim_);
    eval_into(x, out);
    return out;
}

Matrix Basis::eval_rows(const Matrix& xs) const {
    Matrix out(xs.rows(), dim_);
    for (std::size_t i = 0; i < xs.rows(); ++i) eval_into(xs.row(i), out.row(i));
    return out;
}

void Basis::fit_standardization(const Matrix& source_rows) {
    if (kind_ != BasisKind::precomputed_columns)
        throw std::logic_error("standardization applies to precomputed columns only");
    if (source_rows.cols() != dim_ || source_rows.rows() == 0)
        throw shape_error("fit_standardization: bad source matrix");
    std::vector<double> mean(dim_, 0.0), scale(dim_, 1.0);
    const double n = static_cast<double>(source_rows.rows());
    for (std::size_t i = 0; i < source_rows.rows(); ++i)
        for (std::size_t j = 0; j < dim_; ++j) mean[j] += source_rows(i, j);
    for (std::size_t j = 0; j < dim_; ++j) mean[j] /= n;
    std::vector<double> var(dim_, 0.0);
    for (std::size_t i = 0; i < source_rows.rows(); ++i)
        for (std::size_t j = 0; j < dim_; ++j) {
            const double d = source_rows(i, j) - mean[j];
            var[j] += d * d;
        }
    for (std::size_t j = 0; j < dim_; ++j) {
        const double sd = std::sqrt(var[j] / n);
        scale[j] = sd > 0.0 ? sd : 1.0;
    }
    standardize_mean_ = std::move(mean);
    standardize_scale_ = std::move(scale);
}

void Basis::set_standardization(std::vector<double> mean, std::vector<double> scale) {
    if (mean.size() != dim_ || scale.size() != dim_)
        throw shape_error("set_standardization: size mismatch");
    standardize_mean_ = std::move(mean);
    standardize_scale_ = std::move(scale);
}

double Hypothesis::norm2() const {
    return std::sqrt(kernels::sumsq(gamma.data(), gamma.size()));
}

double eval_h(const Basis& basis, const Hypothesis& hyp, std::span<const double> x) {
    if (hyp.gamma.size() != basis.dim())
        throw shape_error("eval_h: gamma length does not match basis dim");
    const std::vector<double> phi = basis.eval(x);
    return kernels::dot(hyp.gamma.data(), phi.data(), phi.size());
}

} // namespace lrqr
