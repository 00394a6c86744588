#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lrqr/matrix.hpp"

namespace lrqr {

enum class BasisKind {
    raw_with_intercept,  // Phi(x) = (1, x_1, ..., x_p)
    group_indicators,    // Phi(x) = 0/1 membership vector over d groups
    precomputed_columns, // Phi(x) = x (externally computed features)
};

std::string_view to_string(BasisKind k);
BasisKind basis_kind_from_string(std::string_view s);

// A fixed feature map Phi : X -> R^d. Immutable after construction (the
// optional standardization for precomputed columns is fitted once).
class Basis {
public:
    static Basis raw_with_intercept(std::size_t n_features);
    static Basis group_indicators(std::size_t n_groups);
    static Basis precomputed_columns(std::size_t dim);

    BasisKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }

    // Group bases accept either the d-length 0/1 membership row or a single
    // 1-based group index; the other kinds expect their declared arity.
    std::vector<double> eval(std::span<const double> x) const;
    void eval_into(std::span<const double> x, std::span<double> out) const;
    Matrix eval_rows(const Matrix& xs) const;

    // Column index holding the constant feature, if the basis has one.
    std::optional<std::size_t> intercept_column() const;

    // Per-column standardization for precomputed columns, fitted on source
    // rows only. Columns with zero spread are left untouched.
    void fit_standardization(const Matrix& source_rows);
    bool standardized() const { return !standardize_mean_.empty(); }
    const std::vector<double>& standardize_mean() const { return standardize_mean_; }
    const std::vector<double>& standardize_scale() const { return standardize_scale_; }
    void set_standardization(std::vector<double> mean, std::vector<double> scale);

private:
    Basis(BasisKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

    BasisKind kind_;
    std::size_t dim_;
    std::vector<double> standardize_mean_;
    std::vector<double> standardize_scale_;
};

// Coefficient vector over a basis; h(x) = <gamma, Phi(x)>.
struct Hypothesis {
    std::vector<double> gamma;

    double norm2() const;
};

double eval_h(const Basis& basis, const Hypothesis& hyp, std::span<const double> x);

} // namespace lrqr
