#pragma once

#include <span>
#include <vector>

#include "lrqr/matrix.hpp"

namespace lrqr {

// The three basis-evaluated calibration samples: labeled source rows with
// their scores, unlabeled target rows, unlabeled source rows.
class CalibrationBundle {
public:
    CalibrationBundle(Matrix s1_phi, std::vector<double> s1_scores, Matrix s2_phi,
                      Matrix s3_phi, bool bounded_scores = false);

    const Matrix& s1_phi() const { return s1_phi_; }
    const std::vector<double>& s1_scores() const { return s1_scores_; }
    const Matrix& s2_phi() const { return s2_phi_; }
    const Matrix& s3_phi() const { return s3_phi_; }

    std::size_t n1() const { return s1_phi_.rows(); }
    std::size_t n2() const { return s2_phi_.rows(); }
    std::size_t n3() const { return s3_phi_.rows(); }
    std::size_t dim() const { return s1_phi_.cols(); }
    bool bounded_scores() const { return bounded_scores_; }

    // Row subsets of all three samples, for fold construction.
    CalibrationBundle select(std::span<const std::size_t> rows1,
                             std::span<const std::size_t> rows2,
                             std::span<const std::size_t> rows3) const;

private:
    Matrix s1_phi_;
    std::vector<double> s1_scores_;
    Matrix s2_phi_;
    Matrix s3_phi_;
    bool bounded_scores_;
};

} // namespace lrqr
