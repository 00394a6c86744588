#include "lrqr/bundle.hpp"

#include <cmath>
#include <stdexcept>

namespace lrqr {

CalibrationBundle::CalibrationBundle(Matrix s1_phi, std::vector<double> s1_scores, Matrix s2_phi,
                                     Matrix s3_phi, bool bounded_scores)
    : s1_phi_(std::move(s1_phi)),
      s1_scores_(std::move(s1_scores)),
      s2_phi_(std::move(s2_phi)),
      s3_phi_(std::move(s3_phi)),
      bounded_scores_(bounded_scores) {
    if (s1_phi_.rows() == 0 || s2_phi_.rows() == 0 || s3_phi_.rows() == 0)
        throw std::invalid_argument("CalibrationBundle: all three samples must be non-empty");
    if (s1_scores_.size() != s1_phi_.rows())
        throw shape_error("CalibrationBundle: scores length != S1 rows");
    const std::size_t d = s1_phi_.cols();
    if (s2_phi_.cols() != d || s3_phi_.cols() != d)
        throw shape_error("CalibrationBundle: samples disagree on column count");
    if (!s1_phi_.all_finite() || !s2_phi_.all_finite() || !s3_phi_.all_finite())
        throw std::invalid_argument("CalibrationBundle: non-finite feature value");
    for (double s : s1_scores_) {
        if (!std::isfinite(s))
            throw std::invalid_argument("CalibrationBundle: non-finite score");
        if (bounded_scores_ && (s < 0.0 || s > 1.0))
            throw std::invalid_argument("CalibrationBundle: score outside [0,1] in bounded mode");
    }
}

CalibrationBundle CalibrationBundle::select(std::span<const std::size_t> rows1,
                                            std::span<const std::size_t> rows2,
                                            std::span<const std::size_t> rows3) const {
    return CalibrationBundle(s1_phi_.select_rows(rows1), lrqr::select(s1_scores_, rows1),
                             s2_phi_.select_rows(rows2), s3_phi_.select_rows(rows3),
                             bounded_scores_);
}

} // namespace lrqr
