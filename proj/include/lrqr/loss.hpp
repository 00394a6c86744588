#pragma once

#include <stdexcept>

namespace lrqr {

// Miscoverage level; the working range is 0 < alpha <= 0.5.
struct Alpha {
    double value;

    explicit Alpha(double v) : value(v) {
        if (!(v > 0.0) || !(v <= 0.5))
            throw std::invalid_argument("Alpha: value must be in (0, 0.5]");
    }
};

/// Quantile (pinball) loss of a threshold c against a score s.
inline double pinball(double c, double s, Alpha alpha) {
    const double a = alpha.value;
    return s >= c ? (1.0 - a) * (s - c) : a * (c - s);
}

/// Subgradient of pinball in c. The indicator is closed at the tie s == c,
/// where the returned value is alpha.
inline double pinball_subgrad(double c, double s, Alpha alpha) {
    return (s <= c ? 1.0 : 0.0) - (1.0 - alpha.value);
}

} // namespace lrqr
