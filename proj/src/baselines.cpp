#include "lrqr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lrqr/errors.hpp"

namespace lrqr {

double split_conformal_threshold(std::span<const double> scores, Alpha alpha) {
    if (scores.empty()) throw std::invalid_argument("split_conformal_threshold: empty scores");
    const auto n = scores.size();
    const double rank = std::ceil((1.0 - alpha.value) * static_cast<double>(n + 1));
    const auto k = static_cast<std::size_t>(rank);
    if (k > n) return std::numeric_limits<double>::infinity();
    std::vector<double> sorted(scores.begin(), scores.end());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     sorted.end());
    return sorted[k - 1];
}

double weighted_conformal_threshold(std::span<const double> scores,
                                    std::span<const double> cal_weights, double test_weight,
                                    Alpha alpha) {
    if (scores.empty()) throw std::invalid_argument("weighted_conformal_threshold: empty scores");
    if (scores.size() != cal_weights.size())
        throw shape_error("weighted_conformal_threshold: scores/weights length mismatch");
    for (double w : cal_weights)
        if (!(w > 0.0))
            throw std::invalid_argument("weighted_conformal_threshold: weights must be > 0");
    if (!(test_weight >= 0.0))
        throw std::invalid_argument("weighted_conformal_threshold: test weight must be >= 0");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double total = test_weight;
    for (double w : cal_weights) total += w;
    const double need = (1.0 - alpha.value) * total;

    double acc = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double value = scores[order[i]];
        // absorb the whole run of tied scores before testing the level
        while (i < order.size() && scores[order[i]] == value) {
            acc += cal_weights[order[i]];
            ++i;
        }
        if (acc >= need) return value;
    }
    return std::numeric_limits<double>::infinity();
}

} // namespace lrqr
