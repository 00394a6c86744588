#include "lrqr/tuning.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "lrqr/rng.hpp"

namespace lrqr {

double lambda_star(std::size_t n1, std::size_t n2, std::size_t n3, double c0) {
    if (n1 == 0 || n2 == 0 || n3 == 0)
        throw std::invalid_argument("lambda_star: sample counts must be >= 1");
    if (!(c0 > 0.0)) throw std::invalid_argument("lambda_star: c0 must be > 0");
    const double inv = 1.0 / static_cast<double>(n2) + 1.0 / static_cast<double>(n3);
    return c0 * std::cbrt(1.0 / (static_cast<double>(n1) * inv));
}

std::array<double, 10> lambda_grid(double lambda_star) {
    if (!(lambda_star > 0.0)) throw std::invalid_argument("lambda_grid: lambda_star must be > 0");
    std::array<double, 10> grid{};
    for (int i = 1; i <= 10; ++i) grid[i - 1] = lambda_star * static_cast<double>(i) / 10.0;
    return grid;
}

namespace {

std::vector<std::size_t> rows_where(const std::vector<int>& fold, int f, bool equal) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold.size(); ++i)
        if ((fold[i] == f) == equal) out.push_back(i);
    return out;
}

} // namespace

TuneResult cross_validate(const CalibrationBundle& bundle, const Basis& basis,
                          const LrqrConfig& config, int folds, double c0, int jobs) {
    if (folds < 2)
        throw std::invalid_argument("cross_validate: need at least 2 folds for held-out data");
    if (bundle.n1() < static_cast<std::size_t>(folds) ||
        bundle.n2() < static_cast<std::size_t>(folds) ||
        bundle.n3() < static_cast<std::size_t>(folds))
        throw std::invalid_argument("cross_validate: each sample needs at least `folds` rows");

    const double lstar = lambda_star(bundle.n1(), bundle.n2(), bundle.n3(), c0);
    const std::array<double, 10> grid = lambda_grid(lstar);

    std::mt19937_64 gen(config.seed);
    const std::vector<int> fold1 = fold_assignment(bundle.n1(), folds, gen);
    const std::vector<int> fold2 = fold_assignment(bundle.n2(), folds, gen);
    const std::vector<int> fold3 = fold_assignment(bundle.n3(), folds, gen);

    std::array<std::vector<double>, 10> fold_scores;
    for (auto& row : fold_scores) row.assign(static_cast<std::size_t>(folds), 0.0);

    struct Task {
        int grid_index;
        int fold;
    };
    std::vector<Task> tasks;
    for (int gi = 0; gi < 10; ++gi)
        for (int f = 0; f < folds; ++f) tasks.push_back({gi, f});

    auto run_task = [&](const Task& t) {
        const auto train1 = rows_where(fold1, t.fold, false);
        const auto train2 = rows_where(fold2, t.fold, false);
        const auto train3 = rows_where(fold3, t.fold, false);
        const auto held1 = rows_where(fold1, t.fold, true);
        const auto held2 = rows_where(fold2, t.fold, true);
        const auto held3 = rows_where(fold3, t.fold, true);
        const CalibrationBundle train = bundle.select(train1, train2, train3);
        const CalibrationBundle held = bundle.select(held1, held2, held3);
        LrqrConfig cfg = config;
        cfg.lambda = grid[static_cast<std::size_t>(t.grid_index)];
        auto [model, diag] = solve(cfg, train, basis);
        fold_scores[static_cast<std::size_t>(t.grid_index)][static_cast<std::size_t>(t.fold)] =
            gradient_norm_measure(model, held);
    };

    if (jobs <= 1) {
        for (const Task& t : tasks) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                const std::size_t k = next.fetch_add(1);
                if (k >= tasks.size()) return;
                run_task(tasks[k]);
            }
        };
        std::vector<std::thread> pool;
        const int n_threads = std::min<int>(jobs, static_cast<int>(tasks.size()));
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    int best = 0;
    double best_mean = std::numeric_limits<double>::infinity();
    for (int gi = 0; gi < 10; ++gi) {
        double mean = 0.0;
        for (int f = 0; f < folds; ++f)
            mean += fold_scores[static_cast<std::size_t>(gi)][static_cast<std::size_t>(f)];
        mean /= static_cast<double>(folds);
        if (mean < best_mean) { // strict comparison: ties keep the smaller lambda
            best_mean = mean;
            best = gi;
        }
    }
    const double chosen = grid[static_cast<std::size_t>(best)];

    LrqrConfig final_cfg = config;
    final_cfg.lambda = chosen;
    auto [model, diag] = solve(final_cfg, bundle, basis);
    return TuneResult{lstar,           grid, std::move(fold_scores), chosen,
                      std::move(model), std::move(diag), config.seed};
}

} // namespace lrqr
