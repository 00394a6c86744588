#include "lrqr/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "lrqr/errors.hpp"
#include "lrqr/ratio.hpp"
#include "lrqr/rng.hpp"

namespace lrqr {

SyntheticSpec SyntheticSpec::default_group_shift(std::size_t n1, std::size_t n2, std::size_t n3,
                                                 std::size_t n_test, std::uint64_t seed) {
    GroupShiftSpec law;
    law.p_source = {0.30, 0.25, 0.20, 0.15, 0.10};
    law.p_target = {0.10, 0.15, 0.20, 0.25, 0.30};
    law.score_scale = {0.5, 0.75, 1.0, 1.5, 2.0};
    return SyntheticSpec{law, n1, n2, n3, n_test, seed};
}

namespace {

void validate_simplex(const std::vector<double>& p, const char* name) {
    if (p.empty()) throw std::invalid_argument(std::string(name) + ": empty");
    double total = 0.0;
    for (double v : p) {
        if (v < 0.0) throw std::invalid_argument(std::string(name) + ": negative probability");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(name) + ": probabilities must sum to 1");
}

void validate(const SyntheticSpec& spec) {
    if (spec.n1 == 0 || spec.n2 == 0 || spec.n3 == 0 || spec.n_test == 0)
        throw std::invalid_argument("SyntheticSpec: all sample sizes must be >= 1");
    if (const auto* g = std::get_if<GroupShiftSpec>(&spec.law)) {
        validate_simplex(g->p_source, "p_source");
        validate_simplex(g->p_target, "p_target");
        if (g->p_source.size() != g->p_target.size() ||
            g->p_source.size() != g->score_scale.size())
            throw std::invalid_argument("GroupShiftSpec: p, q, scales must share length");
        for (std::size_t k = 0; k < g->p_source.size(); ++k) {
            if (g->p_target[k] > 0.0 && g->p_source[k] == 0.0)
                throw std::invalid_argument(
                    "GroupShiftSpec: target mass on a group with zero source mass");
            if (!(g->score_scale[k] > 0.0))
                throw std::invalid_argument("GroupShiftSpec: score scales must be > 0");
        }
    } else {
        const auto& gs = std::get<GaussianShiftSpec>(spec.law);
        if (gs.dim == 0) throw std::invalid_argument("GaussianShiftSpec: dim must be >= 1");
        if (!gs.mu.empty() && gs.mu.size() != gs.dim)
            throw std::invalid_argument("GaussianShiftSpec: mu length != dim");
        if (!(gs.score_base > 0.0) || gs.score_slope < 0.0)
            throw std::invalid_argument("GaussianShiftSpec: bad score-law parameters");
    }
}

double gaussian_scale(const GaussianShiftSpec& gs, std::span<const double> x) {
    return gs.score_base + gs.score_slope * std::abs(x[0]);
}

struct GaussianSampler {
    const GaussianShiftSpec& gs;
    std::mt19937_64& gen;

    void draw(bool target, std::span<double> x_out, double* score_out, double* r_out) {
        for (std::size_t j = 0; j < gs.dim; ++j) {
            x_out[j] = normal(gen);
            if (target && !gs.mu.empty()) x_out[j] += gs.mu[j];
        }
        if (r_out != nullptr) {
            *r_out = gs.mu.empty()
                         ? 1.0
                         : oracle_gaussian_ratio(gs.mu, {x_out.data(), x_out.size()});
        }
        if (score_out != nullptr)
            *score_out = uniform(gen, 0.0, gaussian_scale(gs, {x_out.data(), x_out.size()}));
    }
};

struct GroupSampler {
    const GroupShiftSpec& g;
    std::mt19937_64& gen;

    void draw(bool target, std::span<double> x_out, double* score_out, double* r_out) {
        const auto& probs = target ? g.p_target : g.p_source;
        const std::size_t k = categorical(gen, probs);
        for (std::size_t j = 0; j < x_out.size(); ++j) x_out[j] = 0.0;
        x_out[k] = 1.0;
        if (r_out != nullptr) *r_out = g.p_target[k] / g.p_source[k];
        if (score_out != nullptr) *score_out = uniform(gen, 0.0, g.score_scale[k]);
    }
};

template <typename Sampler>
void fill_sample(Sampler& sampler, bool target, Matrix& x, std::vector<double>* scores,
                 std::vector<double>& r, std::size_t n, std::size_t dim) {
    x = Matrix(n, dim);
    r.resize(n);
    if (scores != nullptr) scores->resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        sampler.draw(target, x.row(i), scores != nullptr ? &s : nullptr, &r[i]);
        if (scores != nullptr) (*scores)[i] = s;
    }
}

} // namespace

SyntheticData generate(const SyntheticSpec& spec) {
    validate(spec);
    std::mt19937_64 gen(spec.seed);
    SyntheticData data;
    auto run = [&](auto sampler, std::size_t dim) {
        fill_sample(sampler, false, data.x1, &data.s1, data.r1, spec.n1, dim);
        fill_sample(sampler, true, data.x2, nullptr, data.r2, spec.n2, dim);
        fill_sample(sampler, false, data.x3, nullptr, data.r3, spec.n3, dim);
        fill_sample(sampler, true, data.x_test, &data.s_test, data.r_test, spec.n_test, dim);
    };
    if (const auto* g = std::get_if<GroupShiftSpec>(&spec.law)) {
        run(GroupSampler{*g, gen}, g->p_source.size());
    } else {
        const auto& gs = std::get<GaussianShiftSpec>(spec.law);
        run(GaussianSampler{gs, gen}, gs.dim);
    }
    return data;
}

double oracle_conditional_quantile(const SyntheticSpec& spec, std::span<const double> x,
                                   double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("oracle_conditional_quantile: level must be in (0,1)");
    if (const auto* g = std::get_if<GroupShiftSpec>(&spec.law)) {
        if (x.size() != g->p_source.size())
            throw shape_error("oracle_conditional_quantile: arity mismatch");
        for (std::size_t k = 0; k < x.size(); ++k)
            if (x[k] == 1.0) return level * g->score_scale[k];
        throw std::invalid_argument("oracle_conditional_quantile: row belongs to no group");
    }
    const auto& gs = std::get<GaussianShiftSpec>(spec.law);
    if (x.size() != gs.dim) throw shape_error("oracle_conditional_quantile: arity mismatch");
    return level * gaussian_scale(gs, x);
}

SplitScenario median_split(const Matrix& features, std::size_t column, std::uint64_t seed) {
    if (column >= features.cols()) throw std::invalid_argument("median_split: column out of range");
    if (features.rows() == 0) throw std::invalid_argument("median_split: empty feature matrix");

    std::vector<double> values(features.rows());
    for (std::size_t i = 0; i < features.rows(); ++i) values[i] = features(i, column);
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median =
        n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    SplitScenario out;
    out.feature_index = column;
    out.median = median;
    std::vector<std::size_t> target;
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i] <= median)
            out.source_rows.push_back(i);
        else
            target.push_back(i);
    }
    if (target.empty())
        throw degenerate_split_error("median_split: no value above the median");

    std::mt19937_64 gen(seed);
    shuffle(target, gen);
    const std::size_t n_unlabeled = target.size() / 2;
    out.target_unlabeled_rows.assign(target.begin(),
                                     target.begin() + static_cast<std::ptrdiff_t>(n_unlabeled));
    out.target_labeled_rows.assign(target.begin() + static_cast<std::ptrdiff_t>(n_unlabeled),
                                   target.end());
    std::sort(out.target_unlabeled_rows.begin(), out.target_unlabeled_rows.end());
    std::sort(out.target_labeled_rows.begin(), out.target_labeled_rows.end());
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(cell, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
    if (cell.empty() || pos != cell.size())
        throw parse_error("CSV: row " + std::to_string(row) + ", column '" + column +
                          "': cannot parse '" + cell + "' as a number");
    return value;
}

} // namespace

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw parse_error("CSV: cannot open " + path);

    std::string header_line;
    if (!std::getline(in, header_line)) throw parse_error("CSV: " + path + " is empty");
    if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
    const std::vector<std::string> header = split_line(header_line);

    std::unordered_map<std::string, std::size_t> col_index;
    for (std::size_t j = 0; j < header.size(); ++j) col_index[header[j]] = j;
    auto require = [&](const std::string& name) {
        auto it = col_index.find(name);
        if (it == col_index.end())
            throw parse_error("CSV: missing column '" + name + "' in " + path);
        return it->second;
    };

    std::vector<std::size_t> feature_idx;
    feature_idx.reserve(schema.feature_columns.size());
    for (const auto& name : schema.feature_columns) feature_idx.push_back(require(name));
    std::optional<std::size_t> label_idx, score_idx, group_idx;
    if (schema.label_column) label_idx = require(*schema.label_column);
    if (schema.score_column) score_idx = require(*schema.score_column);
    if (schema.group_column) group_idx = require(*schema.group_column);

    Dataset out;
    out.features = Matrix(0, feature_idx.size());
    out.has_labels = label_idx.has_value();
    out.has_scores = score_idx.has_value();
    out.has_groups = group_idx.has_value();
    std::unordered_map<std::string, std::size_t> group_ids;

    std::string line;
    std::size_t row = 1; // header is row 1
    std::vector<double> feat(feature_idx.size());
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size())
            throw parse_error("CSV: row " + std::to_string(row) + " has " +
                              std::to_string(cells.size()) + " cells, header has " +
                              std::to_string(header.size()));
        for (std::size_t k = 0; k < feature_idx.size(); ++k)
            feat[k] = parse_cell(cells[feature_idx[k]], row, header[feature_idx[k]]);
        out.features.push_row(feat);
        if (label_idx)
            out.labels.push_back(parse_cell(cells[*label_idx], row, header[*label_idx]));
        if (score_idx)
            out.scores.push_back(parse_cell(cells[*score_idx], row, header[*score_idx]));
        if (group_idx) {
            const std::string& name = cells[*group_idx];
            auto [it, inserted] = group_ids.try_emplace(name, group_ids.size());
            if (inserted) out.group_names.push_back(name);
            out.groups.push_back(it->second);
        }
    }
    if (out.features.rows() == 0) throw parse_error("CSV: " + path + " has no data rows");
    return out;
}

} // namespace lrqr
