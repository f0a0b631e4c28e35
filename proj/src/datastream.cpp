#include "ufodt/datastream.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ufodt {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

ColumnKind infer_kind(const std::vector<std::string>& values) {
    bool numeric = true;
    bool zero_one = true;
    bool integral = true;
    std::set<std::string> distinct;
    for (const auto& v : values) {
        distinct.insert(v);
        double d;
        if (!parse_double(v, d)) {
            numeric = false;
            break;
        }
        if (d != 0.0 && d != 1.0) zero_one = false;
        if (d != std::floor(d)) integral = false;
    }
    if (!numeric) return ColumnKind::Categorical;
    if (zero_one) return ColumnKind::Binary;
    if (integral && distinct.size() <= 10) return ColumnKind::Categorical;
    return ColumnKind::Real;
}

}  // namespace

Dataset parse_dataset(const std::string& text, const std::string& schema,
                      const std::string& origin) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) throw DataError(origin + ": missing header row");
    std::vector<std::string> header = split_csv(line);
    if (header.size() < 2) throw DataError(origin + ": need at least one feature column and a label");
    const std::size_t ncols = header.size() - 1;

    std::vector<std::vector<std::string>> rows;
    while (std::getline(ss, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_csv(line);
        if (cells.size() != header.size())
            throw DataError(origin + ": row " + std::to_string(rows.size() + 1) +
                            " has " + std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        rows.push_back(std::move(cells));
    }

    // resolve per-column kinds
    std::vector<ColumnKind> kinds(ncols);
    if (schema == "auto") {
        for (std::size_t c = 0; c < ncols; ++c) {
            std::vector<std::string> column;
            column.reserve(rows.size());
            for (const auto& r : rows)
                if (!r[c].empty()) column.push_back(r[c]);
            kinds[c] = infer_kind(column);
        }
    } else {
        std::vector<std::string> entries = split_csv(schema);
        if (entries.size() != ncols)
            throw DataError(origin + ": schema has " + std::to_string(entries.size()) +
                            " entries for " + std::to_string(ncols) + " feature columns");
        for (std::size_t c = 0; c < ncols; ++c) {
            if (entries[c] == "binary") kinds[c] = ColumnKind::Binary;
            else if (entries[c] == "categorical") kinds[c] = ColumnKind::Categorical;
            else if (entries[c] == "real") kinds[c] = ColumnKind::Real;
            else throw DataError(origin + ": unknown schema type '" + entries[c] + "'");
        }
    }

    // category values in first-appearance order
    std::vector<std::vector<std::string>> categories(ncols);
    for (std::size_t c = 0; c < ncols; ++c) {
        if (kinds[c] != ColumnKind::Categorical) continue;
        for (const auto& r : rows) {
            if (r[c].empty()) continue;
            auto& cats = categories[c];
            if (std::find(cats.begin(), cats.end(), r[c]) == cats.end()) cats.push_back(r[c]);
        }
    }

    Dataset ds;
    for (std::size_t c = 0; c < ncols; ++c) {
        switch (kinds[c]) {
            case ColumnKind::Binary:
                ds.features.push_back({ColumnKind::Binary, header[c], ""});
                break;
            case ColumnKind::Real:
                ds.features.push_back({ColumnKind::Real, header[c], ""});
                ds.has_real = true;
                break;
            case ColumnKind::Categorical:
                for (const auto& cat : categories[c])
                    ds.features.push_back({ColumnKind::Categorical, header[c], cat});
                break;
        }
    }

    std::map<std::string, std::size_t> label_index;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        DataPoint p;
        p.features.reserve(ds.features.size());
        auto cell_error = [&](std::size_t c, const std::string& what) {
            return DataError(origin + ": row " + std::to_string(r + 1) + ", column " + header[c] +
                             ": " + what);
        };
        for (std::size_t c = 0; c < ncols; ++c) {
            const std::string& cell = cells[c];
            if (cell.empty()) throw cell_error(c, "empty cell");
            switch (kinds[c]) {
                case ColumnKind::Binary: {
                    double d;
                    if (!parse_double(cell, d) || (d != 0.0 && d != 1.0))
                        throw cell_error(c, "expected 0/1, got '" + cell + "'");
                    p.features.push_back(d);
                    break;
                }
                case ColumnKind::Real: {
                    double d;
                    if (!parse_double(cell, d)) throw cell_error(c, "unparseable number '" + cell + "'");
                    p.features.push_back(d);
                    break;
                }
                case ColumnKind::Categorical: {
                    const auto& cats = categories[c];
                    auto it = std::find(cats.begin(), cats.end(), cell);
                    if (it == cats.end()) throw cell_error(c, "unknown category '" + cell + "'");
                    for (const auto& cat : cats) p.features.push_back(cat == cell ? 1.0 : 0.0);
                    break;
                }
            }
        }
        const std::string& label = cells[ncols];
        if (label.empty()) throw cell_error(ncols, "empty cell");
        auto it = label_index.find(label);
        if (it == label_index.end()) {
            it = label_index.emplace(label, ds.class_names.size()).first;
            ds.class_names.push_back(label);
        }
        p.label = it->second;
        ds.points.push_back(std::move(p));
    }
    ds.num_classes = ds.class_names.size();
    return ds;
}

Dataset load_dataset(const std::string& path, const std::string& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("load_dataset: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str(), schema, path);
}

CostModel load_cost_file(const std::string& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) throw DataError("load_cost_file: cannot open " + path);
    CostModel model;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        double c;
        if (!parse_double(t, c) || !(c > 0.0))
            throw DataError("load_cost_file: bad cost '" + t + "' in " + path);
        model.costs.push_back(c);
    }
    if (model.costs.size() != n)
        throw DataError("load_cost_file: " + std::to_string(model.costs.size()) +
                        " costs for " + std::to_string(n) + " features");
    return model;
}

namespace {

// attribute values, one-hot in this order
constexpr std::size_t kStaggerAttrs = 3;
constexpr std::size_t kStaggerValues = 3;

int stagger_label(std::size_t concept_index, std::size_t size, std::size_t color,
                  std::size_t shape) {
    switch (concept_index % 3) {
        case 0: return (size == 0 && color == 0) ? 1 : 0;   // small and red
        case 1: return (color == 1 || shape == 0) ? 1 : 0;  // green or circle
        default: return (size == 1 || size == 2) ? 1 : 0;   // medium or large
    }
}

DataPoint stagger_point(std::size_t concept_index, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, kStaggerValues - 1);
    std::size_t attrs[kStaggerAttrs];
    for (auto& a : attrs) a = pick(rng);
    DataPoint p;
    p.features.assign(kStaggerAttrs * kStaggerValues, 0.0);
    for (std::size_t a = 0; a < kStaggerAttrs; ++a) p.features[a * kStaggerValues + attrs[a]] = 1.0;
    p.label = static_cast<std::size_t>(stagger_label(concept_index, attrs[0], attrs[1], attrs[2]));
    return p;
}

}  // namespace

std::size_t stagger_concept_at(std::size_t t, const std::vector<std::size_t>& drift_points) {
    std::size_t drifts = 0;
    for (std::size_t d : drift_points)
        if (t >= d) ++drifts;
    return drifts % 3;
}

std::vector<DataPoint> stagger_stream(std::size_t length,
                                      const std::vector<std::size_t>& drift_points, Rng& rng) {
    std::vector<DataPoint> stream;
    stream.reserve(length);
    for (std::size_t t = 0; t < length; ++t)
        stream.push_back(stagger_point(stagger_concept_at(t, drift_points), rng));
    return stream;
}

std::vector<DataPoint> stagger_concept_sample(std::size_t concept_index, std::size_t count,
                                              Rng& rng) {
    std::vector<DataPoint> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) points.push_back(stagger_point(concept_index, rng));
    return points;
}

std::vector<std::string> stagger_feature_names() {
    return {"size_small",   "size_medium",   "size_large",  "color_red",     "color_green",
            "color_blue",   "shape_circle",  "shape_triangle", "shape_rectangle"};
}

namespace {

// seven-segment patterns for digits 0-9:
// top, top-left, top-right, middle, bottom-left, bottom-right, bottom
constexpr int kLedSegments = 7;
constexpr int kLedPatterns[10][kLedSegments] = {
    {1, 1, 1, 0, 1, 1, 1}, {0, 0, 1, 0, 0, 1, 0}, {1, 0, 1, 1, 1, 0, 1}, {1, 0, 1, 1, 0, 1, 1},
    {0, 1, 1, 1, 0, 1, 0}, {1, 1, 0, 1, 0, 1, 1}, {1, 1, 0, 1, 1, 1, 1}, {1, 0, 1, 0, 0, 1, 0},
    {1, 1, 1, 1, 1, 1, 1}, {1, 1, 1, 1, 0, 1, 1}};

}  // namespace

std::vector<DataPoint> led_stream(std::size_t length, double noise, std::size_t width, Rng& rng) {
    if (width < kLedSegments) throw std::invalid_argument("led_stream: width must be >= 7");
    std::uniform_int_distribution<std::size_t> digit(0, 9);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<DataPoint> stream;
    stream.reserve(length);
    for (std::size_t t = 0; t < length; ++t) {
        DataPoint p;
        p.label = digit(rng);
        p.features.resize(width);
        for (int s = 0; s < kLedSegments; ++s) {
            int bit = kLedPatterns[p.label][s];
            if (unif(rng) < noise) bit = 1 - bit;
            p.features[s] = bit;
        }
        for (std::size_t i = kLedSegments; i < width; ++i) p.features[i] = unif(rng) < 0.5 ? 1.0 : 0.0;
        stream.push_back(std::move(p));
    }
    return stream;
}

ThetaTable led_true_theta(double noise, std::size_t width) {
    ThetaTable t;
    t.theta = Matrix(width, 10);
    for (std::size_t i = 0; i < width; ++i)
        for (std::size_t j = 0; j < 10; ++j)
            t.theta(i, j) = i < kLedSegments ? (kLedPatterns[j][i] ? 1.0 - noise : noise) : 0.5;
    t.class_prior.assign(10, 0.1);
    return t;
}

UtilityKind choose_utility_kind(const std::vector<DataPoint>& points) {
    std::map<std::size_t, std::size_t> counts;
    for (const auto& p : points) ++counts[p.label];
    std::size_t majority = 0;
    for (const auto& [label, c] : counts) majority = std::max(majority, c);
    double frac = points.empty() ? 0.0 : static_cast<double>(majority) / points.size();
    return frac > 0.6 ? UtilityKind::MacroF : UtilityKind::Accuracy;
}

std::size_t map_predict(const ThetaTable& theta, const std::vector<double>& features) {
    ObservationSet obs;
    for (std::size_t i = 0; i < features.size(); ++i)
        obs.add(i, features[i] >= 0.5 ? 1 : 0, 0.0);
    std::vector<double> post;
    try {
        post = class_posterior(theta, obs);
    } catch (const DegenerateEvidenceError&) {
        post = theta.class_prior;
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < post.size(); ++j)
        if (post[j] > post[best]) best = j;
    return best;
}

double evaluate_test_theta(const ThetaTable& theta, const std::vector<DataPoint>& test,
                           UtilityKind kind) {
    if (test.empty()) throw std::invalid_argument("evaluate_test: empty test set");
    Matrix confusion(theta.m(), theta.m(), 0.0);
    std::size_t correct = 0;
    for (const auto& p : test) {
        std::size_t pred = map_predict(theta, p.features);
        confusion(p.label, pred) += 1.0;
        if (pred == p.label) ++correct;
    }
    if (kind == UtilityKind::Accuracy)
        return static_cast<double>(correct) / static_cast<double>(test.size());
    return f_measure(confusion);
}

double evaluate_test(const BeliefState& belief, const std::vector<DataPoint>& test,
                     UtilityKind kind) {
    ThetaTable mean;
    mean.theta = belief.posterior_mean();
    mean.class_prior = belief.class_prior();
    return evaluate_test_theta(mean, test, kind);
}

std::vector<double> per_class_f(const Matrix& confusion) {
    const std::size_t m = confusion.rows();
    std::vector<double> f(m, 0.0);
    for (std::size_t c = 0; c < m; ++c) {
        double tp = confusion(c, c);
        double fp = 0.0, fn = 0.0;
        for (std::size_t o = 0; o < m; ++o) {
            if (o == c) continue;
            fp += confusion(o, c);
            fn += confusion(c, o);
        }
        double precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
        double recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
        f[c] = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    return f;
}

double f_measure(const Matrix& confusion) {
    std::vector<double> f = per_class_f(confusion);
    double total = 0.0;
    for (double v : f) total += v;
    return f.empty() ? 0.0 : total / static_cast<double>(f.size());
}

void update_metrics(Metrics& metrics, std::size_t t, double cost, std::size_t truth,
                    std::size_t prediction, double train_utility, std::size_t num_classes) {
    if (metrics.confusion.rows() != num_classes) metrics.confusion = Matrix(num_classes, num_classes, 0.0);
    metrics.per_epoch.push_back({t, cost, truth == prediction, train_utility});
    metrics.cumulative_cost += cost;
    if (truth == prediction) ++metrics.correct_count;
    metrics.confusion(truth, prediction) += 1.0;
}

}  // namespace ufodt
