#include "ufodt/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ufodt {

namespace {

enum StreamId : std::uint64_t { kTheta = 1, kHypotheses = 2, kSelect = 3, kOfs = 5 };

double utility_of(const std::optional<Matrix>& util, std::size_t truth, std::size_t pred) {
    if (util) return (*util)(truth, pred);
    return truth == pred ? 1.0 : 0.0;
}

}  // namespace

OfsState OfsState::init(std::size_t n, std::size_t m, const OfsConfig& cfg) {
    OfsState s;
    s.weights = Matrix(m, n, 0.0);
    s.epsilon = cfg.epsilon;
    s.budget_b = std::min(cfg.budget_b, n);
    s.learning_rate = cfg.learning_rate;
    return s;
}

std::vector<std::size_t> ofs_select(const OfsState& state, Rng& rng) {
    const std::size_t n = state.weights.cols();
    const std::size_t b = std::min(state.budget_b, n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::size_t> chosen;
    if (unif(rng) < 1.0 - state.epsilon) {
        // top-B by column norm, ties to the lowest index
        std::vector<double> norm(n, 0.0);
        for (std::size_t j = 0; j < state.weights.rows(); ++j)
            for (std::size_t i = 0; i < n; ++i) norm[i] += state.weights(j, i) * state.weights(j, i);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t c) { return norm[a] > norm[c]; });
        chosen.assign(order.begin(), order.begin() + b);
    } else {
        // uniform random B-subset (partial Fisher-Yates)
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        for (std::size_t i = 0; i < b; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, n - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        chosen.assign(pool.begin(), pool.begin() + b);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

OfsEstimate ofs_estimate(double x_i, bool queried, bool selected, std::size_t budget_b,
                         std::size_t n, double epsilon) {
    if (budget_b > n) throw std::invalid_argument("ofs_estimate: budget exceeds feature count");
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("ofs_estimate: epsilon outside [0,1]");
    const double indicator = (queried && selected) ? 1.0 : 0.0;
    const double denom =
        (static_cast<double>(budget_b) / static_cast<double>(n)) * epsilon + indicator * (1.0 - epsilon);
    if (!(denom > 0.0)) return {0.0, true};
    return {indicator * x_i / denom, false};
}

void ofs_update(OfsState& state, const std::vector<double>& estimates, std::size_t true_label,
                std::size_t predicted_label) {
    if (estimates.size() != state.weights.cols())
        throw std::invalid_argument("ofs_update: estimate length mismatch");
    if (true_label == predicted_label) return;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        state.weights(true_label, i) += state.learning_rate * estimates[i];
        state.weights(predicted_label, i) -= state.learning_rate * estimates[i];
    }
}

OnlineResult run_online(const LearnerConfig& config, const std::vector<DataPoint>& stream,
                        BeliefState initial_belief, const CostModel& costs,
                        const EpochCallback& on_epoch) {
    const std::size_t n = initial_belief.n();
    const std::size_t m = initial_belief.m();
    if (config.hypothesis_count < 1)
        throw std::invalid_argument("run_online: hypothesis_count must be >= 1");

    Rng theta_rng = seeded_rng(config.seed, kTheta);
    Rng hyp_rng = seeded_rng(config.seed, kHypotheses);
    Rng select_rng = seeded_rng(config.seed, kSelect);
    Rng ofs_rng = seeded_rng(config.seed, kOfs);

    OnlineResult out;
    out.belief = std::move(initial_belief);
    if (config.feature_selection) out.ofs = OfsState::init(n, m, *config.feature_selection);

    SessionOptions opts;
    opts.criterion = config.criterion;
    opts.hypothesis_count = config.hypothesis_count;
    opts.enumerate = config.enumerate;
    opts.budget = config.budget;

    for (std::size_t t = 0; t < stream.size(); ++t) {
        const DataPoint& point = stream[t];
        if (point.features.size() != n || point.label >= m)
            throw DataError("run_online: stream point does not match belief dimensions");

        ThetaTable theta = sample_theta(out.belief, theta_rng);

        if (out.ofs) {
            out.ofs->selected = ofs_select(*out.ofs, ofs_rng);
            std::vector<char> mask(n, 0);
            for (std::size_t i : out.ofs->selected) mask[i] = 1;
            opts.allowed = mask;
        }

        PointOracle oracle = [&point](std::size_t i) {
            if (i >= point.features.size()) throw DataError("oracle: feature index out of range");
            return point.features[i] >= 0.5 ? 1 : 0;
        };
        SessionResult session = run_session(theta, oracle, costs, opts, hyp_rng, select_rng);

        // label revealed only now
        session.utility = utility_of(opts.utility, point.label, session.prediction);
        out.belief = update_posterior(out.belief, session.observations, point.label, config.drift);

        if (out.ofs) {
            std::vector<double> estimates(n, 0.0);
            std::vector<char> selected(n, 0);
            for (std::size_t i : out.ofs->selected) selected[i] = 1;
            for (std::size_t i = 0; i < n; ++i) {
                bool queried = session.observations.contains(i);
                double x = 0.0;
                for (const auto& e : session.observations.entries)
                    if (e.feature == i) x = e.value;
                estimates[i] =
                    ofs_estimate(x, queried, selected[i] != 0, out.ofs->budget_b, n, out.ofs->epsilon)
                        .value;
            }
            ofs_update(*out.ofs, estimates, point.label, session.prediction);
        }

        EpochRecord rec;
        rec.t = t;
        rec.prediction = session.prediction;
        rec.truth = point.label;
        rec.cost = session.observations.total_cost;
        rec.correct = session.prediction == point.label;
        rec.train_utility = session.utility;
        rec.stop_reason = session.stop_reason;
        rec.queries = session.queries_made;
        rec.distinct_hypotheses = session.distinct_hypotheses;
        for (const auto& e : session.observations.entries) rec.queried_features.push_back(e.feature);
        if (out.ofs) rec.ofs_selected = out.ofs->selected;
        out.records.push_back(rec);
        if (on_epoch) on_epoch(rec, out.belief);
    }
    return out;
}

}  // namespace ufodt
