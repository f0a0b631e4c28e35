#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ufodt/learner.hpp"

using namespace ufodt;

namespace {

// complementary class patterns: every feature separates the classes
std::vector<DataPoint> separable_stream(std::size_t length, Rng& rng) {
    std::vector<DataPoint> stream;
    std::uniform_int_distribution<int> coin(0, 1);
    for (std::size_t t = 0; t < length; ++t) {
        DataPoint p;
        p.label = coin(rng);
        p.features = p.label == 0 ? std::vector<double>{1, 0, 1} : std::vector<double>{0, 1, 0};
        stream.push_back(p);
    }
    return stream;
}

}  // namespace

TEST_SUITE("learner") {

TEST_CASE("empty stream returns the initial belief and no records") {
    LearnerConfig cfg;
    BeliefState b = BeliefState::uniform(3, 2);
    b.alpha(1, 1) = 4.0;
    OnlineResult r = run_online(cfg, {}, b, CostModel::uniform(3));
    CHECK(r.records.empty());
    CHECK(r.belief.alpha.data() == b.alpha.data());
}

TEST_CASE("separable stream reaches perfect trailing accuracy") {
    LearnerConfig cfg;
    cfg.criterion = Criterion::EC2;
    cfg.enumerate = true;
    cfg.seed = 42;
    Rng rng = seeded_rng(1000);
    std::vector<DataPoint> stream = separable_stream(500, rng);
    OnlineResult r = run_online(cfg, stream, BeliefState::uniform(3, 2), CostModel::uniform(3));
    REQUIRE(r.records.size() == 500);
    std::size_t correct = 0;
    for (std::size_t t = 400; t < 500; ++t)
        if (r.records[t].correct) ++correct;
    CHECK(correct == 100);
}

TEST_CASE("identical config and seed reproduce identical records") {
    LearnerConfig cfg;
    cfg.criterion = Criterion::IG;
    cfg.hypothesis_count = 25;
    cfg.seed = 7;
    cfg.drift = DriftConfig::uniform(3, 2, 0.1);
    Rng rng = seeded_rng(2000);
    std::vector<DataPoint> stream = separable_stream(60, rng);
    OnlineResult a = run_online(cfg, stream, BeliefState::uniform(3, 2), CostModel::uniform(3));
    OnlineResult b = run_online(cfg, stream, BeliefState::uniform(3, 2), CostModel::uniform(3));
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t t = 0; t < a.records.size(); ++t) {
        CHECK(a.records[t].prediction == b.records[t].prediction);
        CHECK(a.records[t].cost == b.records[t].cost);
        CHECK(a.records[t].queries == b.records[t].queries);
        CHECK(a.records[t].stop_reason == b.records[t].stop_reason);
    }
    CHECK(a.belief.alpha.data() == b.belief.alpha.data());
}

TEST_CASE("ofs_select: epsilon=0 takes the top-B columns deterministically") {
    OfsState s = OfsState::init(3, 1, {2, 0.0, 0.1});
    s.weights(0, 0) = 3.0;
    s.weights(0, 1) = 1.0;
    s.weights(0, 2) = 2.0;
    Rng rng = seeded_rng(1);
    std::vector<std::size_t> sel = ofs_select(s, rng);
    CHECK(sel == std::vector<std::size_t>{0, 2});
}

TEST_CASE("ofs_select: epsilon=1 exposes each feature with frequency B/n") {
    const std::size_t n = 5, b = 2;
    OfsState s = OfsState::init(n, 2, {b, 1.0, 0.1});
    Rng rng = seeded_rng(2);
    std::vector<int> counts(n, 0);
    const int trials = 100000;
    for (int i = 0; i < trials; ++i)
        for (std::size_t f : ofs_select(s, rng)) ++counts[f];
    for (std::size_t f = 0; f < n; ++f)
        CHECK(static_cast<double>(counts[f]) / trials ==
              doctest::Approx(static_cast<double>(b) / n).epsilon(0.06));
}

TEST_CASE("ofs_select: epsilon=0.5 mixture frequency for the top feature") {
    OfsState s = OfsState::init(2, 1, {1, 0.5, 0.1});
    s.weights(0, 0) = 2.0;
    s.weights(0, 1) = 1.0;
    Rng rng = seeded_rng(3);
    int hits = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) {
        auto sel = ofs_select(s, rng);
        if (sel.size() == 1 && sel[0] == 0) ++hits;
    }
    CHECK(static_cast<double>(hits) / trials == doctest::Approx(0.75).epsilon(0.015));
}

TEST_CASE("ofs_estimate matches the importance-weighting formula") {
    CHECK(ofs_estimate(1.0, false, true, 2, 4, 0.5).value == 0.0);
    CHECK(ofs_estimate(1.0, true, false, 2, 4, 0.5).value == 0.0);
    CHECK(ofs_estimate(1.0, true, true, 2, 4, 0.5).value ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(ofs_estimate(1.0, true, true, 4, 4, 1.0).value == doctest::Approx(1.0).epsilon(1e-12));
    OfsEstimate degenerate = ofs_estimate(1.0, false, false, 2, 4, 0.0);
    CHECK(degenerate.value == 0.0);
    CHECK(degenerate.degenerate);
}

TEST_CASE("ofs_estimate is unbiased under the harness selection model") {
    // top-B feature, queried whenever exposed
    struct Setting {
        std::size_t b, n;
        double eps;
    };
    for (Setting s : {Setting{2, 4, 0.5}, Setting{1, 8, 0.2}, Setting{3, 6, 0.8}}) {
        Rng rng = seeded_rng(s.b * 100 + s.n);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double x = 1.0;
        double sum = 0.0, sumsq = 0.0;
        const int trials = 100000;
        for (int i = 0; i < trials; ++i) {
            bool selected;
            if (unif(rng) < 1.0 - s.eps) {
                selected = true;  // feature sits in the top-B
            } else {
                // uniform B-subset membership
                selected = unif(rng) < static_cast<double>(s.b) / static_cast<double>(s.n);
            }
            bool queried = selected;
            double est = ofs_estimate(x, queried, selected, s.b, s.n, s.eps).value;
            sum += est;
            sumsq += est * est;
        }
        double mean = sum / trials;
        double var = sumsq / trials - mean * mean;
        double se = std::sqrt(var / trials);
        CHECK(std::abs(mean - x) <= 3.0 * se);
    }
}

TEST_CASE("ofs_update: perceptron step only on mistakes") {
    OfsState s = OfsState::init(2, 2, {1, 0.2, 0.1});
    std::vector<double> est{4.0 / 3.0, 0.0};
    ofs_update(s, est, 0, 0);
    CHECK(s.weights(0, 0) == 0.0);

    ofs_update(s, est, 0, 1);
    CHECK(s.weights(0, 0) == doctest::Approx(0.4 / 3.0).epsilon(1e-12));
    CHECK(s.weights(1, 0) == doctest::Approx(-0.4 / 3.0).epsilon(1e-12));
    CHECK(s.weights(0, 1) == 0.0);
}

TEST_CASE("ofs_update keeps weights finite under repeated bounded mistakes") {
    OfsState s = OfsState::init(3, 2, {2, 0.2, 0.1});
    std::vector<double> est{2.0, 0.5, 1.0};
    for (int i = 0; i < 10000; ++i) ofs_update(s, est, i % 2, (i + 1) % 2);
    for (double w : s.weights.data()) CHECK(std::isfinite(w));
}

TEST_CASE("with feature selection the session never queries outside the subset") {
    LearnerConfig cfg;
    cfg.criterion = Criterion::EC2;
    cfg.hypothesis_count = 20;
    cfg.seed = 11;
    cfg.feature_selection = OfsConfig{2, 0.3, 0.1};
    const std::size_t n = 6;
    Rng rng = seeded_rng(3000);
    std::vector<DataPoint> stream;
    std::uniform_int_distribution<int> coin(0, 1);
    for (int t = 0; t < 300; ++t) {
        DataPoint p;
        p.label = coin(rng);
        p.features.resize(n);
        for (auto& f : p.features) f = coin(rng);
        p.features[0] = p.label;  // one informative feature
        stream.push_back(p);
    }

    OnlineResult r = run_online(cfg, stream, BeliefState::uniform(n, 2), CostModel::uniform(n));
    for (const auto& rec : r.records) {
        CHECK(rec.ofs_selected.size() == cfg.feature_selection->budget_b);
        for (std::size_t f : rec.queried_features)
            CHECK(std::find(rec.ofs_selected.begin(), rec.ofs_selected.end(), f) !=
                  rec.ofs_selected.end());
    }
}

}  // TEST_SUITE
