#include "ufodt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace ufodt {

namespace {

using ordered_json = nlohmann::ordered_json;

enum StreamId : std::uint64_t { kStream = 6 };
constexpr std::uint64_t kTestSetSeed = 0x7e57da7a5eed0001ULL;

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(s);
    while (std::getline(ss, cell, delim)) out.push_back(trim(cell));
    return out;
}

}  // namespace

std::string ConfigMap::get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

ConfigMap parse_config_text(const std::string& text, const std::string& origin) {
    ConfigMap map;
    map.origin = origin;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw DataError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw DataError(origin + ":" + std::to_string(lineno) + ": empty key");
        map.values[key] = value;
    }
    return map;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void apply_overrides(ConfigMap& config, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        auto eq = o.find('=');
        if (eq == std::string::npos) throw DataError("override '" + o + "' is not key=value");
        config.set(trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
    }
}

namespace {

const std::vector<std::string> kKnownKeys = {
    "stream.source",   "stream.schema",       "stream.T",          "stream.drift",
    "stream.test_fraction", "stream.test_size", "stream.led_noise", "stream.led_width",
    "stream.costs",    "learner.criterion",   "learner.hypothesis_count", "learner.enumerate",
    "learner.budget",  "drift.enabled",       "drift.gamma",       "ofs.enabled",
    "ofs.budget",      "ofs.epsilon",         "ofs.learning_rate", "continuous.enabled",
    "continuous.mode", "continuous.thresholds", "continuous.eta",  "continuous.warmup",
    "prior.lambda",    "prior.kappa",         "seeds",             "eval.every",
    "output.dir",      "output.save_belief",  "parallelism",       "utility"};

struct Reader {
    const ConfigMap& map;
    std::vector<std::string>& errors;

    bool parse_bool(const std::string& key, bool fallback) {
        std::string v = map.get(key, fallback ? "true" : "false");
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        errors.push_back(key + ": expected true/false, got '" + v + "'");
        return fallback;
    }
    double parse_double(const std::string& key, double fallback) {
        std::string v = map.get(key, "");
        if (v.empty()) return fallback;
        try {
            std::size_t pos;
            double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return d;
        } catch (...) {
            errors.push_back(key + ": expected a number, got '" + v + "'");
            return fallback;
        }
    }
    std::size_t parse_size(const std::string& key, std::size_t fallback) {
        double d = parse_double(key, static_cast<double>(fallback));
        if (d < 0 || d != std::floor(d)) {
            errors.push_back(key + ": expected a nonnegative integer");
            return fallback;
        }
        return static_cast<std::size_t>(d);
    }
};

}  // namespace

ValidationResult validate_config(const ConfigMap& map) {
    ValidationResult result;
    auto& errors = result.errors;
    for (const auto& [key, value] : map.values)
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
            errors.push_back(key + ": unknown key");

    Reader r{map, errors};
    ExperimentConfig cfg;

    cfg.source = map.get("stream.source", "");
    if (cfg.source.empty()) errors.push_back("stream.source: required");
    const bool generator = cfg.source == "stagger" || cfg.source == "led";
    if (!generator && !cfg.source.empty() && !std::filesystem::exists(cfg.source))
        errors.push_back("stream.source: file not found: " + cfg.source);

    cfg.schema = map.get("stream.schema", "auto");
    cfg.epochs = r.parse_size("stream.T", generator ? 180 : 0);
    if (generator && cfg.epochs == 0) errors.push_back("stream.T: must be positive for generators");
    for (const auto& d : split(map.get("stream.drift", ""), ','))
        if (!d.empty()) cfg.drift_points.push_back(static_cast<std::size_t>(std::stoul(d)));
    if (!std::is_sorted(cfg.drift_points.begin(), cfg.drift_points.end()) ||
        std::adjacent_find(cfg.drift_points.begin(), cfg.drift_points.end()) !=
            cfg.drift_points.end())
        errors.push_back("stream.drift: drift points must be strictly increasing");
    cfg.test_fraction = r.parse_double("stream.test_fraction", 0.3);
    if (cfg.test_fraction < 0.0 || cfg.test_fraction >= 1.0)
        errors.push_back("stream.test_fraction: must be in [0,1)");
    cfg.test_size = r.parse_size("stream.test_size", 200);
    cfg.led_noise = r.parse_double("stream.led_noise", 0.1);
    cfg.led_width = r.parse_size("stream.led_width", 24);
    cfg.cost_path = map.get("stream.costs", "");
    if (!cfg.cost_path.empty() && !std::filesystem::exists(cfg.cost_path))
        errors.push_back("stream.costs: file not found: " + cfg.cost_path);

    std::string crit = map.get("learner.criterion", "EC2");
    if (auto c = criterion_from_string(crit))
        cfg.learner.criterion = *c;
    else
        errors.push_back("learner.criterion: unknown criterion '" + crit + "'");
    cfg.learner.hypothesis_count = r.parse_size("learner.hypothesis_count", 100);
    if (cfg.learner.hypothesis_count < 1)
        errors.push_back("learner.hypothesis_count: must be >= 1");
    cfg.learner.enumerate = r.parse_bool("learner.enumerate", false);
    double budget = r.parse_double("learner.budget", 0.0);
    if (budget < 0.0) errors.push_back("learner.budget: must be nonnegative");
    if (budget > 0.0) cfg.learner.budget = budget;

    bool drift_on = r.parse_bool("drift.enabled", false);
    double gamma = r.parse_double("drift.gamma", 0.1);
    if (gamma < 0.0 || gamma > 1.0) errors.push_back("drift.gamma: must be in [0,1]");
    cfg.learner.drift.enabled = drift_on;
    cfg.learner.drift.gamma = gamma;

    if (r.parse_bool("ofs.enabled", false)) {
        OfsConfig ofs;
        ofs.budget_b = r.parse_size("ofs.budget", 1);
        if (ofs.budget_b < 1) errors.push_back("ofs.budget: must be >= 1");
        ofs.epsilon = r.parse_double("ofs.epsilon", 0.2);
        if (ofs.epsilon < 0.0 || ofs.epsilon > 1.0) errors.push_back("ofs.epsilon: must be in [0,1]");
        ofs.learning_rate = r.parse_double("ofs.learning_rate", 0.1);
        cfg.learner.feature_selection = ofs;
    }

    std::string cont = map.get("continuous.enabled", "auto");
    if (cont == "true" || cont == "1") cfg.continuous = true;
    else if (cont == "false" || cont == "0" || cont == "auto") cfg.continuous = false;
    else errors.push_back("continuous.enabled: expected auto/true/false");
    const bool cont_auto = cont == "auto";
    std::string mode = map.get("continuous.mode", "exp3");
    if (mode == "exp3") cfg.cont.mode = ContinuousConfig::Mode::Exp3;
    else if (mode == "exhaustive") cfg.cont.mode = ContinuousConfig::Mode::Exhaustive;
    else errors.push_back("continuous.mode: expected exp3 or exhaustive");
    cfg.cont.thresholds = r.parse_size("continuous.thresholds", 5);
    if (cfg.cont.thresholds < 1) errors.push_back("continuous.thresholds: must be >= 1");
    cfg.cont.eta = r.parse_double("continuous.eta", 0.01);
    if (!(cfg.cont.eta > 0.0)) errors.push_back("continuous.eta: must be positive");
    cfg.cont.warmup = r.parse_size("continuous.warmup", 30);

    cfg.prior_lambda = r.parse_double("prior.lambda", 0.0);
    if (cfg.prior_lambda < 0.0 || cfg.prior_lambda > 1.0)
        errors.push_back("prior.lambda: must be in [0,1]");
    cfg.prior_kappa = r.parse_double("prior.kappa", 50.0);
    if (!(cfg.prior_kappa > 0.0)) errors.push_back("prior.kappa: must be positive");
    if (cfg.prior_lambda > 0.0 && !generator)
        errors.push_back("prior.lambda: informative priors need a generator source");

    for (const auto& s : split(map.get("seeds", "1"), ',')) {
        if (s.empty()) continue;
        try {
            cfg.seeds.push_back(std::stoull(s));
        } catch (...) {
            errors.push_back("seeds: bad seed '" + s + "'");
        }
    }
    if (cfg.seeds.empty()) errors.push_back("seeds: at least one seed required");

    cfg.eval_every = r.parse_size("eval.every", 1);
    if (cfg.eval_every < 1) errors.push_back("eval.every: must be >= 1");
    cfg.output_dir = map.get("output.dir", "results");
    cfg.save_belief = r.parse_bool("output.save_belief", false);
    cfg.parallelism = std::max<std::size_t>(1, r.parse_size("parallelism", 1));
    cfg.utility_override = map.get("utility", "auto");
    if (cfg.utility_override != "auto" && cfg.utility_override != "accuracy" &&
        cfg.utility_override != "fmeasure")
        errors.push_back("utility: expected auto/accuracy/fmeasure");

    // auto mode resolves to continuous when the dataset has real columns;
    // generators are binary
    if (cont_auto && !generator && std::filesystem::exists(cfg.source)) {
        try {
            Dataset probe = load_dataset(cfg.source, cfg.schema);
            cfg.continuous = probe.has_real;
        } catch (const std::exception& e) {
            errors.push_back(std::string("stream.source: ") + e.what());
        }
    }

    if (errors.empty()) result.config = cfg;
    return result;
}

std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return {mean, sd / std::sqrt(static_cast<double>(xs.size()))};
}

namespace {

struct PreparedData {
    // dataset sources keep the loaded set; generators synthesize per seed
    std::optional<Dataset> dataset;
    std::size_t n = 0;
    std::size_t m = 0;
    UtilityKind utility = UtilityKind::Accuracy;
    std::vector<std::vector<DataPoint>> stagger_tests;  // per concept
    std::vector<DataPoint> fixed_test;                  // led / dataset split later
    std::optional<ThetaTable> theta_star;               // for informative priors
};

UtilityKind resolve_utility(const ExperimentConfig& cfg, const std::vector<DataPoint>& labels) {
    if (cfg.utility_override == "accuracy") return UtilityKind::Accuracy;
    if (cfg.utility_override == "fmeasure") return UtilityKind::MacroF;
    return choose_utility_kind(labels);
}

ThetaTable empirical_theta(const std::vector<DataPoint>& points, std::size_t n, std::size_t m) {
    Matrix ones(n, m, 1.0), counts(n, m, 2.0);  // Beta(1,1)-smoothed frequencies
    std::vector<double> labels(m, 1.0);
    for (const auto& p : points) {
        labels[p.label] += 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            counts(i, p.label) += 1.0;
            if (p.features[i] >= 0.5) ones(i, p.label) += 1.0;
        }
    }
    ThetaTable t;
    t.theta = Matrix(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) t.theta(i, j) = ones(i, j) / counts(i, j);
    double total = 0.0;
    for (double c : labels) total += c;
    t.class_prior.resize(m);
    for (std::size_t j = 0; j < m; ++j) t.class_prior[j] = labels[j] / total;
    return t;
}

PreparedData prepare(const ExperimentConfig& cfg) {
    PreparedData data;
    if (cfg.source == "stagger") {
        data.n = 9;
        data.m = 2;
        for (std::size_t c = 0; c < 3; ++c) {
            Rng rng = seeded_rng(kTestSetSeed, c);
            data.stagger_tests.push_back(stagger_concept_sample(c, cfg.test_size, rng));
        }
        Rng probe = seeded_rng(kTestSetSeed, 99);
        auto sample = stagger_stream(cfg.epochs, cfg.drift_points, probe);
        data.utility = resolve_utility(cfg, sample);
        if (cfg.prior_lambda > 0.0) {
            Rng star = seeded_rng(kTestSetSeed, 7);
            data.theta_star = empirical_theta(stagger_concept_sample(0, 100000, star), 9, 2);
        }
    } else if (cfg.source == "led") {
        data.n = cfg.led_width;
        data.m = 10;
        Rng rng = seeded_rng(kTestSetSeed, 1);
        data.fixed_test = led_stream(cfg.test_size, cfg.led_noise, cfg.led_width, rng);
        data.utility = resolve_utility(cfg, data.fixed_test);
        if (cfg.prior_lambda > 0.0) data.theta_star = led_true_theta(cfg.led_noise, cfg.led_width);
    } else {
        data.dataset = load_dataset(cfg.source, cfg.schema);
        if (data.dataset->points.empty()) throw DataError("stream.source: dataset has no rows");
        data.n = data.dataset->features.size();
        data.m = data.dataset->num_classes;
        data.utility = resolve_utility(cfg, data.dataset->points);
    }
    return data;
}

struct SeedOutput {
    std::vector<ResultLine> lines;
    SeedSummary summary;
};

std::string to_json_line(const ResultLine& line) {
    ordered_json j;
    j["seed"] = line.seed;
    j["t"] = line.t;
    j["cost"] = line.cost;
    j["correct"] = line.correct;
    j["train_utility"] = line.train_utility;
    j["test_utility"] = line.test_utility;
    j["stop_reason"] = line.stop_reason;
    j["queries"] = line.queries;
    return j.dump();
}

SeedOutput run_one_seed(const ExperimentConfig& cfg, const PreparedData& data,
                        std::uint64_t seed, std::ostream* live_sink = nullptr) {
    LearnerConfig lcfg = cfg.learner;
    lcfg.seed = seed;
    if (lcfg.drift.enabled)
        lcfg.drift = DriftConfig::uniform(data.n, data.m, lcfg.drift.gamma);

    // per-replicate stream
    std::vector<DataPoint> stream;
    std::vector<DataPoint> test = data.fixed_test;
    Rng stream_rng = seeded_rng(seed, kStream);
    if (cfg.source == "stagger") {
        stream = stagger_stream(cfg.epochs, cfg.drift_points, stream_rng);
    } else if (cfg.source == "led") {
        stream = led_stream(cfg.epochs, cfg.led_noise, cfg.led_width, stream_rng);
    } else {
        std::vector<DataPoint> shuffled = data.dataset->points;
        std::shuffle(shuffled.begin(), shuffled.end(), stream_rng);
        std::size_t test_count =
            static_cast<std::size_t>(std::floor(cfg.test_fraction * shuffled.size()));
        test.assign(shuffled.end() - test_count, shuffled.end());
        shuffled.resize(shuffled.size() - test_count);
        if (cfg.epochs > 0 && cfg.epochs < shuffled.size()) shuffled.resize(cfg.epochs);
        stream = std::move(shuffled);
    }

    CostModel costs = cfg.cost_path.empty() ? CostModel::uniform(data.n)
                                            : load_cost_file(cfg.cost_path, data.n);

    SeedOutput out;
    out.summary.seed = seed;
    double last_test = 0.0;
    double distinct_sum = 0.0;
    auto note = [&](const EpochRecord& rec, double test_utility) {
        ResultLine line;
        line.seed = seed;
        line.t = rec.t;
        line.cost = rec.cost;
        line.correct = rec.correct;
        line.train_utility = rec.train_utility;
        line.test_utility = test_utility;
        line.stop_reason = to_string(rec.stop_reason);
        line.queries = rec.queries;
        out.lines.push_back(line);
        out.summary.total_cost += rec.cost;
        distinct_sum += static_cast<double>(rec.distinct_hypotheses);
        last_test = test_utility;
        if (live_sink) *live_sink << to_json_line(line) << "\n" << std::flush;
    };

    if (cfg.continuous) {
        ContinuousEpochCallback cb = [&](const EpochRecord& rec, const ContinuousState& state) {
            double tu = last_test;
            if (rec.t % cfg.eval_every == 0 && !test.empty())
                tu = continuous_test_utility(state, test, data.utility);
            note(rec, tu);
        };
        run_online_continuous(lcfg, cfg.cont, stream, data.m, costs, cb);
    } else {
        BeliefState initial = data.theta_star && cfg.prior_lambda > 0.0
                                  ? interpolate_prior(*data.theta_star, cfg.prior_lambda,
                                                      cfg.prior_kappa)
                                  : BeliefState::uniform(data.n, data.m);
        EpochCallback cb = [&](const EpochRecord& rec, const BeliefState& belief) {
            double tu = last_test;
            if (rec.t % cfg.eval_every == 0) {
                if (!data.stagger_tests.empty()) {
                    std::size_t c = stagger_concept_at(rec.t, cfg.drift_points);
                    tu = evaluate_test(belief, data.stagger_tests[c], data.utility);
                } else if (!test.empty()) {
                    tu = evaluate_test(belief, test, data.utility);
                }
            }
            note(rec, tu);
        };
        OnlineResult res = run_online(lcfg, stream, initial, costs, cb);
        if (cfg.save_belief) {
            std::filesystem::create_directories(cfg.output_dir);
            save_belief(res.belief,
                        cfg.output_dir + "/belief_seed" + std::to_string(seed) + ".json");
        }
    }
    out.summary.final_test_utility = last_test;
    out.summary.mean_distinct_hypotheses =
        out.lines.empty() ? 0.0 : distinct_sum / static_cast<double>(out.lines.size());
    return out;
}

// Runs every seed; when a live sink is given, finished seeds flush their
// lines in seed order so partial results survive a mid-run failure.
ExperimentResult run_all_seeds(const ExperimentConfig& cfg, std::ostream* sink) {
    PreparedData data = prepare(cfg);
    std::vector<SeedOutput> outputs(cfg.seeds.size());

    if (cfg.parallelism <= 1 || cfg.seeds.size() <= 1) {
        for (std::size_t s = 0; s < cfg.seeds.size(); ++s)
            outputs[s] = run_one_seed(cfg, data, cfg.seeds[s], sink);
    } else {
        std::vector<std::thread> workers;
        std::mutex mu;
        std::vector<char> done(cfg.seeds.size(), 0);
        std::size_t next_flush = 0;
        std::exception_ptr first_error;
        std::size_t pool = std::min(cfg.parallelism, cfg.seeds.size());
        for (std::size_t w = 0; w < pool; ++w) {
            workers.emplace_back([&, w]() {
                for (std::size_t s = w; s < cfg.seeds.size(); s += pool) {
                    SeedOutput o;
                    try {
                        o = run_one_seed(cfg, data, cfg.seeds[s]);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(mu);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                    std::lock_guard<std::mutex> lock(mu);
                    outputs[s] = std::move(o);
                    done[s] = 1;
                    while (next_flush < cfg.seeds.size() && done[next_flush]) {
                        if (sink) {
                            for (const auto& line : outputs[next_flush].lines)
                                *sink << to_json_line(line) << "\n";
                            sink->flush();
                        }
                        ++next_flush;
                    }
                }
            });
        }
        for (auto& t : workers) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    ExperimentResult result;
    result.features = data.n;
    result.classes = data.m;
    result.utility_kind = data.utility == UtilityKind::Accuracy ? "accuracy" : "macro_f";
    for (auto& o : outputs) {
        result.lines.insert(result.lines.end(), o.lines.begin(), o.lines.end());
        result.per_seed.push_back(o.summary);
    }
    return result;
}

}  // namespace

ExperimentResult run_replicates(const ExperimentConfig& cfg) { return run_all_seeds(cfg, nullptr); }

namespace {

void write_summary(const ExperimentResult& result, const ExperimentConfig& config) {
    const std::string summary_path = config.output_dir + "/summary.json";
    std::vector<double> costs, finals, distinct;
    ordered_json seeds = ordered_json::array();
    for (const auto& s : result.per_seed) {
        costs.push_back(s.total_cost);
        finals.push_back(s.final_test_utility);
        distinct.push_back(s.mean_distinct_hypotheses);
        ordered_json js;
        js["seed"] = s.seed;
        js["total_cost"] = s.total_cost;
        js["final_test_utility"] = s.final_test_utility;
        js["mean_distinct_hypotheses"] = s.mean_distinct_hypotheses;
        seeds.push_back(js);
    }
    auto [cost_mean, cost_se] = mean_stderr(costs);
    auto [final_mean, final_se] = mean_stderr(finals);
    auto [distinct_mean, distinct_se] = mean_stderr(distinct);

    ordered_json summary;
    summary["features"] = result.features;
    summary["classes"] = result.classes;
    summary["utility"] = result.utility_kind;
    summary["records"] = result.lines.size();
    summary["total_cost"] = {{"mean", cost_mean}, {"stderr", cost_se}};
    summary["final_test_utility"] = {{"mean", final_mean}, {"stderr", final_se}};
    summary["mean_distinct_hypotheses"] = {{"mean", distinct_mean}, {"stderr", distinct_se}};
    summary["per_seed"] = seeds;

    std::ofstream sum(summary_path, std::ios::binary);
    if (!sum) throw DataError("emit_results: cannot write " + summary_path);
    sum << summary.dump(2) << "\n";
}

}  // namespace

void emit_results(const ExperimentResult& result, const ExperimentConfig& config) {
    std::filesystem::create_directories(config.output_dir);
    const std::string records_path = config.output_dir + "/records.jsonl";
    std::ofstream records(records_path, std::ios::binary);
    if (!records) throw DataError("emit_results: cannot write " + records_path);
    for (const auto& line : result.lines) records << to_json_line(line) << "\n";
    records.close();
    write_summary(result, config);
}

int run_experiment(const ExperimentConfig& config, std::string* error) {
    try {
        std::filesystem::create_directories(config.output_dir);
        const std::string records_path = config.output_dir + "/records.jsonl";
        std::ofstream records(records_path, std::ios::binary);
        if (!records) throw DataError("run_experiment: cannot write " + records_path);
        // epoch lines stream to disk as they are produced, so a mid-run data
        // error leaves the completed prefix behind
        ExperimentResult result = run_all_seeds(config, &records);
        records.close();
        write_summary(result, config);
        return 0;
    } catch (const std::exception& e) {
        if (error) *error = e.what();
        return 1;
    }
}

void save_belief(const BeliefState& belief, const std::string& path) {
    ordered_json j;
    auto matrix_to_json = [](const Matrix& m) {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            ordered_json row = ordered_json::array();
            for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
            rows.push_back(row);
        }
        return rows;
    };
    j["alpha"] = matrix_to_json(belief.alpha);
    j["beta"] = matrix_to_json(belief.beta);
    j["class_counts"] = belief.class_counts;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("save_belief: cannot write " + path);
    out << j.dump(2) << "\n";
}

BeliefState load_belief(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_belief: cannot open " + path);
    ordered_json j = ordered_json::parse(in);
    auto matrix_from_json = [](const ordered_json& rows) {
        Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t c = 0; c < rows[i].size(); ++c) m(i, c) = rows[i][c].get<double>();
        return m;
    };
    BeliefState b;
    b.alpha = matrix_from_json(j.at("alpha"));
    b.beta = matrix_from_json(j.at("beta"));
    b.class_counts = j.at("class_counts").get<std::vector<double>>();
    b.check_invariants();
    return b;
}

}  // namespace ufodt
