#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ufodt/continuous.hpp"
#include "ufodt/learner.hpp"

namespace ufodt {

// Flat key=value configuration with dotted section keys. '#' starts a
// comment; later assignments win.
struct ConfigMap {
    std::map<std::string, std::string> values;
    std::string origin;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    void set(const std::string& key, const std::string& value) { values[key] = value; }
};

ConfigMap parse_config_text(const std::string& text, const std::string& origin);
ConfigMap parse_config_file(const std::string& path);
// Each override is "key=value".
void apply_overrides(ConfigMap& config, const std::vector<std::string>& overrides);

struct ExperimentConfig {
    std::string source;  // "stagger", "led", or a dataset path
    std::string schema = "auto";
    std::size_t epochs = 180;          // stream length (0 = full dataset)
    std::vector<std::size_t> drift_points;
    double test_fraction = 0.3;
    std::size_t test_size = 200;
    double led_noise = 0.1;
    std::size_t led_width = 24;
    std::string cost_path;

    LearnerConfig learner;             // per-replicate seed filled at run time
    bool continuous = false;
    ContinuousConfig cont;

    double prior_lambda = 0.0;
    double prior_kappa = 50.0;

    std::vector<std::uint64_t> seeds;
    std::size_t eval_every = 1;
    std::string output_dir;
    bool save_belief = false;
    std::size_t parallelism = 1;
    std::string utility_override = "auto";  // auto | accuracy | fmeasure
};

// Returns the typed config or a list of messages naming each offending key.
struct ValidationResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};
ValidationResult validate_config(const ConfigMap& map);

struct ResultLine {
    std::uint64_t seed = 0;
    std::size_t t = 0;
    double cost = 0.0;
    bool correct = false;
    double train_utility = 0.0;
    double test_utility = 0.0;
    std::string stop_reason;
    std::size_t queries = 0;
};

struct SeedSummary {
    std::uint64_t seed = 0;
    double total_cost = 0.0;
    double final_test_utility = 0.0;
    double mean_distinct_hypotheses = 0.0;
};

struct ExperimentResult {
    std::vector<ResultLine> lines;      // seed-major, epoch order
    std::vector<SeedSummary> per_seed;
    std::size_t features = 0;
    std::size_t classes = 0;
    std::string utility_kind;
};

// Mean and standard error across seeds (stderr 0 for a single seed).
std::pair<double, double> mean_stderr(const std::vector<double>& xs);

// Runs every replicate and assembles the result in seed order. Pure in
// (config, seeds): identical inputs give identical results.
ExperimentResult run_replicates(const ExperimentConfig& config);

// records.jsonl (one fixed-field-order line per epoch) and summary.json
// under config.output_dir.
void emit_results(const ExperimentResult& result, const ExperimentConfig& config);

// Full pipeline: run, emit, return exit code (0 on success).
int run_experiment(const ExperimentConfig& config, std::string* error = nullptr);

// Belief serialization for the eval subcommand.
void save_belief(const BeliefState& belief, const std::string& path);
BeliefState load_belief(const std::string& path);

}  // namespace ufodt
