// Experiment runner: wires streams to learners, manages seeds and
// replicates, and writes line-delimited records plus a summary for
// plotting and regression tests.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ufodt/experiment.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            bool validate_only) {
    ufodt::ConfigMap map;
    try {
        map = ufodt::parse_config_file(config_path);
        ufodt::apply_overrides(map, overrides);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    ufodt::ValidationResult validated = ufodt::validate_config(map);
    if (!validated.ok()) {
        for (const auto& err : validated.errors) std::cerr << "config error: " << err << "\n";
        return 1;
    }
    if (validate_only) {
        std::cout << "config OK: " << config_path << "\n";
        return 0;
    }
    std::string error;
    int rc = ufodt::run_experiment(*validated.config, &error);
    if (rc != 0) {
        std::cerr << "error: " << error << "\n";
        return rc;
    }
    std::cout << "results written to " << validated.config->output_dir << "\n";
    return 0;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<ufodt::DataPoint>& points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ufodt::DataError("cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i) out << header[i] << ",";
    out << "label\n";
    for (const auto& p : points) {
        for (double f : p.features) out << f << ",";
        out << p.label << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cost-sensitive online decision-tree learning"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;

    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--set", overrides, "override a config key (key=value)");

    auto* validate = app.add_subcommand("validate", "validate a config without running");
    validate->add_option("config", config_path, "config file")->required();
    validate->add_option("--set", overrides, "override a config key (key=value)");

    std::size_t gen_T = 180;
    std::string drift = "60,120";
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* stagger = app.add_subcommand("gen-stagger", "write a synthetic drift stream as CSV");
    stagger->add_option("--T", gen_T, "stream length");
    stagger->add_option("--drift", drift, "comma-separated drift epochs");
    stagger->add_option("--seed", gen_seed, "rng seed");
    stagger->add_option("--out", gen_out, "output CSV path")->required();

    double led_noise = 0.1;
    std::size_t led_width = 24;
    auto* led = app.add_subcommand("gen-led", "write a noisy seven-segment stream as CSV");
    led->add_option("--T", gen_T, "stream length");
    led->add_option("--noise", led_noise, "segment flip probability");
    led->add_option("--width", led_width, "total feature count (>= 7)");
    led->add_option("--seed", gen_seed, "rng seed");
    led->add_option("--out", gen_out, "output CSV path")->required();

    std::string belief_path, test_path, schema = "auto", utility = "auto";
    auto* eval = app.add_subcommand("eval", "evaluate a saved belief on a test CSV");
    eval->add_option("--belief", belief_path, "belief JSON written by run")->required();
    eval->add_option("--test", test_path, "test CSV")->required();
    eval->add_option("--schema", schema, "test schema (auto or type list)");
    eval->add_option("--utility", utility, "auto | accuracy | fmeasure");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, overrides, false);
        if (validate->parsed()) return cmd_run(config_path, overrides, true);
        if (stagger->parsed()) {
            std::vector<std::size_t> drift_points;
            std::stringstream ss(drift);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) drift_points.push_back(std::stoul(tok));
            ufodt::Rng rng = ufodt::seeded_rng(gen_seed);
            write_csv(gen_out, ufodt::stagger_feature_names(),
                      ufodt::stagger_stream(gen_T, drift_points, rng));
            std::cout << "wrote " << gen_out << "\n";
            return 0;
        }
        if (led->parsed()) {
            ufodt::Rng rng = ufodt::seeded_rng(gen_seed);
            std::vector<std::string> header;
            for (std::size_t i = 0; i < led_width; ++i) header.push_back("f" + std::to_string(i));
            write_csv(gen_out, header, ufodt::led_stream(gen_T, led_noise, led_width, rng));
            std::cout << "wrote " << gen_out << "\n";
            return 0;
        }
        if (eval->parsed()) {
            ufodt::BeliefState belief = ufodt::load_belief(belief_path);
            ufodt::Dataset test = ufodt::load_dataset(test_path, schema);
            ufodt::UtilityKind kind;
            if (utility == "accuracy") kind = ufodt::UtilityKind::Accuracy;
            else if (utility == "fmeasure") kind = ufodt::UtilityKind::MacroF;
            else kind = ufodt::choose_utility_kind(test.points);
            double u = ufodt::evaluate_test(belief, test.points, kind);
            std::cout << "test_utility "
                      << (kind == ufodt::UtilityKind::Accuracy ? "(accuracy) " : "(macro_f) ") << u
                      << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
