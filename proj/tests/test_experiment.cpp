#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ufodt/experiment.hpp"

using namespace ufodt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("ufodt_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ConfigMap stagger_config(const fs::path& out, const std::string& extra = "") {
    std::string text =
        "stream.source = stagger\n"
        "stream.T = 10\n"
        "stream.drift = 4,8\n"
        "stream.test_size = 20\n"
        "learner.criterion = EC2\n"
        "learner.hypothesis_count = 10\n"
        "drift.enabled = true\n"
        "seeds = 1,2\n"
        "output.dir = " + out.string() + "\n" + extra;
    return parse_config_text(text, "inline");
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config parser handles comments, blanks, and overrides") {
    ConfigMap map = parse_config_text("# comment\n\nseeds = 1, 2\nstream.T= 5\n", "inline");
    CHECK(map.get("seeds", "") == "1, 2");
    CHECK(map.get("stream.T", "") == "5");
    apply_overrides(map, {"stream.T=9", "drift.gamma=0.5"});
    CHECK(map.get("stream.T", "") == "9");
    CHECK(map.get("drift.gamma", "") == "0.5");
    CHECK_THROWS_AS(parse_config_text("not a pair\n", "inline"), DataError);
    CHECK_THROWS_AS(apply_overrides(map, {"nonsense"}), DataError);
}

TEST_CASE("validation names the offending key") {
    fs::path out = temp_dir("validate");
    ConfigMap map = stagger_config(out);
    map.set("learner.criterion", "BOGUS");
    map.set("mystery.knob", "3");
    ValidationResult v = validate_config(map);
    CHECK(!v.ok());
    bool names_criterion = false, names_unknown = false;
    for (const auto& e : v.errors) {
        if (e.find("learner.criterion") != std::string::npos) names_criterion = true;
        if (e.find("mystery.knob") != std::string::npos) names_unknown = true;
    }
    CHECK(names_criterion);
    CHECK(names_unknown);
}

TEST_CASE("validation rejects missing files and bad ranges") {
    fs::path out = temp_dir("validate2");
    ConfigMap map = stagger_config(out);
    map.set("stream.source", "/no/such/file.csv");
    ValidationResult v1 = validate_config(map);
    CHECK(!v1.ok());

    ConfigMap map2 = stagger_config(out);
    map2.set("drift.gamma", "1.5");
    ValidationResult v2 = validate_config(map2);
    REQUIRE(!v2.ok());
    CHECK(v2.errors[0].find("drift.gamma") != std::string::npos);

    ConfigMap map3 = stagger_config(out);
    map3.set("seeds", "");
    CHECK(!validate_config(map3).ok());
}

TEST_CASE("two seeds and ten epochs produce exactly twenty lines plus a summary") {
    fs::path out = temp_dir("accounting");
    ValidationResult v = validate_config(stagger_config(out));
    REQUIRE(v.ok());
    REQUIRE(run_experiment(*v.config) == 0);

    std::string records = slurp(out / "records.jsonl");
    std::size_t lines = 0;
    for (char c : records)
        if (c == '\n') ++lines;
    CHECK(lines == 20);
    CHECK(fs::exists(out / "summary.json"));
}

TEST_CASE("records carry the eight fixed fields in order") {
    fs::path out = temp_dir("fields");
    ValidationResult v = validate_config(stagger_config(out));
    REQUIRE(v.ok());
    REQUIRE(run_experiment(*v.config) == 0);
    std::ifstream in(out / "records.jsonl");
    std::string line;
    REQUIRE(std::getline(in, line));
    const char* fields[] = {"\"seed\"",          "\"t\"",           "\"cost\"",
                            "\"correct\"",       "\"train_utility\"", "\"test_utility\"",
                            "\"stop_reason\"",   "\"queries\""};
    std::size_t pos = 0;
    for (const char* f : fields) {
        std::size_t at = line.find(f, pos);
        REQUIRE(at != std::string::npos);
        pos = at;
    }
}

TEST_CASE("rerunning an identical config is byte-identical") {
    fs::path out1 = temp_dir("detA");
    fs::path out2 = temp_dir("detB");
    ConfigMap base = stagger_config(out1, "parallelism = 2\n");
    ValidationResult v1 = validate_config(base);
    REQUIRE(v1.ok());
    REQUIRE(run_experiment(*v1.config) == 0);

    base.set("output.dir", out2.string());
    ValidationResult v2 = validate_config(base);
    REQUIRE(v2.ok());
    REQUIRE(run_experiment(*v2.config) == 0);

    CHECK(slurp(out1 / "records.jsonl") == slurp(out2 / "records.jsonl"));
    CHECK(slurp(out1 / "summary.json") == slurp(out2 / "summary.json"));
}

TEST_CASE("per-line costs sum to the summary's per-seed totals") {
    fs::path out = temp_dir("crosscheck");
    ValidationResult v = validate_config(stagger_config(out));
    REQUIRE(v.ok());
    ExperimentResult result = run_replicates(*v.config);
    emit_results(result, *v.config);

    std::map<std::uint64_t, double> sums;
    for (const auto& line : result.lines) sums[line.seed] += line.cost;
    for (const auto& s : result.per_seed)
        CHECK(sums[s.seed] == doctest::Approx(s.total_cost).epsilon(1e-12));

    // and the emitted file agrees with the in-memory lines
    std::string records = slurp(out / "records.jsonl");
    double file_cost = 0.0;
    std::stringstream ss(records);
    std::string line;
    while (std::getline(ss, line)) {
        auto at = line.find("\"cost\":");
        REQUIRE(at != std::string::npos);
        file_cost += std::stod(line.substr(at + 7));
    }
    double total = 0.0;
    for (const auto& s : result.per_seed) total += s.total_cost;
    CHECK(file_cost == doctest::Approx(total).epsilon(1e-9));
}

TEST_CASE("empty record emission still writes both files") {
    fs::path out = temp_dir("empty");
    ExperimentResult result;
    ExperimentConfig cfg;
    cfg.output_dir = out.string();
    emit_results(result, cfg);
    CHECK(slurp(out / "records.jsonl").empty());
    CHECK(!slurp(out / "summary.json").empty());
}

TEST_CASE("belief round-trips through its JSON file") {
    fs::path out = temp_dir("belief");
    BeliefState b = BeliefState::uniform(3, 2);
    b.alpha(1, 0) = 4.5;
    b.class_counts = {3.0, 9.0};
    save_belief(b, (out / "b.json").string());
    BeliefState r = load_belief((out / "b.json").string());
    CHECK(r.alpha.data() == b.alpha.data());
    CHECK(r.beta.data() == b.beta.data());
    CHECK(r.class_counts == b.class_counts);
}

TEST_CASE("mean_stderr basics") {
    auto [m1, s1] = mean_stderr({5.0});
    CHECK(m1 == 5.0);
    CHECK(s1 == 0.0);
    auto [m2, s2] = mean_stderr({1.0, 3.0});
    CHECK(m2 == doctest::Approx(2.0));
    CHECK(s2 == doctest::Approx(1.0));
}

}  // TEST_SUITE
