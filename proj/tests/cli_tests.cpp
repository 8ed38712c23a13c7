#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "fairenc/harness.hpp"
#include "oracles.hpp"

#include "json.hpp"

using nlohmann::json;

namespace {

// FAIRENC_CLI_PATH is injected by the build so the suite exercises the real
// installed entry point rather than re-linked internals.
int run_cli(const std::string& args, const std::string& stdout_path,
            const std::string& stderr_path = "/dev/null") {
    std::string cmd = std::string(FAIRENC_CLI_PATH) + " " + args + " > " + stdout_path + " 2> " +
                      stderr_path;
    int status = std::system(cmd.c_str());
    return status == -1 ? -1 : WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string population_config_file() {
    return oracle::write_file("fe_cli_pop.json", R"({
      "data": {"population": {"groups": [
          {"name": "a", "prior": 0.5, "posterior": 0.7},
          {"name": "b", "prior": 0.3, "posterior": 0.35},
          {"name": "c", "prior": 0.2, "posterior": 0.55}],
        "n": 2000, "seed": 11}},
      "protected": {"attribute": "group", "reference": "a"},
      "encoders": ["drop", "one-hot", "target", "target+gaussian"],
      "sweep": {"lambda": [0.0, 0.3, 1.0]},
      "split": {"seed": 5}
    })");
}

std::string csv_config_file() {
    std::string csv = oracle::write_file("fe_cli_rows.csv",
                                         "A,B,x,label\n"
                                         "a0,b0,0.1,1\na0,b0,0.3,0\na0,b1,0.5,1\na0,b1,0.2,1\n"
                                         "a1,b0,0.4,0\na1,b0,0.6,1\na1,b1,0.0,0\na1,b1,0.7,1\n"
                                         "a0,b0,0.9,1\na0,b1,0.8,0\na1,b0,0.2,1\na1,b1,0.3,0\n"
                                         "a0,b0,0.5,0\na0,b1,0.6,1\na1,b0,0.1,0\na1,b1,0.9,1\n");
    std::string config = R"({
      "data": {"path": ")" + csv + R"(", "schema": [
        {"name": "A", "kind": "categorical", "role": "protected"},
        {"name": "B", "kind": "categorical", "role": "protected"},
        {"name": "x", "kind": "numeric"},
        {"name": "label", "kind": "target"}]},
      "protected": {"attributes": ["A", "B"], "references": ["a0", "b0"]},
      "encoders": ["drop", "one-hot", "target"]
    })";
    return oracle::write_file("fe_cli_csv.json", config);
}

}  // namespace

TEST_CASE("audit writes a structured document that parses back") {
    auto cfg = population_config_file();
    auto out = oracle::temp_path("fe_cli_audit.json");
    CHECK(run_cli("audit -c " + cfg + " -o " + out, oracle::temp_path("fe_cli_a.log")) == 0);
    auto doc = json::parse(slurp(out));
    CHECK(doc["tool"] == "fairenc");
    CHECK(doc.contains("version"));
    CHECK(doc["records"].size() == 4);
    auto records = fairenc::records_from_results_json(doc);
    CHECK(records[0].encoder == "drop");
    CHECK(records[0].auc == 0.5);
    CHECK_FALSE(records[2].failed);
}

TEST_CASE("audit prints to stdout when no output path is given") {
    auto cfg = population_config_file();
    auto out = oracle::temp_path("fe_cli_stdout.json");
    CHECK(run_cli("audit -c " + cfg, out) == 0);
    auto doc = json::parse(slurp(out));
    CHECK(doc["records"].size() == 4);
}

TEST_CASE("tabular output round trips through the parser") {
    auto cfg = population_config_file();
    auto out = oracle::temp_path("fe_cli_audit.tsv");
    CHECK(run_cli("audit -c " + cfg + " -o " + out + " --format tabular",
                  oracle::temp_path("fe_cli_t.log")) == 0);
    auto text = slurp(out);
    CHECK(text.rfind("encoder\thyper\t", 0) == 0);
    auto records = fairenc::records_from_tabular(text);
    CHECK(records.size() == 4);
    CHECK(records[3].encoder == "target+gaussian");
}

TEST_CASE("sweep expands the lambda grid") {
    auto cfg = population_config_file();
    auto out = oracle::temp_path("fe_cli_sweep.json");
    CHECK(run_cli("sweep -c " + cfg + " -o " + out, oracle::temp_path("fe_cli_s.log")) == 0);
    auto records = fairenc::records_from_results_json(json::parse(slurp(out)));
    CHECK(records.size() == 6);  // 3 fixed + 3 grid points
    CHECK(records[3].hyper_name == "lambda");
    CHECK(*records[3].hyper_value == 0.0);
    CHECK(*records[5].hyper_value == 1.0);
}

TEST_CASE("seed override changes the run and is reproducible") {
    auto cfg = population_config_file();
    auto o1 = oracle::temp_path("fe_cli_seed1.json");
    auto o2 = oracle::temp_path("fe_cli_seed2.json");
    auto o3 = oracle::temp_path("fe_cli_seed3.json");
    CHECK(run_cli("audit -c " + cfg + " --seed 123 -o " + o1, "/dev/null") == 0);
    CHECK(run_cli("audit -c " + cfg + " --seed 123 -o " + o2, "/dev/null") == 0);
    CHECK(run_cli("audit -c " + cfg + " --seed 124 -o " + o3, "/dev/null") == 0);
    auto r1 = fairenc::records_from_results_json(json::parse(slurp(o1)));
    auto r2 = fairenc::records_from_results_json(json::parse(slurp(o2)));
    auto r3 = fairenc::records_from_results_json(json::parse(slurp(o3)));
    for (std::size_t i = 0; i < r1.size(); ++i) CHECK(fairenc::same_content(r1[i], r2[i]));
    bool differs = false;
    for (std::size_t i = 0; i < r1.size(); ++i) differs |= !fairenc::same_content(r1[i], r3[i]);
    CHECK(differs);
}

TEST_CASE("synth reports closed-form quantities next to sampled runs") {
    auto cfg = population_config_file();
    auto out = oracle::temp_path("fe_cli_synth.json");
    CHECK(run_cli("synth -c " + cfg + " -o " + out, oracle::temp_path("fe_cli_y.log")) == 0);
    auto doc = json::parse(slurp(out));
    auto cf = doc["closed_form"];
    // bayes error = sum_g prior_g * min(post_g, 1 - post_g)
    double bayes = 0.5 * 0.3 + 0.3 * 0.35 + 0.2 * 0.45;
    CHECK(cf["bayes_error"].get<double>() == doctest::Approx(bayes).epsilon(1e-12));
    CHECK(cf["constant_error"]["predict_0"].get<double>() ==
          doctest::Approx(0.5 * 0.7 + 0.3 * 0.35 + 0.2 * 0.55).epsilon(1e-12));
    CHECK(cf["idealized_eof"].contains("values"));
    CHECK(doc["records"].size() == 4);
    for (const auto& rec : doc["records"]) {
        CHECK(rec.contains("decomposition"));
        if (!rec["failed"].get<bool>()) {
            CHECK(rec["decomposition"]["eof"].contains("irreducible"));
            CHECK(rec["decomposition"]["eof"].contains("reducible"));
        }
    }
}

TEST_CASE("stats summarizes a csv file per column") {
    auto cfg = csv_config_file();
    auto out = oracle::temp_path("fe_cli_stats.json");
    CHECK(run_cli("stats -c " + cfg + " -o " + out, oracle::temp_path("fe_cli_st.log")) == 0);
    auto doc = json::parse(slurp(out));
    CHECK(doc["rows"] == 16);
    CHECK(doc["prevalence"].get<double>() == doctest::Approx(9.0 / 16.0));
    REQUIRE(doc["protected"].size() == 2);
    CHECK(doc["protected"][0]["attribute"] == "A");
    CHECK(doc["protected"][1]["reference"] == "b0");
    bool saw_a = false, saw_x = false;
    for (const auto& col : doc["columns"]) {
        if (col["name"] == "A") {
            saw_a = true;
            CHECK(col["distinct"] == 2);
            CHECK(col["categories"].size() == 2);
        }
        if (col["name"] == "x") {
            saw_x = true;
            CHECK(col["min"].get<double>() == 0.0);
            CHECK(col["max"].get<double>() == 0.9);
        }
    }
    CHECK(saw_a);
    CHECK(saw_x);
}

TEST_CASE("intersect emits single and joined arrangements") {
    auto cfg = csv_config_file();
    auto out = oracle::temp_path("fe_cli_inter.json");
    CHECK(run_cli("intersect -c " + cfg + " -o " + out, oracle::temp_path("fe_cli_i.log")) == 0);
    auto doc = json::parse(slurp(out));
    CHECK(doc["singles"].size() == 2);
    CHECK(doc["concatenated"]["attribute"] == "A|B");
    CHECK(doc["flags"].size() == 3);
    for (const auto& f : doc["flags"]) CHECK(f.contains("amplified"));
}

TEST_CASE("structured-only operations reject the tabular format") {
    auto cfg = csv_config_file();
    auto err = oracle::temp_path("fe_cli_fmt.err");
    CHECK(run_cli("intersect -c " + cfg + " --format tabular", "/dev/null", err) == 1);
    CHECK(slurp(err).find("structured") != std::string::npos);
}

TEST_CASE("invalid configuration exits nonzero with a diagnostic") {
    auto cfg = oracle::write_file("fe_cli_bad.json", R"({
      "data": {"population": {"groups": [
          {"name": "a", "prior": 0.5, "posterior": 0.7},
          {"name": "b", "prior": 0.5, "posterior": 0.2}], "n": 100, "seed": 1}},
      "protected": {"attribute": "group", "reference": "a"},
      "encoders": ["drop"]
    })");
    auto err = oracle::temp_path("fe_cli_bad.err");
    CHECK(run_cli("audit -c " + cfg, "/dev/null", err) == 1);
    CHECK(slurp(err).find("error:") != std::string::npos);
    CHECK(slurp(err).find("drop, one-hot and target") != std::string::npos);
}

TEST_CASE("missing config file is rejected by argument parsing") {
    auto err = oracle::temp_path("fe_cli_missing.err");
    CHECK(run_cli("audit -c /nonexistent/path.json", "/dev/null", err) != 0);
}

TEST_CASE("version and help are available") {
    auto out = oracle::temp_path("fe_cli_version.txt");
    CHECK(run_cli("--version", out) == 0);
    CHECK_FALSE(slurp(out).empty());
    CHECK(run_cli("--help", out) == 0);
    auto help = slurp(out);
    for (const char* sub : {"audit", "sweep", "intersect", "synth", "stats"})
        CHECK(help.find(sub) != std::string::npos);
}
