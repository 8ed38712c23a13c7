// Command-line front end: audits encoder choices for categorical protected
// attributes on tabular or synthetic data and reports fairness/utility
// trade-offs.  Subcommands:
//
//   audit      one record per configured encoder at fixed strengths
//   sweep      grid expansion over the configured lambda / m grids
//   intersect  single attributes vs. their concatenation, with amplification flags
//   synth      closed-form population quantities plus per-encoder bias decompositions
//   stats      dataset summary (rows, prevalence, per-category counts)

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fairenc/harness.hpp"
#include "fairenc/rng.hpp"
#include "fairenc/version.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct CliOptions {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common_options(CLI::App* sub, CliOptions& opt) {
    sub->add_option("-c,--config", opt.config_path, "experiment configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--out", opt.out_path, "output file (default: config output.path, else stdout)");
    sub->add_option("--seed", opt.seed, "override the split seed and, for sampled populations, the sampling seed");
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"structured", "tabular"}));
}

fairenc::ExperimentConfig load_with_overrides(const CliOptions& opt) {
    auto cfg = fairenc::load_config(opt.config_path);
    if (opt.seed_set) {
        cfg.split_seed = opt.seed;
        if (cfg.population) cfg.population->seed = opt.seed;
    }
    if (!opt.out_path.empty()) cfg.output_path = opt.out_path;
    if (!opt.format.empty()) cfg.output_format = opt.format;
    cfg.validate();
    return cfg;
}

void write_output(const std::string& path, const std::string& text) {
    std::string body = text;
    if (body.empty() || body.back() != '\n') body += '\n';
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << body;
    if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
    std::cerr << "wrote " << path << "\n";
}

void emit_records(const fairenc::ExperimentConfig& cfg,
                  const std::vector<fairenc::SweepRecord>& records) {
    if (cfg.output_format == "tabular")
        write_output(cfg.output_path, fairenc::records_to_tabular(records));
    else
        write_output(cfg.output_path, fairenc::results_to_json(cfg, records).dump(2));
}

void require_structured(const fairenc::ExperimentConfig& cfg, const std::string& op) {
    if (cfg.output_format != "structured")
        throw std::runtime_error(op + " emits structured output only");
}

const char* kind_name(fairenc::ColumnKind k) {
    switch (k) {
        case fairenc::ColumnKind::categorical: return "categorical";
        case fairenc::ColumnKind::numeric: return "numeric";
        default: return "target";
    }
}

const char* role_name(fairenc::ColumnRole r) {
    switch (r) {
        case fairenc::ColumnRole::feature: return "feature";
        case fairenc::ColumnRole::protected_attribute: return "protected";
        case fairenc::ColumnRole::target: return "target";
        default: return "ignored";
    }
}

int run_audit_cmd(const CliOptions& opt) {
    auto cfg = load_with_overrides(opt);
    emit_records(cfg, fairenc::run_audit(cfg));
    return 0;
}

int run_sweep_cmd(const CliOptions& opt) {
    auto cfg = load_with_overrides(opt);
    emit_records(cfg, fairenc::run_sweep(cfg));
    return 0;
}

int run_intersect_cmd(const CliOptions& opt) {
    auto cfg = load_with_overrides(opt);
    require_structured(cfg, "intersect");
    auto report = fairenc::run_intersectional(cfg);
    write_output(cfg.output_path, fairenc::intersectional_to_json(cfg, report).dump(2));
    return 0;
}

ordered_json decomposition_json(const fairenc::BiasDecomposition& d) {
    ordered_json j;
    j["irreducible"] = d.irreducible;
    j["total"] = d.total;
    j["reducible"] = d.reducible;
    j["score_at_prior"] = d.score_at_prior ? json(*d.score_at_prior) : json();
    return j;
}

int run_synth_cmd(const CliOptions& opt) {
    auto cfg = load_with_overrides(opt);
    require_structured(cfg, "synth");
    if (!cfg.population)
        throw std::runtime_error("synth requires a sampled population (data.population)");
    const auto& spec = *cfg.population;
    const std::string& reference = cfg.references.front();

    ordered_json doc;
    doc["tool"] = "fairenc";
    doc["version"] = fairenc::kVersion;
    doc["config"] = cfg.to_json();

    ordered_json closed;
    closed["bayes_error"] = fairenc::bayes_error(spec);
    closed["constant_error"] = {{"predict_0", fairenc::constant_prediction_error(spec, 0)},
                                {"predict_1", fairenc::constant_prediction_error(spec, 1)}};
    auto ideal = fairenc::perfect_eof(spec, reference);
    ordered_json ideal_j;
    ideal_j["values"] = ordered_json::array();
    for (const auto& v : ideal.values)
        ideal_j["values"].push_back({{"group", v.group}, {"value", v.value}});
    ideal_j["l"] = fairenc::aggregate(ideal);
    ideal_j["max_abs"] = fairenc::max_abs(ideal);
    closed["idealized_eof"] = std::move(ideal_j);
    doc["closed_form"] = std::move(closed);

    auto data = fairenc::prepare_data(cfg);
    doc["records"] = ordered_json::array();
    for (std::size_t i = 0; i < cfg.encoders.size(); ++i) {
        const auto& e = cfg.encoders[i];
        fairenc::PipelineSpec ps;
        ps.group = {cfg.protected_attributes.front(), reference};
        ps.encoder_label = e.label;
        ps.encoder = {e.method, e.m, e.lambda, fairenc::mix_seed(cfg.split_seed, i)};
        ps.model_family = cfg.model_family;
        ps.logistic = cfg.logistic;
        ps.boosted = cfg.boosted;
        ps.split_fraction = cfg.split_fraction;
        ps.split_seed = cfg.split_seed;

        ordered_json entry;
        try {
            fairenc::FairnessReport report;
            auto rec = fairenc::run_pipeline(data, ps, &report);
            entry = fairenc::record_to_json(rec);
            ordered_json decomp;
            for (const char* metric : {"eof", "dp", "aao"})
                decomp[metric] = decomposition_json(
                    fairenc::decompose_bias(spec, reference, report, metric, rec.score_at_prior));
            entry["decomposition"] = std::move(decomp);
        } catch (const std::exception& ex) {
            fairenc::SweepRecord rec;
            rec.encoder = e.label;
            rec.failed = true;
            rec.error = ex.what();
            entry = fairenc::record_to_json(rec);
            entry["decomposition"] = nullptr;
        }
        doc["records"].push_back(std::move(entry));
    }
    write_output(cfg.output_path, doc.dump(2));
    return 0;
}

int run_stats_cmd(const CliOptions& opt) {
    auto cfg = load_with_overrides(opt);
    require_structured(cfg, "stats");
    auto data = fairenc::prepare_data(cfg);

    ordered_json doc;
    doc["tool"] = "fairenc";
    doc["version"] = fairenc::kVersion;
    doc["rows"] = data.rows();
    doc["prevalence"] = fairenc::prevalence(data);
    doc["columns"] = ordered_json::array();
    for (std::size_t c = 0; c < data.schema().size(); ++c) {
        const auto& col = data.schema()[c];
        ordered_json cj;
        cj["name"] = col.name;
        cj["kind"] = kind_name(col.kind);
        cj["role"] = role_name(col.role);
        if (col.kind == fairenc::ColumnKind::categorical) {
            auto stats = fairenc::category_stats(data, col.name);
            cj["distinct"] = stats.categories.size();
            cj["categories"] = ordered_json::array();
            for (const auto& cat : stats.categories) {
                double rate = cat.count ? double(cat.positives) / double(cat.count) : 0.0;
                cj["categories"].push_back({{"value", cat.value},
                                            {"count", cat.count},
                                            {"positives", cat.positives},
                                            {"rate", rate}});
            }
        } else if (col.kind == fairenc::ColumnKind::numeric) {
            const auto& v = data.numeric(int(c));
            double lo = v.front(), hi = v.front(), sum = 0.0;
            for (double x : v) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
                sum += x;
            }
            cj["min"] = lo;
            cj["max"] = hi;
            cj["mean"] = sum / double(v.size());
        }
        doc["columns"].push_back(std::move(cj));
    }
    doc["protected"] = ordered_json::array();
    for (std::size_t i = 0; i < cfg.protected_attributes.size(); ++i)
        doc["protected"].push_back({{"attribute", cfg.protected_attributes[i]},
                                    {"reference", cfg.references[i]}});
    write_output(cfg.output_path, doc.dump(2));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairness audit of categorical-attribute encodings"};
    app.set_version_flag("--version", fairenc::kVersion);
    app.require_subcommand(1);

    CliOptions opt;
    auto* audit = app.add_subcommand("audit", "run every configured encoder once");
    auto* sweep = app.add_subcommand("sweep", "expand the regularization grids");
    auto* intersect = app.add_subcommand("intersect",
                                         "compare single attributes against their concatenation");
    auto* synth = app.add_subcommand("synth",
                                     "closed-form population quantities and bias decompositions");
    auto* stats = app.add_subcommand("stats", "summarize the configured dataset");
    for (auto* sub : {audit, sweep, intersect, synth, stats}) add_common_options(sub, opt);

    CLI11_PARSE(app, argc, argv);
    opt.seed_set = app.get_subcommands().front()->count("--seed") > 0;

    try {
        auto* sub = app.get_subcommands().front();
        if (sub == audit) return run_audit_cmd(opt);
        if (sub == sweep) return run_sweep_cmd(opt);
        if (sub == intersect) return run_intersect_cmd(opt);
        if (sub == synth) return run_synth_cmd(opt);
        return run_stats_cmd(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
