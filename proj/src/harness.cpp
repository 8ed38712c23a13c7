#include "fairenc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fairenc/rng.hpp"
#include "fairenc/version.hpp"

namespace fairenc {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// --- enum <-> string -------------------------------------------------------

ColumnKind kind_from(const std::string& s) {
    if (s == "categorical") return ColumnKind::categorical;
    if (s == "numeric") return ColumnKind::numeric;
    if (s == "target") return ColumnKind::target;
    throw std::runtime_error("config: unknown column kind '" + s + "'");
}

std::string kind_name(ColumnKind k) {
    switch (k) {
        case ColumnKind::categorical: return "categorical";
        case ColumnKind::numeric: return "numeric";
        case ColumnKind::target: return "target";
    }
    return "";
}

ColumnRole role_from(const std::string& s) {
    if (s == "feature") return ColumnRole::feature;
    if (s == "protected") return ColumnRole::protected_attribute;
    if (s == "target") return ColumnRole::target;
    if (s == "ignored") return ColumnRole::ignored;
    throw std::runtime_error("config: unknown column role '" + s + "'");
}

std::string role_name(ColumnRole r) {
    switch (r) {
        case ColumnRole::feature: return "feature";
        case ColumnRole::protected_attribute: return "protected";
        case ColumnRole::target: return "target";
        case ColumnRole::ignored: return "ignored";
    }
    return "";
}

EncoderMethod method_from(const std::string& s) {
    if (s == "drop") return EncoderMethod::drop;
    if (s == "one-hot") return EncoderMethod::one_hot;
    if (s == "ordinal") return EncoderMethod::ordinal;
    if (s == "target") return EncoderMethod::target;
    throw std::runtime_error("config: unknown encoder method '" + s + "'");
}

std::string method_name(EncoderMethod m) {
    switch (m) {
        case EncoderMethod::drop: return "drop";
        case EncoderMethod::one_hot: return "one-hot";
        case EncoderMethod::ordinal: return "ordinal";
        case EncoderMethod::target: return "target";
    }
    return "";
}

EncoderEntry entry_from_json(const json& j) {
    EncoderEntry e;
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "target+gaussian") {
            e.method = EncoderMethod::target;
            e.sweep_lambda = true;
        } else if (s == "target+smoothing") {
            e.method = EncoderMethod::target;
            e.sweep_m = true;
        } else {
            e.method = method_from(s);
        }
        e.label = s;
        return e;
    }
    if (!j.is_object()) throw std::runtime_error("config: encoder entry must be string or object");
    e.method = method_from(j.at("method").get<std::string>());
    if (j.contains("sweep")) {
        const std::string s = j.at("sweep").get<std::string>();
        if (s == "lambda")
            e.sweep_lambda = true;
        else if (s == "m")
            e.sweep_m = true;
        else
            throw std::runtime_error("config: encoder sweep must be 'lambda' or 'm'");
    }
    e.lambda = j.value("lambda", 0.0);
    e.m = j.value("m", 0.0);
    if (j.contains("label")) {
        e.label = j.at("label").get<std::string>();
    } else {
        e.label = method_name(e.method);
        if (e.sweep_lambda || e.lambda > 0.0) e.label += "+gaussian";
        if (e.sweep_m || e.m > 0.0) e.label += "+smoothing";
    }
    return e;
}

json entry_to_json(const EncoderEntry& e) {
    json j;
    j["method"] = method_name(e.method);
    j["label"] = e.label;
    if (e.sweep_lambda) j["sweep"] = "lambda";
    if (e.sweep_m) j["sweep"] = "m";
    if (e.lambda > 0.0) j["lambda"] = e.lambda;
    if (e.m > 0.0) j["m"] = e.m;
    return j;
}

ordered_json num_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

double num_from(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    return s;
}

}  // namespace

// --- config ----------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    ExperimentConfig c;
    if (!doc.is_object()) throw std::runtime_error("config: document must be an object");

    const auto& data = doc.at("data");
    if (data.contains("path")) c.data_path = data.at("path").get<std::string>();
    if (data.contains("schema")) {
        for (const auto& col : data.at("schema")) {
            ColumnSchema s;
            s.name = col.at("name").get<std::string>();
            s.kind = kind_from(col.at("kind").get<std::string>());
            s.role = col.contains("role") ? role_from(col.at("role").get<std::string>())
                     : s.kind == ColumnKind::target ? ColumnRole::target
                                                    : ColumnRole::feature;
            c.schema.push_back(std::move(s));
        }
    }
    if (data.contains("population")) {
        const auto& pop = data.at("population");
        PopulationSpec spec;
        for (const auto& g : pop.at("groups"))
            spec.groups.push_back({g.at("name").get<std::string>(), g.at("prior").get<double>(),
                                   g.at("posterior").get<double>()});
        spec.n = pop.at("n").get<std::size_t>();
        spec.seed = pop.value("seed", std::uint64_t{0});
        c.population = std::move(spec);
    }

    const auto& prot = doc.at("protected");
    if (prot.contains("attributes")) {
        c.protected_attributes = prot.at("attributes").get<std::vector<std::string>>();
        c.references = prot.at("references").get<std::vector<std::string>>();
    } else {
        c.protected_attributes = {prot.at("attribute").get<std::string>()};
        c.references = {prot.at("reference").get<std::string>()};
    }

    if (doc.contains("concat")) c.concat = doc.at("concat").get<std::vector<std::string>>();

    for (const auto& e : doc.at("encoders")) c.encoders.push_back(entry_from_json(e));

    if (doc.contains("model")) {
        const auto& model = doc.at("model");
        c.model_family = model.value("family", std::string("logistic"));
        if (model.contains("params")) {
            const auto& p = model.at("params");
            c.logistic.l1 = p.value("l1", c.logistic.l1);
            c.logistic.max_iters = p.value("max_iters", c.logistic.max_iters);
            c.logistic.tolerance = p.value("tolerance", c.logistic.tolerance);
            c.boosted.tree_count = p.value("tree_count", c.boosted.tree_count);
            c.boosted.max_depth = p.value("max_depth", c.boosted.max_depth);
            c.boosted.learning_rate = p.value("learning_rate", c.boosted.learning_rate);
        }
    }

    if (doc.contains("sweep")) {
        const auto& sweep = doc.at("sweep");
        if (sweep.contains("lambda")) c.sweep_lambda = sweep.at("lambda").get<std::vector<double>>();
        if (sweep.contains("m")) c.sweep_m = sweep.at("m").get<std::vector<double>>();
        std::sort(c.sweep_lambda.begin(), c.sweep_lambda.end());
        std::sort(c.sweep_m.begin(), c.sweep_m.end());
    }

    if (doc.contains("split")) {
        c.split_fraction = doc.at("split").value("fraction", 0.5);
        c.split_seed = doc.at("split").value("seed", std::uint64_t{0});
    }
    if (doc.contains("output")) {
        c.output_path = doc.at("output").value("path", std::string());
        c.output_format = doc.at("output").value("format", std::string("structured"));
    }
    return c;
}

json ExperimentConfig::to_json() const {
    json doc;
    json data;
    if (!data_path.empty()) {
        data["path"] = data_path;
        json schema_arr = json::array();
        for (const auto& s : schema)
            schema_arr.push_back(
                {{"name", s.name}, {"kind", kind_name(s.kind)}, {"role", role_name(s.role)}});
        data["schema"] = std::move(schema_arr);
    }
    if (population) {
        json pop;
        json groups = json::array();
        for (const auto& g : population->groups)
            groups.push_back({{"name", g.name}, {"prior", g.prior}, {"posterior", g.posterior}});
        pop["groups"] = std::move(groups);
        pop["n"] = population->n;
        pop["seed"] = population->seed;
        data["population"] = std::move(pop);
    }
    doc["data"] = std::move(data);
    doc["protected"] = {{"attributes", protected_attributes}, {"references", references}};
    if (!concat.empty()) doc["concat"] = concat;
    json encs = json::array();
    for (const auto& e : encoders) encs.push_back(entry_to_json(e));
    doc["encoders"] = std::move(encs);
    json params;
    if (model_family == "logistic") {
        params = {{"l1", logistic.l1},
                  {"max_iters", logistic.max_iters},
                  {"tolerance", logistic.tolerance}};
    } else {
        params = {{"tree_count", boosted.tree_count},
                  {"max_depth", boosted.max_depth},
                  {"learning_rate", boosted.learning_rate}};
    }
    doc["model"] = {{"family", model_family}, {"params", std::move(params)}};
    doc["sweep"] = {{"lambda", sweep_lambda}, {"m", sweep_m}};
    doc["split"] = {{"fraction", split_fraction}, {"seed", split_seed}};
    if (!output_path.empty() || output_format != "structured")
        doc["output"] = {{"path", output_path}, {"format", output_format}};
    return doc;
}

void ExperimentConfig::validate() const {
    const bool has_path = !data_path.empty();
    if (has_path == population.has_value())
        throw std::runtime_error("config: exactly one of data.path and data.population required");
    if (has_path && schema.empty()) throw std::runtime_error("config: data.schema required with data.path");
    if (population) {
        population->validate();
        for (const auto& a : protected_attributes)
            if (a != "group")
                throw std::runtime_error(
                    "config: sampled population data names its protected attribute 'group'");
    }

    if (protected_attributes.empty()) throw std::runtime_error("config: no protected attribute");
    if (protected_attributes.size() != references.size())
        throw std::runtime_error("config: protected attributes and references differ in length");
    for (const auto& a : protected_attributes)
        if (a.empty()) throw std::runtime_error("config: empty protected attribute name");
    for (const auto& r : references)
        if (r.empty()) throw std::runtime_error("config: empty reference group");
    if (!concat.empty() && concat.size() < 2)
        throw std::runtime_error("config: concat needs at least two attributes");
    for (const auto& a : concat) {
        bool known = false;
        for (const auto& p : protected_attributes) known |= p == a;
        if (!known)
            throw std::runtime_error("config: concat attribute '" + a +
                                     "' is not listed under protected attributes");
    }

    if (encoders.empty()) throw std::runtime_error("config: no encoders configured");
    bool has_drop = false, has_onehot = false, has_target = false;
    for (std::size_t i = 0; i < encoders.size(); ++i) {
        const auto& e = encoders[i];
        has_drop |= e.method == EncoderMethod::drop;
        has_onehot |= e.method == EncoderMethod::one_hot;
        has_target |= e.method == EncoderMethod::target;
        if (e.sweep_lambda && e.sweep_m)
            throw std::runtime_error("config: encoder '" + e.label + "' sweeps both grids");
        if (e.lambda < 0.0 || e.lambda > 5.0)
            throw std::runtime_error("config: encoder '" + e.label + "' lambda outside [0,5]");
        if (e.m < 0.0 || e.m > 1e6)
            throw std::runtime_error("config: encoder '" + e.label + "' m outside [0,1e6]");
        if (e.sweep_lambda && sweep_lambda.empty())
            throw std::runtime_error("config: encoder '" + e.label + "' needs a non-empty sweep.lambda");
        if (e.sweep_m && sweep_m.empty())
            throw std::runtime_error("config: encoder '" + e.label + "' needs a non-empty sweep.m");
        for (std::size_t j = i + 1; j < encoders.size(); ++j)
            if (encoders[j].label == e.label)
                throw std::runtime_error("config: duplicate encoder label '" + e.label + "'");
    }
    if (!has_drop || !has_onehot || !has_target)
        throw std::runtime_error("config: encoders must include drop, one-hot and target");

    for (double v : sweep_lambda)
        if (!(v >= 0.0 && v <= 5.0))
            throw std::runtime_error("config: sweep.lambda value outside [0,5]");
    for (double v : sweep_m)
        if (!(v >= 0.0 && v <= 1e6)) throw std::runtime_error("config: sweep.m value outside [0,1e6]");

    if (model_family != "logistic" && model_family != "boosted")
        throw std::runtime_error("config: model.family must be 'logistic' or 'boosted'");
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
        throw std::runtime_error("config: split.fraction must lie in (0,1)");
    if (output_format != "structured" && output_format != "tabular")
        throw std::runtime_error("config: output.format must be 'structured' or 'tabular'");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw std::runtime_error("config: invalid JSON in '" + path + "': " + e.what());
    }
    return ExperimentConfig::from_json(doc);
}

// --- pipeline --------------------------------------------------------------

SweepRecord run_pipeline(const Dataset& data, const PipelineSpec& spec,
                         FairnessReport* out_report) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRecord rec;
    rec.encoder = spec.encoder_label;

    SplitResult split =
        stratified_split(data, spec.split_fraction, spec.group.attribute, spec.split_seed);
    auto train_stats = category_stats(split.train, spec.group.attribute);
    if (train_stats.find(spec.group.reference) == nullptr)
        throw std::runtime_error("pipeline: reference group '" + spec.group.reference +
                                 "' absent from the training split");

    Encoder enc = Encoder::fit(spec.encoder, split.train, spec.group.attribute);
    FeatureMatrix xtr = transform(enc, split.train, spec.group.attribute, Phase::train);
    FeatureMatrix xte = transform(enc, split.test, spec.group.attribute, Phase::eval);

    Model model = spec.model_family == "boosted"
                      ? Model(train_boosted(xtr, split.train.target(), spec.boosted))
                      : Model(train_logistic(xtr, split.train.target(), spec.logistic));
    Prediction pred = predict(model, xte);

    rec.auc = auc(pred.scores, split.test.target());
    Groups groups = make_groups(split.test, spec.group);
    FairnessReport rep = fairness_report(pred, split.test.target(), groups);

    rec.l_eof = rep.l_eof;
    rec.l_dp = rep.l_dp;
    rec.l_aao = rep.l_aao;
    rec.max_abs_eof = rep.max_abs_eof;
    rec.max_abs_dp = rep.max_abs_dp;
    rec.max_abs_aao = rep.max_abs_aao;
    rec.outcomes = rep.outcomes;
    rec.eof = rep.eof.values;
    rec.dp = rep.dp.values;
    rec.aao = rep.aao.values;
    for (const auto& s : rep.eof.skipped) rec.skipped.push_back({"eof", s.group, s.reason});
    for (const auto& s : rep.dp.skipped) rec.skipped.push_back({"dp", s.group, s.reason});
    for (const auto& s : rep.aao.skipped) rec.skipped.push_back({"aao", s.group, s.reason});

    if (spec.encoder.method == EncoderMethod::target && xte.cols == 1) {
        FeatureMatrix probe;
        probe.rows = 1;
        probe.cols = 1;
        probe.values = {enc.prior()};
        probe.names = {spec.group.attribute};
        rec.score_at_prior = predict(model, probe).scores[0];
    }

    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    if (out_report) *out_report = rep;
    return rec;
}

Dataset prepare_data(const ExperimentConfig& config) {
    Dataset data = config.population ? sample_population(*config.population)
                                     : load_csv(config.data_path, config.schema);
    if (!config.concat.empty()) {
        std::string joined;
        for (std::size_t i = 0; i < config.concat.size(); ++i) {
            if (i) joined += '|';
            joined += config.concat[i];
        }
        data = concat_attributes(data, config.concat, joined);
    }
    return data;
}

namespace {

struct GridPoint {
    EncoderEntry entry;
    std::string hyper_name;
    std::optional<double> hyper_value;
};

std::vector<GridPoint> expand_points(const ExperimentConfig& config, bool with_grids) {
    std::vector<GridPoint> points;
    for (const auto& e : config.encoders) {
        if (with_grids && e.sweep_lambda) {
            for (double v : config.sweep_lambda) {
                EncoderEntry fixed = e;
                fixed.lambda = v;
                points.push_back({fixed, "lambda", v});
            }
        } else if (with_grids && e.sweep_m) {
            for (double v : config.sweep_m) {
                EncoderEntry fixed = e;
                fixed.m = v;
                points.push_back({fixed, "m", v});
            }
        } else {
            points.push_back({e, "", std::nullopt});
        }
    }
    return points;
}

std::vector<SweepRecord> run_points(const Dataset& data, const ExperimentConfig& config,
                                    const GroupSpec& group, const std::vector<GridPoint>& points,
                                    Exec exec) {
    std::vector<SweepRecord> records(points.size());
    parallel_for(points.size(), exec, [&](std::size_t i) {
        const GridPoint& pt = points[i];
        PipelineSpec spec;
        spec.group = group;
        spec.encoder_label = pt.entry.label;
        spec.encoder.method = pt.entry.method;
        spec.encoder.gaussian_lambda = pt.entry.lambda;
        spec.encoder.smoothing_m = pt.entry.m;
        spec.encoder.noise_seed = mix_seed(config.split_seed, i);
        spec.model_family = config.model_family;
        spec.logistic = config.logistic;
        spec.boosted = config.boosted;
        spec.split_fraction = config.split_fraction;
        spec.split_seed = config.split_seed;
        SweepRecord rec;
        try {
            rec = run_pipeline(data, spec);
        } catch (const std::exception& e) {
            rec = SweepRecord{};
            rec.encoder = pt.entry.label;
            rec.failed = true;
            rec.error = e.what();
        }
        rec.hyper_name = pt.hyper_name;
        rec.hyper_value = pt.hyper_value;
        records[i] = std::move(rec);
    });
    return records;
}

}  // namespace

namespace {

// the audited attribute: the '|'-joined column when concatenation is
// configured, the first protected attribute otherwise
GroupSpec audited_group(const ExperimentConfig& config) {
    if (config.concat.empty()) return {config.protected_attributes[0], config.references[0]};
    std::string name, ref;
    for (std::size_t i = 0; i < config.concat.size(); ++i) {
        std::size_t idx = 0;
        while (config.protected_attributes[idx] != config.concat[i]) ++idx;
        if (i) {
            name += '|';
            ref += '|';
        }
        name += config.concat[i];
        ref += config.references[idx];
    }
    return {name, ref};
}

}  // namespace

std::vector<SweepRecord> run_audit(const ExperimentConfig& config, Exec exec) {
    config.validate();
    Dataset data = prepare_data(config);
    return run_points(data, config, audited_group(config), expand_points(config, false), exec);
}

std::vector<SweepRecord> run_sweep(const ExperimentConfig& config, Exec exec) {
    config.validate();
    Dataset data = prepare_data(config);
    return run_points(data, config, audited_group(config), expand_points(config, true), exec);
}

IntersectionalReport run_intersectional(const ExperimentConfig& config, Exec exec) {
    config.validate();
    if (config.protected_attributes.size() < 2)
        throw std::runtime_error("intersect: at least two protected attributes required");
    Dataset base = config.population ? sample_population(*config.population)
                                     : load_csv(config.data_path, config.schema);

    const auto& attrs =
        config.concat.empty() ? config.protected_attributes : config.concat;
    std::string joined_name, joined_ref;
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        std::size_t idx = 0;
        while (config.protected_attributes[idx] != attrs[i]) ++idx;
        if (i) {
            joined_name += '|';
            joined_ref += '|';
        }
        joined_name += attrs[i];
        joined_ref += config.references[idx];
    }
    Dataset concat_data = concat_attributes(base, attrs, joined_name);

    auto points = expand_points(config, false);
    IntersectionalReport report;
    for (std::size_t a = 0; a < config.protected_attributes.size(); ++a) {
        Arrangement arr;
        arr.attribute = config.protected_attributes[a];
        arr.reference = config.references[a];
        arr.records = run_points(base, config, {arr.attribute, arr.reference}, points, exec);
        report.singles.push_back(std::move(arr));
    }
    report.concatenated.attribute = joined_name;
    report.concatenated.reference = joined_ref;
    report.concatenated.records =
        run_points(concat_data, config, {joined_name, joined_ref}, points, exec);

    for (std::size_t i = 0; i < points.size(); ++i) {
        IntersectFlag flag;
        flag.encoder = points[i].entry.label;
        flag.concat_violation = report.concatenated.records[i].max_abs_eof;
        bool ok = !report.concatenated.records[i].failed;
        flag.amplified = ok;
        for (const auto& arr : report.singles) {
            flag.single_violations.push_back(arr.records[i].max_abs_eof);
            if (arr.records[i].failed || !ok ||
                !(flag.concat_violation > arr.records[i].max_abs_eof))
                flag.amplified = false;
        }
        report.flags.push_back(std::move(flag));
    }
    return report;
}

// --- comparison ------------------------------------------------------------

namespace {

bool num_eq(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool opt_eq(const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || num_eq(*a, *b);
}

bool values_eq(const std::vector<GroupValue>& a, const std::vector<GroupValue>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].group != b[i].group || !num_eq(a[i].value, b[i].value)) return false;
    return true;
}

}  // namespace

bool same_content(const SweepRecord& a, const SweepRecord& b) {
    if (a.encoder != b.encoder || a.hyper_name != b.hyper_name ||
        !opt_eq(a.hyper_value, b.hyper_value) || a.failed != b.failed || a.error != b.error)
        return false;
    if (!num_eq(a.auc, b.auc) || !num_eq(a.l_eof, b.l_eof) || !num_eq(a.l_dp, b.l_dp) ||
        !num_eq(a.l_aao, b.l_aao) || !num_eq(a.max_abs_eof, b.max_abs_eof) ||
        !num_eq(a.max_abs_dp, b.max_abs_dp) || !num_eq(a.max_abs_aao, b.max_abs_aao) ||
        !opt_eq(a.score_at_prior, b.score_at_prior))
        return false;
    if (!values_eq(a.eof, b.eof) || !values_eq(a.dp, b.dp) || !values_eq(a.aao, b.aao))
        return false;
    if (a.outcomes.size() != b.outcomes.size() || a.skipped.size() != b.skipped.size())
        return false;
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
        const auto& x = a.outcomes[i];
        const auto& y = b.outcomes[i];
        if (x.group != y.group || x.n != y.n || x.positives != y.positives ||
            !opt_eq(x.tpr, y.tpr) || !opt_eq(x.fpr, y.fpr) || !opt_eq(x.auc, y.auc))
            return false;
    }
    for (std::size_t i = 0; i < a.skipped.size(); ++i) {
        const auto& x = a.skipped[i];
        const auto& y = b.skipped[i];
        if (x.metric != y.metric || x.group != y.group || x.reason != y.reason) return false;
    }
    return true;
}

// --- emission --------------------------------------------------------------

namespace {

ordered_json outcome_to_json(const GroupOutcome& o) {
    ordered_json j;
    j["group"] = o.group;
    j["n"] = o.n;
    j["positives"] = o.positives;
    j["tpr"] = o.tpr ? json(*o.tpr) : json();
    j["fpr"] = o.fpr ? json(*o.fpr) : json();
    j["auc"] = o.auc ? json(*o.auc) : json();
    return j;
}

GroupOutcome outcome_from_json(const json& j) {
    GroupOutcome o;
    o.group = j.at("group").get<std::string>();
    o.n = j.at("n").get<std::size_t>();
    o.positives = j.at("positives").get<std::size_t>();
    if (!j.at("tpr").is_null()) o.tpr = j.at("tpr").get<double>();
    if (!j.at("fpr").is_null()) o.fpr = j.at("fpr").get<double>();
    if (!j.at("auc").is_null()) o.auc = j.at("auc").get<double>();
    return o;
}

ordered_json values_to_json(const std::vector<GroupValue>& values) {
    ordered_json arr = ordered_json::array();
    for (const auto& v : values) arr.push_back({{"group", v.group}, {"value", v.value}});
    return arr;
}

std::vector<GroupValue> values_from_json(const json& arr) {
    std::vector<GroupValue> out;
    for (const auto& v : arr)
        out.push_back({v.at("group").get<std::string>(), v.at("value").get<double>()});
    return out;
}

}  // namespace

ordered_json record_to_json(const SweepRecord& r) {
    ordered_json j;
    j["encoder"] = r.encoder;
    if (r.hyper_name.empty())
        j["hyperparameter"] = nullptr;
    else
        j["hyperparameter"] = {{"name", r.hyper_name}, {"value", *r.hyper_value}};
    j["failed"] = r.failed;
    j["error"] = r.error;
    j["auc"] = num_or_null(r.auc);
    j["l_eof"] = num_or_null(r.l_eof);
    j["l_dp"] = num_or_null(r.l_dp);
    j["l_aao"] = num_or_null(r.l_aao);
    j["max_abs_eof"] = num_or_null(r.max_abs_eof);
    j["max_abs_dp"] = num_or_null(r.max_abs_dp);
    j["max_abs_aao"] = num_or_null(r.max_abs_aao);
    ordered_json outcomes = ordered_json::array();
    for (const auto& o : r.outcomes) outcomes.push_back(outcome_to_json(o));
    j["outcomes"] = std::move(outcomes);
    j["eof"] = values_to_json(r.eof);
    j["dp"] = values_to_json(r.dp);
    j["aao"] = values_to_json(r.aao);
    ordered_json skipped = ordered_json::array();
    for (const auto& s : r.skipped)
        skipped.push_back({{"metric", s.metric}, {"group", s.group}, {"reason", s.reason}});
    j["skipped"] = std::move(skipped);
    j["score_at_prior"] = r.score_at_prior ? json(*r.score_at_prior) : json();
    j["wall_ms"] = r.wall_ms;
    return j;
}

SweepRecord record_from_json(const json& doc) {
    SweepRecord r;
    r.encoder = doc.at("encoder").get<std::string>();
    if (!doc.at("hyperparameter").is_null()) {
        r.hyper_name = doc.at("hyperparameter").at("name").get<std::string>();
        r.hyper_value = doc.at("hyperparameter").at("value").get<double>();
    }
    r.failed = doc.at("failed").get<bool>();
    r.error = doc.at("error").get<std::string>();
    r.auc = num_from(doc.at("auc"));
    r.l_eof = num_from(doc.at("l_eof"));
    r.l_dp = num_from(doc.at("l_dp"));
    r.l_aao = num_from(doc.at("l_aao"));
    r.max_abs_eof = num_from(doc.at("max_abs_eof"));
    r.max_abs_dp = num_from(doc.at("max_abs_dp"));
    r.max_abs_aao = num_from(doc.at("max_abs_aao"));
    for (const auto& o : doc.at("outcomes")) r.outcomes.push_back(outcome_from_json(o));
    r.eof = values_from_json(doc.at("eof"));
    r.dp = values_from_json(doc.at("dp"));
    r.aao = values_from_json(doc.at("aao"));
    for (const auto& s : doc.at("skipped"))
        r.skipped.push_back({s.at("metric").get<std::string>(), s.at("group").get<std::string>(),
                             s.at("reason").get<std::string>()});
    if (!doc.at("score_at_prior").is_null()) r.score_at_prior = doc.at("score_at_prior").get<double>();
    r.wall_ms = doc.at("wall_ms").get<double>();
    return r;
}

ordered_json results_to_json(const ExperimentConfig& config,
                             const std::vector<SweepRecord>& records) {
    ordered_json doc;
    doc["tool"] = "fairenc";
    doc["version"] = kVersion;
    doc["config"] = config.to_json();
    ordered_json recs = ordered_json::array();
    for (const auto& r : records) recs.push_back(record_to_json(r));
    doc["records"] = std::move(recs);
    return doc;
}

std::vector<SweepRecord> records_from_results_json(const json& doc) {
    std::vector<SweepRecord> out;
    for (const auto& r : doc.at("records")) out.push_back(record_from_json(r));
    return out;
}

namespace {

const char* kTabularHeader =
    "encoder\thyper\tvalue\tfailed\terror\tauc\tl_eof\tl_dp\tl_aao\tmax_abs_eof\tmax_abs_dp\t"
    "max_abs_aao\tscore_at_prior\twall_ms\toutcomes\teof\tdp\taao\tskipped";

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return cells;
}

}  // namespace

std::string records_to_tabular(const std::vector<SweepRecord>& records) {
    std::ostringstream out;
    out << kTabularHeader << '\n';
    for (const auto& r : records) {
        ordered_json outcomes = ordered_json::array();
        for (const auto& o : r.outcomes) outcomes.push_back(outcome_to_json(o));
        ordered_json skipped = ordered_json::array();
        for (const auto& s : r.skipped)
            skipped.push_back({{"metric", s.metric}, {"group", s.group}, {"reason", s.reason}});
        out << sanitize(r.encoder) << '\t' << r.hyper_name << '\t'
            << (r.hyper_value ? format_double(*r.hyper_value) : "") << '\t' << (r.failed ? 1 : 0)
            << '\t' << sanitize(r.error) << '\t' << format_double(r.auc) << '\t'
            << format_double(r.l_eof) << '\t' << format_double(r.l_dp) << '\t'
            << format_double(r.l_aao) << '\t' << format_double(r.max_abs_eof) << '\t'
            << format_double(r.max_abs_dp) << '\t' << format_double(r.max_abs_aao) << '\t'
            << (r.score_at_prior ? format_double(*r.score_at_prior) : "") << '\t'
            << format_double(r.wall_ms) << '\t' << outcomes.dump() << '\t'
            << values_to_json(r.eof).dump() << '\t' << values_to_json(r.dp).dump() << '\t'
            << values_to_json(r.aao).dump() << '\t' << skipped.dump() << '\n';
    }
    return out.str();
}

std::vector<SweepRecord> records_from_tabular(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("tabular: empty input");
    if (line != kTabularHeader) throw std::runtime_error("tabular: unexpected header");
    std::vector<SweepRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_tabs(line);
        if (cells.size() != 19)
            throw std::runtime_error("tabular: expected 19 cells, got " +
                                     std::to_string(cells.size()));
        SweepRecord r;
        r.encoder = cells[0];
        r.hyper_name = cells[1];
        if (!cells[2].empty()) r.hyper_value = std::strtod(cells[2].c_str(), nullptr);
        r.failed = cells[3] == "1";
        r.error = cells[4];
        r.auc = std::strtod(cells[5].c_str(), nullptr);
        r.l_eof = std::strtod(cells[6].c_str(), nullptr);
        r.l_dp = std::strtod(cells[7].c_str(), nullptr);
        r.l_aao = std::strtod(cells[8].c_str(), nullptr);
        r.max_abs_eof = std::strtod(cells[9].c_str(), nullptr);
        r.max_abs_dp = std::strtod(cells[10].c_str(), nullptr);
        r.max_abs_aao = std::strtod(cells[11].c_str(), nullptr);
        if (!cells[12].empty()) r.score_at_prior = std::strtod(cells[12].c_str(), nullptr);
        r.wall_ms = std::strtod(cells[13].c_str(), nullptr);
        for (const auto& o : json::parse(cells[14])) r.outcomes.push_back(outcome_from_json(o));
        r.eof = values_from_json(json::parse(cells[15]));
        r.dp = values_from_json(json::parse(cells[16]));
        r.aao = values_from_json(json::parse(cells[17]));
        for (const auto& s : json::parse(cells[18]))
            r.skipped.push_back({s.at("metric").get<std::string>(), s.at("group").get<std::string>(),
                                 s.at("reason").get<std::string>()});
        out.push_back(std::move(r));
    }
    return out;
}

ordered_json intersectional_to_json(const ExperimentConfig& config,
                                    const IntersectionalReport& report) {
    ordered_json doc;
    doc["tool"] = "fairenc";
    doc["version"] = kVersion;
    doc["config"] = config.to_json();
    auto arrangement = [](const Arrangement& a) {
        ordered_json j;
        j["attribute"] = a.attribute;
        j["reference"] = a.reference;
        ordered_json recs = ordered_json::array();
        for (const auto& r : a.records) recs.push_back(record_to_json(r));
        j["records"] = std::move(recs);
        return j;
    };
    ordered_json singles = ordered_json::array();
    for (const auto& a : report.singles) singles.push_back(arrangement(a));
    doc["singles"] = std::move(singles);
    doc["concatenated"] = arrangement(report.concatenated);
    ordered_json flags = ordered_json::array();
    for (const auto& f : report.flags) {
        ordered_json j;
        j["encoder"] = f.encoder;
        j["concat_violation"] = num_or_null(f.concat_violation);
        ordered_json sv = ordered_json::array();
        for (double v : f.single_violations) sv.push_back(num_or_null(v));
        j["single_violations"] = std::move(sv);
        j["amplified"] = f.amplified;
        flags.push_back(std::move(j));
    }
    doc["flags"] = std::move(flags);
    return doc;
}

}  // namespace fairenc
