#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fairenc/dataset.hpp"
#include "fairenc/encoders.hpp"
#include "fairenc/metrics.hpp"
#include "fairenc/models.hpp"
#include "fairenc/parallel.hpp"
#include "fairenc/theory.hpp"

#include "json.hpp"

namespace fairenc {

/// One encoder arm of an experiment.  Entries either carry fixed
/// regularization strengths or opt into a sweep over one of the config grids.
struct EncoderEntry {
    std::string label;
    EncoderMethod method = EncoderMethod::target;
    bool sweep_lambda = false;
    bool sweep_m = false;
    double lambda = 0.0;  // fixed strength when not sweeping
    double m = 0.0;
};

/// Parsed experiment description.  Data comes either from a CSV file with a
/// declared schema or from a synthetic population specification.
struct ExperimentConfig {
    std::string data_path;
    std::vector<ColumnSchema> schema;
    std::optional<PopulationSpec> population;

    std::vector<std::string> protected_attributes;
    std::vector<std::string> references;
    std::vector<std::string> concat;

    std::vector<EncoderEntry> encoders;

    std::string model_family = "logistic";
    LogisticParams logistic;
    BoostedParams boosted;

    std::vector<double> sweep_lambda;
    std::vector<double> sweep_m;

    double split_fraction = 0.5;
    std::uint64_t split_seed = 0;

    std::string output_path;
    std::string output_format = "structured";

    static ExperimentConfig from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;

    /// Fail-fast checks: grids inside lambda in [0,5] / m in [0,1e6] and
    /// non-empty where selected, encoder set covering {drop, one-hot,
    /// target}, fraction in (0,1), exactly one data source, matching
    /// attribute/reference lists.
    void validate() const;
};

ExperimentConfig load_config(const std::string& path);

struct SkipRecord {
    std::string metric;
    std::string group;
    std::string reason;
};

/// Outcome of one pipeline run.  Failed runs keep their identifying fields
/// and an error message; metric fields stay NaN.
struct SweepRecord {
    std::string encoder;
    std::string hyper_name;  // "lambda", "m" or empty
    std::optional<double> hyper_value;
    bool failed = false;
    std::string error;

    static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
    double auc = kUnset;
    double l_eof = kUnset, l_dp = kUnset, l_aao = kUnset;
    double max_abs_eof = kUnset, max_abs_dp = kUnset, max_abs_aao = kUnset;
    std::vector<GroupOutcome> outcomes;
    std::vector<GroupValue> eof, dp, aao;
    std::vector<SkipRecord> skipped;
    std::optional<double> score_at_prior;  // probed for single-column target encodings

    double wall_ms = 0.0;
};

/// Field-wise equality ignoring wall-clock time.
bool same_content(const SweepRecord& a, const SweepRecord& b);

struct PipelineSpec {
    GroupSpec group;
    std::string encoder_label;
    EncoderConfig encoder;
    std::string model_family = "logistic";
    LogisticParams logistic;
    BoostedParams boosted;
    double split_fraction = 0.5;
    std::uint64_t split_seed = 0;
};

/// Full audited pipeline: stratified split on the protected attribute, encoder
/// fitted on train only, train transformed in the training phase and test in
/// the evaluation phase, model trained on train, metrics computed on the test
/// split.  Throws on unusable configurations; the sweep drivers catch and
/// record such failures.
SweepRecord run_pipeline(const Dataset& data, const PipelineSpec& spec,
                         FairnessReport* out_report = nullptr);

/// Loads or samples the configured data and applies the configured
/// concatenation (producing a column named by joining the attribute names
/// with '|').
Dataset prepare_data(const ExperimentConfig& config);

/// One record per encoder entry at its fixed regularization strengths.
std::vector<SweepRecord> run_audit(const ExperimentConfig& config, Exec exec = Exec::parallel);

/// Grid expansion: entries marked for a sweep produce one record per grid
/// value (ascending); fixed entries produce exactly one record.  Grid points
/// run independently; a failing point is recorded, not fatal.
std::vector<SweepRecord> run_sweep(const ExperimentConfig& config, Exec exec = Exec::parallel);

struct Arrangement {
    std::string attribute;
    std::string reference;
    std::vector<SweepRecord> records;  // one per encoder entry
};

struct IntersectFlag {
    std::string encoder;
    double concat_violation = 0.0;           // max |EOF gap| of the joined attribute
    std::vector<double> single_violations;   // per single attribute
    bool amplified = false;  // concat violation strictly exceeds every single one
};

struct IntersectionalReport {
    std::vector<Arrangement> singles;
    Arrangement concatenated;
    std::vector<IntersectFlag> flags;
};

/// Audits every protected attribute alone and their '|'-concatenation under
/// the same encoders and model, and flags encoders whose joined-attribute
/// violation exceeds all single-attribute ones.
IntersectionalReport run_intersectional(const ExperimentConfig& config,
                                        Exec exec = Exec::parallel);

// --- result emission -------------------------------------------------------

nlohmann::ordered_json record_to_json(const SweepRecord& r);
SweepRecord record_from_json(const nlohmann::json& doc);

/// Structured result document: tool version, config echo, records.
nlohmann::ordered_json results_to_json(const ExperimentConfig& config,
                                       const std::vector<SweepRecord>& records);
std::vector<SweepRecord> records_from_results_json(const nlohmann::json& doc);

/// Tab-separated table, one line per record after a fixed header; nested
/// per-group fields are embedded as compact JSON cells.  Numbers are printed
/// so that parsing them back is lossless.
std::string records_to_tabular(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> records_from_tabular(const std::string& text);

nlohmann::ordered_json intersectional_to_json(const ExperimentConfig& config,
                                              const IntersectionalReport& report);

}  // namespace fairenc
