#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairenc/dataset.hpp"

namespace fairenc {

/// Scores in (0,1) plus hard labels obtained with the strict rule
/// score > 1/2 (a score of exactly 1/2 maps to label 0).
struct Prediction {
    std::vector<double> scores;
    std::vector<int> labels;
};

/// Row-aligned group membership for one attribute, enumerated in
/// first-appearance order of the data the groups were built from.
struct Groups {
    std::vector<int> codes;          // per row, index into names
    std::vector<std::string> names;  // group order
    int reference = 0;               // index into names
};

/// Builds Groups from a categorical column; errors when the reference
/// category does not occur in the data.
Groups make_groups(const Dataset& data, const GroupSpec& spec);

struct GroupValue {
    std::string group;
    double value = 0.0;
};

struct GroupSkip {
    std::string group;
    std::string reason;
};

/// Per-group disparity against the reference, with groups that lack a
/// required outcome class reported as skipped rather than imputed.
struct MetricResult {
    std::vector<GroupValue> values;
    std::vector<GroupSkip> skipped;
};

/// Area under the ROC curve by midrank statistics; tied scores contribute
/// one half.  Errors on single-class labels.
double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);

/// Exact first-order Wasserstein distance between two score samples via the
/// quantile-function integral on the sorted values.
double wasserstein1(std::vector<double> a, std::vector<double> b);

/// True-positive-rate gap TPR_i - TPR_ref per non-reference group.  Groups
/// without positives are skipped; a reference without positives is an error.
MetricResult equal_opportunity(const std::vector<int>& predicted,
                               const std::vector<std::uint8_t>& labels, const Groups& groups);

/// Wasserstein-1 distance between each group's score sample and the
/// reference's.
MetricResult demographic_parity(const std::vector<double>& scores, const Groups& groups);

/// (|FPR_i - FPR_ref| + |TPR_i - TPR_ref|) / 2 per non-reference group.
/// Groups missing either class are skipped; a reference missing either class
/// is an error.
MetricResult average_absolute_odds(const std::vector<int>& predicted,
                                   const std::vector<std::uint8_t>& labels, const Groups& groups);

/// Unweighted sum of absolute per-group values; errors when every comparison
/// group was skipped.
double aggregate(const MetricResult& result);

/// Largest absolute per-group value; errors when every group was skipped.
double max_abs(const MetricResult& result);

/// Outcome statistics for one group.  Rates that are undefined for the group
/// (no positives, no negatives, single-class scores) stay empty.
struct GroupOutcome {
    std::string group;
    std::size_t n = 0;
    std::size_t positives = 0;
    std::optional<double> tpr;
    std::optional<double> fpr;
    std::optional<double> auc;
};

struct FairnessReport {
    std::string reference;
    std::vector<GroupOutcome> outcomes;  // reference included
    MetricResult eof;
    MetricResult dp;
    MetricResult aao;
    double l_eof = 0, l_dp = 0, l_aao = 0;
    double max_abs_eof = 0, max_abs_dp = 0, max_abs_aao = 0;
};

/// Runs all three disparity metrics plus per-group outcome statistics over
/// one prediction set.
FairnessReport fairness_report(const Prediction& pred, const std::vector<std::uint8_t>& labels,
                               const Groups& groups);

}  // namespace fairenc
