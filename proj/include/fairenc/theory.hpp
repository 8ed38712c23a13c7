#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairenc/dataset.hpp"
#include "fairenc/encoders.hpp"
#include "fairenc/metrics.hpp"
#include "fairenc/parallel.hpp"

// Closed-form quantities and sampling studies for populations where the only
// feature is one categorical attribute.  The idealized encoding maps each
// category to its true conditional target rate p_i; classification then
// reduces to the strict threshold value > 1/2 on the encoded number.
//
// A single-column alternative to one-hot encoding would map category i to the
// number 2^i, keeping all categories separable by exact value.  It is not
// offered: learners treat a numeric column as an ordered quantity, so the
// induced order and spacing would act as spurious structure, unlike the
// indicator columns of one-hot.

namespace fairenc {

struct PopulationGroup {
    std::string name;
    double prior = 0.0;      // P(Z = z_i), > 0
    double posterior = 0.0;  // p_i = P(Y = 1 | Z = z_i), in [0,1]
};

struct PopulationSpec {
    std::vector<PopulationGroup> groups;
    std::size_t n = 0;
    std::uint64_t seed = 0;

    void validate() const;  // unique names, priors sum to 1 within 1e-9
};

/// i.i.d. sample of the population: one protected categorical column "group"
/// and one target column "label".  Deterministic per seed.
Dataset sample_population(const PopulationSpec& spec);

/// Sample with exact per-group row counts (rows blocked by group, labels
/// i.i.d. Bernoulli(p_i) from (seed, group index)).
Dataset sample_population_counts(const std::vector<PopulationGroup>& groups,
                                 const std::vector<std::size_t>& counts, std::uint64_t seed);

/// Encoder that maps each category to its true posterior p_i; the prior is
/// the population target rate sum(prior_i * p_i).
Encoder perfect_encoding(const PopulationSpec& spec);

/// Lowest achievable misclassification rate: sum(prior_i * min(p_i, 1-p_i)).
double bayes_error(const PopulationSpec& spec);

/// Error of predicting `constant_label` for everyone.
double constant_prediction_error(const PopulationSpec& spec, int constant_label);

/// Strict-threshold label assigned to an encoded value.
int bayes_threshold_label(double encoded_value);

/// Opportunity gaps under the idealized encoding and threshold classifier.
/// Each value lies in {-1, 0, +1}: zero exactly when p_i and p_ref sit on the
/// same side of 1/2, otherwise the sign of the side change.
MetricResult perfect_eof(const PopulationSpec& spec, const std::string& reference);

/// Tail bound 2 exp(-2 n_i eps^2) on P(|p_hat_i - p_i| >= eps).
double hoeffding_bound(std::size_t n_i, double eps);

/// Sampling variance p (1 - p) / n_i of the empirical category rate.
double estimator_variance(double p, std::size_t n_i);

/// Monte Carlo draws of the empirical rate p_hat over `trials` independent
/// samples of size n_i; trial t uses the generator derived from
/// (base_seed, t), so results are independent of execution order.
std::vector<double> sample_rate_draws(std::size_t trials, std::size_t n_i, double p,
                                      std::uint64_t base_seed, Exec exec = Exec::parallel);

/// One estimation-noise trial for a two-group population with a shared
/// posterior p: draws exact-size samples (reference n_ref, comparison n_cmp),
/// fits the target encoder with smoothing strength m on them, applies the
/// strict-threshold classifier to the fitted values and returns the signed
/// opportunity gap of the comparison group.  With a shared p the idealized
/// gap is zero, so any nonzero return is estimation-induced.
double estimation_gap_trial(std::size_t n_ref, std::size_t n_cmp, double p, double smoothing_m,
                            std::uint64_t seed);

/// Runs estimation_gap_trial over (base_seed, t) for t < trials.
std::vector<double> estimation_gap_study(std::size_t trials, std::size_t n_ref, std::size_t n_cmp,
                                         double p, double smoothing_m, std::uint64_t base_seed,
                                         Exec exec = Exec::parallel);

/// Split of an observed aggregate disparity into the share already present
/// under the idealized encoding (irreducible) and the remainder introduced by
/// estimation and modeling (reducible, possibly negative).
struct BiasDecomposition {
    std::string metric;  // "eof", "dp" or "aao"
    double irreducible = 0.0;
    double total = 0.0;
    double reducible = 0.0;
    std::optional<double> score_at_prior;  // trained score at the prior encoding, when probed
};

BiasDecomposition decompose_bias(const PopulationSpec& spec, const std::string& reference,
                                 const FairnessReport& pipeline, const std::string& metric,
                                 std::optional<double> score_at_prior = {});

}  // namespace fairenc
