#include "fairenc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "fairenc/rng.hpp"

namespace fairenc {

void PopulationSpec::validate() const {
    if (groups.empty()) throw std::invalid_argument("population: no groups");
    if (n < 1) throw std::invalid_argument("population: n must be >= 1");
    double prior_sum = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        if (g.name.empty()) throw std::invalid_argument("population: empty group name");
        if (!(g.prior > 0.0) || !std::isfinite(g.prior))
            throw std::invalid_argument("population: prior of '" + g.name + "' must be > 0");
        if (g.posterior < 0.0 || g.posterior > 1.0 || !std::isfinite(g.posterior))
            throw std::invalid_argument("population: posterior of '" + g.name +
                                        "' must lie in [0,1]");
        for (std::size_t j = i + 1; j < groups.size(); ++j)
            if (groups[j].name == g.name)
                throw std::invalid_argument("population: duplicate group name '" + g.name + "'");
        prior_sum += g.prior;
    }
    if (std::abs(prior_sum - 1.0) > 1e-9)
        throw std::invalid_argument("population: priors must sum to 1");
}

Dataset sample_population(const PopulationSpec& spec) {
    spec.validate();
    auto rng = make_rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::string> group_col(spec.n);
    std::vector<std::uint8_t> label_col(spec.n);
    for (std::size_t r = 0; r < spec.n; ++r) {
        const double u = unit(rng);
        double acc = 0.0;
        std::size_t pick = spec.groups.size() - 1;
        for (std::size_t g = 0; g < spec.groups.size(); ++g) {
            acc += spec.groups[g].prior;
            if (u < acc) {
                pick = g;
                break;
            }
        }
        group_col[r] = spec.groups[pick].name;
        label_col[r] = unit(rng) < spec.groups[pick].posterior ? 1 : 0;
    }
    return DatasetBuilder()
        .categorical("group", ColumnRole::protected_attribute, group_col)
        .target("label", std::move(label_col))
        .build();
}

Dataset sample_population_counts(const std::vector<PopulationGroup>& groups,
                                 const std::vector<std::size_t>& counts, std::uint64_t seed) {
    if (groups.empty() || groups.size() != counts.size())
        throw std::invalid_argument("sample_population_counts: group/count size mismatch");
    std::vector<std::string> group_col;
    std::vector<std::uint8_t> label_col;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (counts[g] == 0)
            throw std::invalid_argument("sample_population_counts: zero count for group '" +
                                        groups[g].name + "'");
        auto rng = make_rng(seed, g);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t r = 0; r < counts[g]; ++r) {
            group_col.push_back(groups[g].name);
            label_col.push_back(unit(rng) < groups[g].posterior ? 1 : 0);
        }
    }
    return DatasetBuilder()
        .categorical("group", ColumnRole::protected_attribute, group_col)
        .target("label", std::move(label_col))
        .build();
}

Encoder perfect_encoding(const PopulationSpec& spec) {
    spec.validate();
    std::vector<std::pair<std::string, double>> values;
    double prior = 0.0;
    for (const auto& g : spec.groups) {
        values.emplace_back(g.name, g.posterior);
        prior += g.prior * g.posterior;
    }
    return Encoder::from_values("group", values, prior);
}

double bayes_error(const PopulationSpec& spec) {
    spec.validate();
    double err = 0.0;
    for (const auto& g : spec.groups) err += g.prior * std::min(g.posterior, 1.0 - g.posterior);
    return err;
}

double constant_prediction_error(const PopulationSpec& spec, int constant_label) {
    spec.validate();
    if (constant_label != 0 && constant_label != 1)
        throw std::invalid_argument("constant_prediction_error: label must be 0 or 1");
    double err = 0.0;
    for (const auto& g : spec.groups)
        err += g.prior * (constant_label == 1 ? 1.0 - g.posterior : g.posterior);
    return err;
}

int bayes_threshold_label(double encoded_value) { return encoded_value > 0.5 ? 1 : 0; }

MetricResult perfect_eof(const PopulationSpec& spec, const std::string& reference) {
    spec.validate();
    const PopulationGroup* ref = nullptr;
    for (const auto& g : spec.groups)
        if (g.name == reference) ref = &g;
    if (ref == nullptr)
        throw std::invalid_argument("perfect_eof: unknown reference group '" + reference + "'");
    const int ref_label = bayes_threshold_label(ref->posterior);
    MetricResult out;
    for (const auto& g : spec.groups) {
        if (g.name == reference) continue;
        out.values.push_back(
            {g.name, static_cast<double>(bayes_threshold_label(g.posterior) - ref_label)});
    }
    return out;
}

double hoeffding_bound(std::size_t n_i, double eps) {
    if (n_i < 1) throw std::invalid_argument("hoeffding_bound: n_i must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("hoeffding_bound: eps must be > 0");
    return 2.0 * std::exp(-2.0 * static_cast<double>(n_i) * eps * eps);
}

double estimator_variance(double p, std::size_t n_i) {
    if (n_i < 1) throw std::invalid_argument("estimator_variance: n_i must be >= 1");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("estimator_variance: p must lie in [0,1]");
    return p * (1.0 - p) / static_cast<double>(n_i);
}

std::vector<double> sample_rate_draws(std::size_t trials, std::size_t n_i, double p,
                                      std::uint64_t base_seed, Exec exec) {
    if (trials == 0) throw std::invalid_argument("sample_rate_draws: trials must be >= 1");
    if (n_i == 0) throw std::invalid_argument("sample_rate_draws: n_i must be >= 1");
    std::vector<double> draws(trials);
    parallel_for(trials, exec, [&](std::size_t t) {
        auto rng = make_rng(base_seed, t);
        std::binomial_distribution<long> binom(static_cast<long>(n_i), p);
        draws[t] = static_cast<double>(binom(rng)) / static_cast<double>(n_i);
    });
    return draws;
}

double estimation_gap_trial(std::size_t n_ref, std::size_t n_cmp, double p, double smoothing_m,
                            std::uint64_t seed) {
    std::vector<PopulationGroup> groups = {{"ref", 0.5, p}, {"cmp", 0.5, p}};
    Dataset sample = sample_population_counts(groups, {n_ref, n_cmp}, seed);
    EncoderConfig config;
    config.method = EncoderMethod::target;
    config.smoothing_m = smoothing_m;
    Encoder enc = Encoder::fit(config, sample, "group");
    const int ref_label = bayes_threshold_label(enc.encoded_value("ref"));
    const int cmp_label = bayes_threshold_label(enc.encoded_value("cmp"));
    return static_cast<double>(cmp_label - ref_label);
}

std::vector<double> estimation_gap_study(std::size_t trials, std::size_t n_ref, std::size_t n_cmp,
                                         double p, double smoothing_m, std::uint64_t base_seed,
                                         Exec exec) {
    if (trials == 0) throw std::invalid_argument("estimation_gap_study: trials must be >= 1");
    std::vector<double> gaps(trials);
    parallel_for(trials, exec, [&](std::size_t t) {
        gaps[t] = estimation_gap_trial(n_ref, n_cmp, p, smoothing_m, mix_seed(base_seed, t));
    });
    return gaps;
}

BiasDecomposition decompose_bias(const PopulationSpec& spec, const std::string& reference,
                                 const FairnessReport& pipeline, const std::string& metric,
                                 std::optional<double> score_at_prior) {
    spec.validate();
    const PopulationGroup* ref = nullptr;
    for (const auto& g : spec.groups)
        if (g.name == reference) ref = &g;
    if (ref == nullptr)
        throw std::invalid_argument("decompose_bias: unknown reference group '" + reference + "'");

    BiasDecomposition out;
    out.metric = metric;
    out.score_at_prior = score_at_prior;
    const int ref_label = bayes_threshold_label(ref->posterior);
    double irreducible = 0.0;
    if (metric == "eof" || metric == "aao") {
        // under the idealized pipeline TPR and FPR both equal the group's
        // constant predicted label, so both gaps coincide
        for (const auto& g : spec.groups) {
            if (g.name == reference) continue;
            irreducible += std::abs(
                static_cast<double>(bayes_threshold_label(g.posterior) - ref_label));
        }
        out.total = metric == "eof" ? pipeline.l_eof : pipeline.l_aao;
    } else if (metric == "dp") {
        for (const auto& g : spec.groups) {
            if (g.name == reference) continue;
            irreducible += std::abs(g.posterior - ref->posterior);
        }
        out.total = pipeline.l_dp;
    } else {
        throw std::invalid_argument("decompose_bias: unknown metric '" + metric +
                                    "' (expected eof, dp or aao)");
    }
    out.irreducible = irreducible;
    out.reducible = out.total - out.irreducible;
    return out;
}

}  // namespace fairenc
