#include "fairenc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fairenc {

namespace {

struct Tally {
    std::size_t n = 0, pos = 0, tp = 0, fp = 0;
    std::size_t neg() const { return n - pos; }
    bool has_pos() const { return pos > 0; }
    bool has_neg() const { return pos < n; }
    double tpr() const { return static_cast<double>(tp) / static_cast<double>(pos); }
    double fpr() const { return static_cast<double>(fp) / static_cast<double>(neg()); }
};

std::vector<Tally> tally_groups(const std::vector<int>& predicted,
                                const std::vector<std::uint8_t>& labels, const Groups& groups) {
    if (predicted.size() != labels.size() || predicted.size() != groups.codes.size())
        throw std::invalid_argument("metrics: prediction/label/group length mismatch");
    if (predicted.empty()) throw std::invalid_argument("metrics: empty input");
    std::vector<Tally> t(groups.names.size());
    for (std::size_t r = 0; r < predicted.size(); ++r) {
        auto& g = t[groups.codes[r]];
        ++g.n;
        if (labels[r]) {
            ++g.pos;
            if (predicted[r]) ++g.tp;
        } else if (predicted[r]) {
            ++g.fp;
        }
    }
    return t;
}

}  // namespace

Groups make_groups(const Dataset& data, const GroupSpec& spec) {
    int col = data.require_column(spec.attribute);
    const auto& codes = data.codes(col);
    const auto& dict = data.dictionary(col);

    Groups g;
    g.codes.resize(codes.size());
    std::vector<int> slot(dict.size(), -1);
    for (std::size_t r = 0; r < codes.size(); ++r) {
        if (slot[codes[r]] < 0) {
            slot[codes[r]] = static_cast<int>(g.names.size());
            g.names.push_back(dict[codes[r]]);
        }
        g.codes[r] = slot[codes[r]];
    }
    auto it = std::find(g.names.begin(), g.names.end(), spec.reference);
    if (it == g.names.end())
        throw std::runtime_error("metrics: reference group '" + spec.reference +
                                 "' does not occur in the data");
    g.reference = static_cast<int>(it - g.names.begin());
    return g;
}

double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("auc: score/label length mismatch");
    if (scores.empty()) throw std::invalid_argument("auc: empty input");
    const std::size_t n = scores.size();
    std::size_t n_pos = std::accumulate(labels.begin(), labels.end(), std::size_t{0});
    if (n_pos == 0 || n_pos == n) throw std::runtime_error("auc: single-class labels");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // midranks over runs of tied scores
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k)
            if (labels[order[k]]) rank_sum_pos += midrank;
        i = j + 1;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n - n_pos);
    const double u = rank_sum_pos - np * (np + 1.0) / 2.0;
    return u / (np * nn);
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("wasserstein1: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n = a.size(), m = b.size();
    // quantile axis discretized in units of 1/(n*m); breakpoint comparisons stay
    // in integers so the walk is exact
    const std::uint64_t total = static_cast<std::uint64_t>(n) * m;
    std::uint64_t cur = 0;
    std::size_t i = 0, j = 0;
    double acc = 0.0;
    while (cur < total) {
        const std::uint64_t next_a = static_cast<std::uint64_t>(i + 1) * m;
        const std::uint64_t next_b = static_cast<std::uint64_t>(j + 1) * n;
        const std::uint64_t next = std::min(next_a, next_b);
        acc += static_cast<double>(next - cur) * std::abs(a[i] - b[j]);
        if (next == next_a) ++i;
        if (next == next_b) ++j;
        cur = next;
    }
    return acc / static_cast<double>(total);
}

MetricResult equal_opportunity(const std::vector<int>& predicted,
                               const std::vector<std::uint8_t>& labels, const Groups& groups) {
    auto t = tally_groups(predicted, labels, groups);
    const auto& ref = t[groups.reference];
    if (!ref.has_pos())
        throw std::runtime_error("equal_opportunity: reference group '" +
                                 groups.names[groups.reference] + "' has no positives");
    MetricResult out;
    for (std::size_t g = 0; g < t.size(); ++g) {
        if (static_cast<int>(g) == groups.reference) continue;
        if (!t[g].has_pos()) {
            out.skipped.push_back({groups.names[g], "no positives in group"});
            continue;
        }
        out.values.push_back({groups.names[g], t[g].tpr() - ref.tpr()});
    }
    return out;
}

MetricResult demographic_parity(const std::vector<double>& scores, const Groups& groups) {
    if (scores.size() != groups.codes.size())
        throw std::invalid_argument("demographic_parity: score/group length mismatch");
    if (scores.empty()) throw std::invalid_argument("demographic_parity: empty input");
    std::vector<std::vector<double>> by_group(groups.names.size());
    for (std::size_t r = 0; r < scores.size(); ++r) by_group[groups.codes[r]].push_back(scores[r]);
    const auto& ref = by_group[groups.reference];
    if (ref.empty())
        throw std::runtime_error("demographic_parity: reference group has no rows");
    MetricResult out;
    for (std::size_t g = 0; g < by_group.size(); ++g) {
        if (static_cast<int>(g) == groups.reference) continue;
        if (by_group[g].empty()) {
            out.skipped.push_back({groups.names[g], "no rows in group"});
            continue;
        }
        out.values.push_back({groups.names[g], wasserstein1(by_group[g], ref)});
    }
    return out;
}

MetricResult average_absolute_odds(const std::vector<int>& predicted,
                                   const std::vector<std::uint8_t>& labels, const Groups& groups) {
    auto t = tally_groups(predicted, labels, groups);
    const auto& ref = t[groups.reference];
    if (!ref.has_pos() || !ref.has_neg())
        throw std::runtime_error("average_absolute_odds: reference group '" +
                                 groups.names[groups.reference] + "' lacks an outcome class");
    MetricResult out;
    for (std::size_t g = 0; g < t.size(); ++g) {
        if (static_cast<int>(g) == groups.reference) continue;
        if (!t[g].has_pos()) {
            out.skipped.push_back({groups.names[g], "no positives in group"});
            continue;
        }
        if (!t[g].has_neg()) {
            out.skipped.push_back({groups.names[g], "no negatives in group"});
            continue;
        }
        const double gap = (std::abs(t[g].fpr() - ref.fpr()) + std::abs(t[g].tpr() - ref.tpr())) / 2.0;
        out.values.push_back({groups.names[g], gap});
    }
    return out;
}

double aggregate(const MetricResult& result) {
    if (result.values.empty())
        throw std::runtime_error("aggregate: no usable comparison groups");
    double sum = 0.0;
    for (const auto& v : result.values) sum += std::abs(v.value);
    return sum;
}

double max_abs(const MetricResult& result) {
    if (result.values.empty())
        throw std::runtime_error("max_abs: no usable comparison groups");
    double best = 0.0;
    for (const auto& v : result.values) best = std::max(best, std::abs(v.value));
    return best;
}

FairnessReport fairness_report(const Prediction& pred, const std::vector<std::uint8_t>& labels,
                               const Groups& groups) {
    if (pred.scores.size() != labels.size() || pred.labels.size() != labels.size())
        throw std::invalid_argument("fairness_report: prediction/label length mismatch");
    FairnessReport rep;
    rep.reference = groups.names[groups.reference];

    auto t = tally_groups(pred.labels, labels, groups);
    std::vector<std::vector<double>> g_scores(groups.names.size());
    std::vector<std::vector<std::uint8_t>> g_labels(groups.names.size());
    for (std::size_t r = 0; r < labels.size(); ++r) {
        g_scores[groups.codes[r]].push_back(pred.scores[r]);
        g_labels[groups.codes[r]].push_back(labels[r]);
    }
    for (std::size_t g = 0; g < groups.names.size(); ++g) {
        GroupOutcome o;
        o.group = groups.names[g];
        o.n = t[g].n;
        o.positives = t[g].pos;
        if (t[g].has_pos()) o.tpr = t[g].tpr();
        if (t[g].has_neg()) o.fpr = t[g].fpr();
        if (t[g].has_pos() && t[g].has_neg()) o.auc = auc(g_scores[g], g_labels[g]);
        rep.outcomes.push_back(std::move(o));
    }

    rep.eof = equal_opportunity(pred.labels, labels, groups);
    rep.dp = demographic_parity(pred.scores, groups);
    rep.aao = average_absolute_odds(pred.labels, labels, groups);
    rep.l_eof = aggregate(rep.eof);
    rep.l_dp = aggregate(rep.dp);
    rep.l_aao = aggregate(rep.aao);
    rep.max_abs_eof = max_abs(rep.eof);
    rep.max_abs_dp = max_abs(rep.dp);
    rep.max_abs_aao = max_abs(rep.aao);
    return rep;
}

}  // namespace fairenc
