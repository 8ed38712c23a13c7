#include "fairenc/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fairenc {

namespace {

void check_training_input(const FeatureMatrix& x, const std::vector<std::uint8_t>& y) {
    if (x.rows != y.size()) throw std::invalid_argument("train: matrix/label length mismatch");
    if (x.rows < 2) throw std::invalid_argument("train: need at least two rows");
    for (double v : x.values)
        if (!std::isfinite(v)) throw std::invalid_argument("train: non-finite feature value");
    const std::size_t pos = std::accumulate(y.begin(), y.end(), std::size_t{0});
    if (pos == 0 || pos == y.size()) throw std::runtime_error("train: single-class labels");
}

double log1pexp(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

double l1_norm(const std::vector<double>& w) {
    double s = 0.0;
    for (double v : w) s += std::abs(v);
    return s;
}

}  // namespace

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double logistic_loss(const FeatureMatrix& x, const std::vector<std::uint8_t>& y,
                     const std::vector<double>& weights, double bias) {
    double sum = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        double z = bias;
        for (std::size_t c = 0; c < x.cols; ++c) z += weights[c] * x.at(r, c);
        sum += log1pexp(z) - (y[r] ? z : 0.0);
    }
    return sum / static_cast<double>(x.rows);
}

void logistic_gradient(const FeatureMatrix& x, const std::vector<std::uint8_t>& y,
                       const std::vector<double>& weights, double bias,
                       std::vector<double>& grad_w, double& grad_b) {
    grad_w.assign(x.cols, 0.0);
    grad_b = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        double z = bias;
        for (std::size_t c = 0; c < x.cols; ++c) z += weights[c] * x.at(r, c);
        const double resid = sigmoid(z) - static_cast<double>(y[r]);
        grad_b += resid;
        for (std::size_t c = 0; c < x.cols; ++c) grad_w[c] += resid * x.at(r, c);
    }
    const double inv_n = 1.0 / static_cast<double>(x.rows);
    grad_b *= inv_n;
    for (double& g : grad_w) g *= inv_n;
}

LogisticModel train_logistic(const FeatureMatrix& x, const std::vector<std::uint8_t>& y,
                             const LogisticParams& params) {
    check_training_input(x, y);
    if (params.l1 < 0.0 || !std::isfinite(params.l1))
        throw std::invalid_argument("train_logistic: l1 must be finite and >= 0");
    if (params.max_iters < 1) throw std::invalid_argument("train_logistic: max_iters must be >= 1");
    if (!(params.tolerance > 0.0)) throw std::invalid_argument("train_logistic: tolerance must be > 0");

    LogisticModel m;
    m.params = params;
    m.weights.assign(x.cols, 0.0);
    m.bias = 0.0;

    double f = logistic_loss(x, y, m.weights, m.bias);
    double objective = f + params.l1 * l1_norm(m.weights);
    m.objective_trace.push_back(objective);

    std::vector<double> grad_w, cand_w(x.cols);
    double grad_b = 0.0;
    double step = 1.0;
    for (int iter = 1; iter <= params.max_iters; ++iter) {
        logistic_gradient(x, y, m.weights, m.bias, grad_w, grad_b);

        double cand_b = 0.0, f_cand = 0.0;
        while (true) {
            for (std::size_t c = 0; c < x.cols; ++c)
                cand_w[c] = soft_threshold(m.weights[c] - step * grad_w[c], step * params.l1);
            cand_b = m.bias - step * grad_b;
            f_cand = logistic_loss(x, y, cand_w, cand_b);

            double linear = 0.0, sq = 0.0;
            for (std::size_t c = 0; c < x.cols; ++c) {
                const double d = cand_w[c] - m.weights[c];
                linear += grad_w[c] * d;
                sq += d * d;
            }
            const double db = cand_b - m.bias;
            linear += grad_b * db;
            sq += db * db;
            if (f_cand <= f + linear + sq / (2.0 * step) + 1e-15 * std::max(1.0, std::abs(f)))
                break;
            step *= 0.5;
            if (step < 1e-18)
                throw std::runtime_error("train_logistic: line search failed to make progress");
        }

        const double cand_objective = f_cand + params.l1 * l1_norm(cand_w);
        m.weights = cand_w;
        m.bias = cand_b;
        f = f_cand;
        m.iterations = iter;
        m.objective_trace.push_back(cand_objective);
        const double improvement = objective - cand_objective;
        objective = cand_objective;
        if (improvement < params.tolerance) break;
        step = std::min(step * 2.0, 1e8);
    }
    m.final_objective = objective;
    return m;
}

namespace {

struct TreeBuilder {
    const FeatureMatrix& x;
    const std::vector<double>& g;
    const std::vector<double>& h;
    int max_depth;
    std::vector<TreeNode> nodes;

    double leaf_value(const std::vector<std::size_t>& rows) const {
        double gs = 0.0, hs = 0.0;
        for (std::size_t r : rows) {
            gs += g[r];
            hs += h[r];
        }
        return hs > 1e-12 ? gs / hs : 0.0;
    }

    // SSE reduction on the residuals; depends only on the row partition, so
    // strictly increasing feature transforms select identical splits
    int build(const std::vector<std::size_t>& rows, int depth) {
        const int id = static_cast<int>(nodes.size());
        nodes.push_back({});
        nodes[id].value = leaf_value(rows);
        if (depth >= max_depth || rows.size() < 2) return id;

        double total_g = 0.0;
        for (std::size_t r : rows) total_g += g[r];
        const double n_all = static_cast<double>(rows.size());
        const double base = total_g * total_g / n_all;

        double best_gain = 1e-12;
        int best_feature = -1;
        double best_threshold = 0.0;
        std::vector<std::size_t> order;
        for (std::size_t f = 0; f < x.cols; ++f) {
            order = rows;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double va = x.at(a, f), vb = x.at(b, f);
                return va < vb || (va == vb && a < b);
            });
            double left_g = 0.0;
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                left_g += g[order[k]];
                const double lo = x.at(order[k], f), hi = x.at(order[k + 1], f);
                if (lo == hi) continue;
                const double mid = (lo + hi) / 2.0;
                if (!(lo < mid)) continue;  // midpoint collapsed onto lo
                const double nl = static_cast<double>(k + 1);
                const double nr = n_all - nl;
                const double right_g = total_g - left_g;
                const double gain = left_g * left_g / nl + right_g * right_g / nr - base;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = mid;
                }
            }
        }
        if (best_feature < 0) return id;

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows)
            (x.at(r, best_feature) < best_threshold ? left_rows : right_rows).push_back(r);
        nodes[id].feature = best_feature;
        nodes[id].threshold = best_threshold;
        const int l = build(left_rows, depth + 1);
        nodes[id].left = l;
        const int rr = build(right_rows, depth + 1);
        nodes[id].right = rr;
        return id;
    }
};

double tree_predict(const std::vector<TreeNode>& nodes, const FeatureMatrix& x, std::size_t row) {
    int id = 0;
    while (nodes[id].feature >= 0)
        id = x.at(row, nodes[id].feature) < nodes[id].threshold ? nodes[id].left : nodes[id].right;
    return nodes[id].value;
}

}  // namespace

BoostedModel train_boosted(const FeatureMatrix& x, const std::vector<std::uint8_t>& y,
                           const BoostedParams& params) {
    check_training_input(x, y);
    if (params.tree_count < 1) throw std::invalid_argument("train_boosted: tree_count must be >= 1");
    if (params.max_depth < 1) throw std::invalid_argument("train_boosted: max_depth must be >= 1");
    if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0))
        throw std::invalid_argument("train_boosted: learning_rate must lie in (0,1]");

    BoostedModel m;
    m.params = params;
    const double prevalence =
        static_cast<double>(std::accumulate(y.begin(), y.end(), std::size_t{0})) /
        static_cast<double>(y.size());
    m.base_score = std::log(prevalence / (1.0 - prevalence));

    const std::size_t n = x.rows;
    std::vector<double> score(n, m.base_score), g(n), h(n);
    std::vector<std::size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});

    for (int t = 0; t < params.tree_count; ++t) {
        for (std::size_t r = 0; r < n; ++r) {
            const double p = sigmoid(score[r]);
            g[r] = static_cast<double>(y[r]) - p;
            h[r] = p * (1.0 - p);
        }
        TreeBuilder builder{x, g, h, params.max_depth, {}};
        builder.build(all_rows, 0);
        for (std::size_t r = 0; r < n; ++r)
            score[r] += params.learning_rate * tree_predict(builder.nodes, x, r);
        m.trees.push_back(std::move(builder.nodes));
    }
    return m;
}

namespace {

Prediction finish_prediction(std::vector<double> scores) {
    Prediction p;
    p.labels.resize(scores.size());
    for (std::size_t r = 0; r < scores.size(); ++r) p.labels[r] = scores[r] > 0.5 ? 1 : 0;
    p.scores = std::move(scores);
    return p;
}

}  // namespace

Prediction predict(const LogisticModel& model, const FeatureMatrix& x) {
    if (x.cols != model.weights.size())
        throw std::invalid_argument("predict: feature count mismatch");
    std::vector<double> scores(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        double z = model.bias;
        for (std::size_t c = 0; c < x.cols; ++c) z += model.weights[c] * x.at(r, c);
        scores[r] = sigmoid(z);
    }
    return finish_prediction(std::move(scores));
}

Prediction predict(const BoostedModel& model, const FeatureMatrix& x) {
    std::vector<double> scores(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        double z = model.base_score;
        for (const auto& tree : model.trees)
            z += model.params.learning_rate * tree_predict(tree, x, r);
        scores[r] = sigmoid(z);
    }
    return finish_prediction(std::move(scores));
}

Prediction predict(const Model& model, const FeatureMatrix& x) {
    return std::visit([&](const auto& m) { return predict(m, x); }, model);
}

nlohmann::json serialize(const Model& model) {
    nlohmann::json doc;
    doc["format"] = "fairenc.model";
    doc["version"] = 1;
    if (std::holds_alternative<LogisticModel>(model)) {
        const auto& m = std::get<LogisticModel>(model);
        doc["family"] = "logistic";
        doc["weights"] = m.weights;
        doc["bias"] = m.bias;
        doc["l1"] = m.params.l1;
        doc["max_iters"] = m.params.max_iters;
        doc["tolerance"] = m.params.tolerance;
        doc["iterations"] = m.iterations;
        doc["final_objective"] = m.final_objective;
    } else {
        const auto& m = std::get<BoostedModel>(model);
        doc["family"] = "boosted";
        doc["base_score"] = m.base_score;
        doc["tree_count"] = m.params.tree_count;
        doc["max_depth"] = m.params.max_depth;
        doc["learning_rate"] = m.params.learning_rate;
        nlohmann::json trees = nlohmann::json::array();
        for (const auto& tree : m.trees) {
            nlohmann::json nodes = nlohmann::json::array();
            for (const auto& n : tree)
                nodes.push_back({{"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right},
                                 {"value", n.value}});
            trees.push_back(std::move(nodes));
        }
        doc["trees"] = std::move(trees);
    }
    return doc;
}

Model deserialize(const nlohmann::json& doc) {
    if (doc.value("format", "") != "fairenc.model")
        throw std::runtime_error("deserialize: not a model document");
    if (doc.value("version", 0) != 1)
        throw std::runtime_error("deserialize: unsupported model version");
    const std::string family = doc.value("family", "");
    if (family == "logistic") {
        LogisticModel m;
        m.weights = doc.at("weights").get<std::vector<double>>();
        m.bias = doc.at("bias").get<double>();
        m.params.l1 = doc.at("l1").get<double>();
        m.params.max_iters = doc.at("max_iters").get<int>();
        m.params.tolerance = doc.at("tolerance").get<double>();
        m.iterations = doc.at("iterations").get<int>();
        m.final_objective = doc.at("final_objective").get<double>();
        return m;
    }
    if (family == "boosted") {
        BoostedModel m;
        m.base_score = doc.at("base_score").get<double>();
        m.params.tree_count = doc.at("tree_count").get<int>();
        m.params.max_depth = doc.at("max_depth").get<int>();
        m.params.learning_rate = doc.at("learning_rate").get<double>();
        for (const auto& tree : doc.at("trees")) {
            std::vector<TreeNode> nodes;
            for (const auto& n : tree)
                nodes.push_back({n.at("feature").get<int>(), n.at("threshold").get<double>(),
                                 n.at("left").get<int>(), n.at("right").get<int>(),
                                 n.at("value").get<double>()});
            m.trees.push_back(std::move(nodes));
        }
        return m;
    }
    throw std::runtime_error("deserialize: unknown model family '" + family + "'");
}

}  // namespace fairenc
