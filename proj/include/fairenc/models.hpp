#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fairenc/encoders.hpp"
#include "fairenc/metrics.hpp"

#include "json.hpp"

namespace fairenc {

struct LogisticParams {
    double l1 = 1e-3;
    int max_iters = 500;
    double tolerance = 1e-8;
};

/// L1-penalized logistic regression trained by proximal gradient descent with
/// backtracking line search from a zero start.  The bias is unpenalized.
struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;
    LogisticParams params;
    int iterations = 0;
    double final_objective = 0.0;
    std::vector<double> objective_trace;  // penalized objective per accepted step
};

struct BoostedParams {
    int tree_count = 100;
    int max_depth = 3;
    double learning_rate = 0.1;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

/// Gradient-boosted regression trees on the logistic loss.  Each round fits a
/// tree to the residuals y - sigmoid(F) with variance-reduction splits at
/// midpoints between observed feature values; leaf values take one Newton
/// step sum(g)/sum(h).  The stage-0 score is the log-odds of the training
/// prevalence.  Training is deterministic, and split selection depends only
/// on row order statistics, so strictly increasing feature transforms leave
/// the fitted training predictions bit-identical.
struct BoostedModel {
    double base_score = 0.0;
    BoostedParams params;
    std::vector<std::vector<TreeNode>> trees;
};

using Model = std::variant<LogisticModel, BoostedModel>;

double sigmoid(double z);

/// Mean logistic loss of the linear scorer (the smooth part of the training
/// objective, without the L1 penalty).
double logistic_loss(const FeatureMatrix& x, const std::vector<std::uint8_t>& y,
                     const std::vector<double>& weights, double bias);

/// Gradient of logistic_loss with respect to weights and bias.
void logistic_gradient(const FeatureMatrix& x, const std::vector<std::uint8_t>& y,
                       const std::vector<double>& weights, double bias,
                       std::vector<double>& grad_w, double& grad_b);

LogisticModel train_logistic(const FeatureMatrix& x, const std::vector<std::uint8_t>& y,
                             const LogisticParams& params = {});

BoostedModel train_boosted(const FeatureMatrix& x, const std::vector<std::uint8_t>& y,
                           const BoostedParams& params = {});

/// Scores in (0,1) with hard labels from the strict score > 1/2 rule.
Prediction predict(const LogisticModel& model, const FeatureMatrix& x);
Prediction predict(const BoostedModel& model, const FeatureMatrix& x);
Prediction predict(const Model& model, const FeatureMatrix& x);

/// Version-tagged structured serialization; reloading yields a predictor with
/// bit-identical outputs.  The training trace is diagnostic and not stored.
nlohmann::json serialize(const Model& model);
Model deserialize(const nlohmann::json& doc);

}  // namespace fairenc
