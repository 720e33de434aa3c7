#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seizurewave/features.hpp"

namespace seizurewave {

/// Misclassification penalties. Convention follows the usual cost-matrix
/// layout: tp/fp are the costs of predicting seizure against an actual
/// seizure/non-seizure, fn/tn of predicting non-seizure.
struct CostMatrix {
    double tp = 1.0;
    double fp = 1.0;
    double fn = 15.0;
    double tn = 0.0;

    void validate() const;
    bool operator==(const CostMatrix&) const = default;
};

struct ForestHyperparams {
    int n_trees = 60;
    int max_depth = 0;               // 0 = unbounded
    int min_leaf = 2;                // minimum training records per leaf
    double feature_fraction = 0.0;   // 0 = sqrt(F)/F
    void validate() const;
    bool operator==(const ForestHyperparams&) const = default;
};

/// Axis-aligned split node; leaves (feature < 0) carry bootstrap class counts.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;  // go left iff value <= threshold
    int left = -1;
    int right = -1;
    std::uint32_t n_seizure = 0;
    std::uint32_t n_non_seizure = 0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestModel {
    std::vector<std::string> feature_names;
    std::vector<DecisionTree> trees;
    ForestHyperparams hyperparams;
    CostMatrix cost;
    std::uint64_t seed = 0;
};

/// Trains a cost-sensitive forest: bootstrap-sampled trees, feature
/// subsampling, splits chosen by maximal reduction in expected
/// misclassification cost, deterministic for a fixed seed (and invariant to
/// the order of the training records). Optional sink receives warnings such
/// as single-class input.
ForestModel train(const FeatureDataset& dataset, const CostMatrix& cost,
                  const ForestHyperparams& hp, std::uint64_t seed,
                  std::vector<std::string>* warnings = nullptr);

/// Mean leaf class distribution across trees.
double predict_proba(const ForestModel& model, std::span<const double> values);

/// Minimum-expected-cost decision: seizure iff
/// p*tp + (1-p)*fp <= p*fn + (1-p)*tn, ties resolving to seizure.
Label predict(const ForestModel& model, std::span<const double> values);

/// Versioned JSON encoding; deserialize(serialize(m)) is lossless.
std::string serialize(const ForestModel& model);
ForestModel deserialize(std::string_view bytes);

}  // namespace seizurewave
