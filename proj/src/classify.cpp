#include "seizurewave/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "seizurewave/detail/parallel.hpp"
#include "seizurewave/detail/rng.hpp"

namespace seizurewave {

namespace {

constexpr int kModelVersion = 1;
constexpr const char* kModelFormat = "seizurewave-forest";

/// Cheapest achievable expected cost for a node with the given class counts
/// (the node predicts whichever class is cheaper).
double node_cost(double n_seiz, double n_non, const CostMatrix& c) {
    const double cost_predict_seizure = n_seiz * c.tp + n_non * c.fp;
    const double cost_predict_non = n_seiz * c.fn + n_non * c.tn;
    return std::min(cost_predict_seizure, cost_predict_non);
}

struct TrainingView {
    const std::vector<FeatureRecord>* records;
    const std::vector<std::size_t>* order;  // canonical order (sorted + shuffled)

    const FeatureRecord& at(std::size_t pos) const { return (*records)[(*order)[pos]]; }
};

struct TreeBuilder {
    const TrainingView& view;
    const CostMatrix& cost;
    const ForestHyperparams& hp;
    std::size_t n_features;
    std::size_t features_per_split;
    detail::Rng rng;
    DecisionTree tree;

    // `samples` holds positions into the canonical order (bootstrap indices).
    int build_node(std::vector<std::size_t>& samples, int depth) {
        double n_seiz = 0.0;
        double n_non = 0.0;
        for (std::size_t pos : samples) {
            (view.at(pos).label == Label::seizure ? n_seiz : n_non) += 1.0;
        }

        const int index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(index)].n_seizure =
            static_cast<std::uint32_t>(n_seiz);
        tree.nodes[static_cast<std::size_t>(index)].n_non_seizure =
            static_cast<std::uint32_t>(n_non);

        const bool pure = n_seiz == 0.0 || n_non == 0.0;
        const bool depth_capped = hp.max_depth > 0 && depth >= hp.max_depth;
        if (pure || depth_capped || samples.size() < 2 * static_cast<std::size_t>(hp.min_leaf)) {
            return index;
        }

        const double parent_cost = node_cost(n_seiz, n_non, cost);

        // Feature subsample: first k entries of a seeded shuffle.
        std::vector<std::size_t> candidates(n_features);
        std::iota(candidates.begin(), candidates.end(), 0);
        detail::shuffle(rng, candidates);
        candidates.resize(features_per_split);

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_gain = 1e-12;

        std::vector<std::pair<double, bool>> column(samples.size());  // (value, is_seizure)
        for (std::size_t f : candidates) {
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const FeatureRecord& r = view.at(samples[i]);
                column[i] = {r.values[f], r.label == Label::seizure};
            }
            std::sort(column.begin(), column.end());

            double left_seiz = 0.0;
            double left_non = 0.0;
            for (std::size_t i = 0; i + 1 < column.size(); ++i) {
                (column[i].second ? left_seiz : left_non) += 1.0;
                if (column[i].first == column[i + 1].first) continue;
                const std::size_t n_left = i + 1;
                const std::size_t n_right = column.size() - n_left;
                if (n_left < static_cast<std::size_t>(hp.min_leaf) ||
                    n_right < static_cast<std::size_t>(hp.min_leaf)) {
                    continue;
                }
                const double gain =
                    parent_cost - node_cost(left_seiz, left_non, cost) -
                    node_cost(n_seiz - left_seiz, n_non - left_non, cost);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = column[i].first +
                                     0.5 * (column[i + 1].first - column[i].first);
                }
            }
        }

        if (best_feature < 0) return index;

        std::vector<std::size_t> left_samples;
        std::vector<std::size_t> right_samples;
        for (std::size_t pos : samples) {
            if (view.at(pos).values[static_cast<std::size_t>(best_feature)] <= best_threshold) {
                left_samples.push_back(pos);
            } else {
                right_samples.push_back(pos);
            }
        }
        if (left_samples.empty() || right_samples.empty()) return index;  // midpoint degenerated

        samples.clear();
        samples.shrink_to_fit();

        const int left = build_node(left_samples, depth + 1);
        const int right = build_node(right_samples, depth + 1);
        auto& node = tree.nodes[static_cast<std::size_t>(index)];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = left;
        node.right = right;
        return index;
    }
};

double tree_proba(const DecisionTree& tree, std::span<const double> values) {
    std::size_t i = 0;
    for (;;) {
        const TreeNode& node = tree.nodes[i];
        if (node.feature < 0) {
            const double total = static_cast<double>(node.n_seizure) + node.n_non_seizure;
            return total > 0.0 ? static_cast<double>(node.n_seizure) / total : 0.0;
        }
        i = static_cast<std::size_t>(
            values[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                             : node.right);
    }
}

nlohmann::json cost_to_json(const CostMatrix& c) {
    return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

CostMatrix cost_from_json(const nlohmann::json& j) {
    CostMatrix c;
    c.tp = j.at("tp").get<double>();
    c.fp = j.at("fp").get<double>();
    c.fn = j.at("fn").get<double>();
    c.tn = j.at("tn").get<double>();
    return c;
}

}  // namespace

void CostMatrix::validate() const {
    if (tp < 0.0 || fp < 0.0 || fn < 0.0 || tn < 0.0) {
        throw Error("cost matrix entries must be nonnegative");
    }
    if (!(fn + fp > 0.0)) throw Error("cost matrix needs fn + fp > 0");
}

void ForestHyperparams::validate() const {
    if (n_trees < 1) throw Error("n_trees must be >= 1");
    if (max_depth < 0) throw Error("max_depth must be >= 0 (0 = unbounded)");
    if (min_leaf < 1) throw Error("min_leaf must be >= 1");
    if (feature_fraction < 0.0 || feature_fraction > 1.0) {
        throw Error("feature_fraction must lie in [0, 1] (0 = sqrt rule)");
    }
}

ForestModel train(const FeatureDataset& dataset, const CostMatrix& cost,
                  const ForestHyperparams& hp, std::uint64_t seed,
                  std::vector<std::string>* warnings) {
    cost.validate();
    hp.validate();
    if (dataset.records.size() < 2) {
        throw EmptyTrainingSet("training needs at least 2 records");
    }
    const std::size_t n_features = dataset.names.size();
    std::size_t n_seiz = 0;
    for (const auto& r : dataset.records) {
        if (!r.label) throw SchemaMismatch("training records must be labeled");
        if (r.values.size() != n_features) {
            throw SchemaMismatch("record width " + std::to_string(r.values.size()) +
                                 " does not match schema width " + std::to_string(n_features));
        }
        for (double v : r.values) {
            if (!std::isfinite(v)) {
                throw SchemaMismatch("non-finite feature value in training data");
            }
        }
        if (*r.label == Label::seizure) ++n_seiz;
    }
    if (warnings && (n_seiz == 0 || n_seiz == dataset.records.size())) {
        warnings->push_back("training data contains a single class (" +
                            to_string(n_seiz ? Label::seizure : Label::non_seizure) +
                            "); the model will always predict it");
    }

    // Canonical record order: lexicographic sort, then one seeded shuffle.
    // Bootstrap indices address positions in this sequence, so retraining on a
    // permutation of the same records reproduces the model bit-for-bit.
    std::vector<std::size_t> order(dataset.records.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ra = dataset.records[a];
        const auto& rb = dataset.records[b];
        if (ra.values != rb.values) return ra.values < rb.values;
        return static_cast<int>(*ra.label) < static_cast<int>(*rb.label);
    });
    {
        detail::Rng shuffle_rng = detail::derive_stream(seed, 0);
        detail::shuffle(shuffle_rng, order);
    }

    const TrainingView view{&dataset.records, &order};
    const std::size_t features_per_split = [&] {
        if (hp.feature_fraction > 0.0) {
            const auto k = static_cast<std::size_t>(
                std::ceil(hp.feature_fraction * static_cast<double>(n_features)));
            return std::clamp<std::size_t>(k, 1, n_features);
        }
        return std::clamp<std::size_t>(
            static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n_features)))), 1,
            n_features);
    }();

    ForestModel model;
    model.feature_names = dataset.names;
    model.hyperparams = hp;
    model.cost = cost;
    model.seed = seed;
    model.trees.resize(static_cast<std::size_t>(hp.n_trees));

    const std::size_t n = dataset.records.size();
    detail::parallel_for(model.trees.size(), [&](std::size_t t) {
        TreeBuilder builder{view, cost, hp, n_features, features_per_split,
                            detail::derive_stream(seed, t + 1), DecisionTree{}};
        std::vector<std::size_t> bootstrap(n);
        for (auto& pos : bootstrap) pos = detail::uniform_below(builder.rng, n);
        builder.build_node(bootstrap, 0);
        model.trees[t] = std::move(builder.tree);
    });
    return model;
}

double predict_proba(const ForestModel& model, std::span<const double> values) {
    if (values.size() != model.feature_names.size()) {
        throw SchemaMismatch("record width " + std::to_string(values.size()) +
                             " does not match model width " +
                             std::to_string(model.feature_names.size()));
    }
    if (model.trees.empty()) throw CorruptModel("model has no trees");
    double p = 0.0;
    for (const auto& tree : model.trees) p += tree_proba(tree, values);
    return p / static_cast<double>(model.trees.size());
}

Label predict(const ForestModel& model, std::span<const double> values) {
    const double p = predict_proba(model, values);
    const CostMatrix& c = model.cost;
    const double cost_seizure = p * c.tp + (1.0 - p) * c.fp;
    const double cost_non = p * c.fn + (1.0 - p) * c.tn;
    return cost_seizure <= cost_non ? Label::seizure : Label::non_seizure;
}

std::string serialize(const ForestModel& model) {
    nlohmann::json j;
    j["format"] = kModelFormat;
    j["version"] = kModelVersion;
    j["seed"] = model.seed;
    j["cost"] = cost_to_json(model.cost);
    j["hyperparams"] = {{"n_trees", model.hyperparams.n_trees},
                        {"max_depth", model.hyperparams.max_depth},
                        {"min_leaf", model.hyperparams.min_leaf},
                        {"feature_fraction", model.hyperparams.feature_fraction}};
    j["features"] = model.feature_names;
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : model.trees) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& node : tree.nodes) {
            nodes.push_back({{"f", node.feature},
                             {"t", node.threshold},
                             {"l", node.left},
                             {"r", node.right},
                             {"s", node.n_seizure},
                             {"n", node.n_non_seizure}});
        }
        trees.push_back({{"nodes", std::move(nodes)}});
    }
    j["trees"] = std::move(trees);
    return j.dump();
}

ForestModel deserialize(std::string_view bytes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptModel(std::string("model is not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || j.value("format", "") != kModelFormat) {
            throw CorruptModel("not a seizurewave forest model");
        }
        if (j.at("version").get<int>() != kModelVersion) {
            throw VersionMismatch("unsupported model version " + j.at("version").dump());
        }
        ForestModel model;
        model.seed = j.at("seed").get<std::uint64_t>();
        model.cost = cost_from_json(j.at("cost"));
        const auto& hp = j.at("hyperparams");
        model.hyperparams.n_trees = hp.at("n_trees").get<int>();
        model.hyperparams.max_depth = hp.at("max_depth").get<int>();
        model.hyperparams.min_leaf = hp.at("min_leaf").get<int>();
        model.hyperparams.feature_fraction = hp.at("feature_fraction").get<double>();
        model.feature_names = j.at("features").get<std::vector<std::string>>();
        for (const auto& jt : j.at("trees")) {
            DecisionTree tree;
            for (const auto& jn : jt.at("nodes")) {
                TreeNode node;
                node.feature = jn.at("f").get<int>();
                node.threshold = jn.at("t").get<double>();
                node.left = jn.at("l").get<int>();
                node.right = jn.at("r").get<int>();
                node.n_seizure = jn.at("s").get<std::uint32_t>();
                node.n_non_seizure = jn.at("n").get<std::uint32_t>();
                tree.nodes.push_back(node);
            }
            if (tree.nodes.empty()) throw CorruptModel("model tree has no nodes");
            tree.nodes.shrink_to_fit();
            // bounds-check child links so prediction cannot walk out of range
            for (const auto& node : tree.nodes) {
                if (node.feature >= 0) {
                    const bool feature_ok =
                        node.feature < static_cast<int>(model.feature_names.size());
                    const bool links_ok =
                        node.left >= 0 && node.right >= 0 &&
                        node.left < static_cast<int>(tree.nodes.size()) &&
                        node.right < static_cast<int>(tree.nodes.size());
                    if (!feature_ok || !links_ok) {
                        throw CorruptModel("model tree has dangling links");
                    }
                }
            }
            model.trees.push_back(std::move(tree));
        }
        if (model.trees.empty()) throw CorruptModel("model has no trees");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptModel(std::string("model is missing fields: ") + e.what());
    }
}

}  // namespace seizurewave
