#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "seizurewave/classify.hpp"

using namespace seizurewave;

namespace {

FeatureDataset make_dataset(std::vector<std::pair<std::vector<double>, Label>> rows) {
    FeatureDataset ds;
    const std::size_t width = rows.front().first.size();
    for (std::size_t i = 0; i < width; ++i) ds.names.push_back("f" + std::to_string(i));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        FeatureRecord r;
        r.epoch_index = k;
        r.values = std::move(rows[k].first);
        r.label = rows[k].second;
        ds.records.push_back(std::move(r));
    }
    return ds;
}

/// Two well-separated Gaussian blobs; seizure sits high on both features.
FeatureDataset separable_dataset(seizurewave::detail::Rng& rng, std::size_t per_class,
                                 double gap = 4.0) {
    std::vector<std::pair<std::vector<double>, Label>> rows;
    for (std::size_t i = 0; i < per_class; ++i) {
        rows.push_back({{testutil::standard_normal(rng), testutil::standard_normal(rng)},
                        Label::non_seizure});
        rows.push_back({{gap + testutil::standard_normal(rng), gap + testutil::standard_normal(rng)},
                        Label::seizure});
    }
    return make_dataset(std::move(rows));
}

/// Single-leaf forest with a fixed class distribution, for decision-rule tests.
ForestModel fixed_proba_model(std::uint32_t n_seizure, std::uint32_t n_non, CostMatrix cost) {
    ForestModel m;
    m.feature_names = {"x"};
    m.cost = cost;
    DecisionTree tree;
    TreeNode leaf;
    leaf.n_seizure = n_seizure;
    leaf.n_non_seizure = n_non;
    tree.nodes.push_back(leaf);
    m.trees.push_back(tree);
    return m;
}

const CostMatrix kPaperCost{1.0, 1.0, 15.0, 0.0};
const CostMatrix kAlternativeCost{1.0, 2.0, 2.0, 0.0};

}  // namespace

TEST_SUITE_BEGIN("classify");

TEST_CASE("cost matrix and hyperparameter validation") {
    CHECK_THROWS_AS(CostMatrix{-1.0, 1.0, 1.0, 0.0}.validate(), Error);
    CHECK_THROWS_AS((CostMatrix{1.0, 0.0, 0.0, 0.0}).validate(), Error);  // fn + fp == 0
    CHECK_NOTHROW(kPaperCost.validate());
    CHECK_NOTHROW(kAlternativeCost.validate());

    ForestHyperparams hp;
    hp.n_trees = 0;
    CHECK_THROWS_AS(hp.validate(), Error);
    hp = {};
    hp.feature_fraction = 1.5;
    CHECK_THROWS_AS(hp.validate(), Error);
}

TEST_CASE("separable data trains to zero training error") {
    auto rng = seizurewave::detail::derive_stream(71, 0);
    const auto ds = separable_dataset(rng, 40);
    ForestHyperparams hp;
    hp.n_trees = 15;
    const auto model = train(ds, kPaperCost, hp, 99);
    for (const auto& r : ds.records) CHECK(predict(model, r.values) == *r.label);
}

TEST_CASE("single-class input predicts that class and warns") {
    auto rng = seizurewave::detail::derive_stream(72, 0);
    std::vector<std::pair<std::vector<double>, Label>> rows;
    for (int i = 0; i < 10; ++i) {
        rows.push_back({{testutil::standard_normal(rng)}, Label::non_seizure});
    }
    const auto ds = make_dataset(std::move(rows));
    std::vector<std::string> warnings;
    ForestHyperparams hp;
    hp.n_trees = 5;
    const auto model = train(ds, kPaperCost, hp, 7, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("single class") != std::string::npos);
    for (const auto& r : ds.records) CHECK(predict(model, r.values) == Label::non_seizure);
}

TEST_CASE("training is deterministic and order-independent under a fixed seed") {
    auto rng = seizurewave::detail::derive_stream(73, 0);
    const auto ds = separable_dataset(rng, 30, 2.0);
    ForestHyperparams hp;
    hp.n_trees = 10;

    const auto a = serialize(train(ds, kPaperCost, hp, 1234));
    const auto b = serialize(train(ds, kPaperCost, hp, 1234));
    CHECK(a == b);

    // reversed record order, same seed -> identical model
    FeatureDataset reversed;
    reversed.names = ds.names;
    reversed.records.assign(ds.records.rbegin(), ds.records.rend());
    const auto c = serialize(train(reversed, kPaperCost, hp, 1234));
    CHECK(a == c);

    const auto d = serialize(train(ds, kPaperCost, hp, 4321));
    CHECK(a != d);
}

TEST_CASE("expected-cost decision rule") {
    SUBCASE("p = 0.1 under the high-FN costs chooses seizure") {
        // cost(seizure) = 0.1*1 + 0.9*1 = 1.0 < cost(non-seizure) = 0.1*15 = 1.5
        const auto m = fixed_proba_model(1, 9, kPaperCost);
        CHECK(predict_proba(m, std::vector<double>{0.0}) == doctest::Approx(0.1));
        CHECK(predict(m, std::vector<double>{0.0}) == Label::seizure);
    }
    SUBCASE("p = 0 predicts non-seizure whenever fp > tn") {
        const auto m = fixed_proba_model(0, 10, kPaperCost);
        CHECK(predict(m, std::vector<double>{0.0}) == Label::non_seizure);
    }
    SUBCASE("exact cost ties resolve to seizure") {
        // tp=0, fp=1, fn=1, tn=0 at p=0.5: both sides cost 0.5
        const auto m = fixed_proba_model(1, 1, CostMatrix{0.0, 1.0, 1.0, 0.0});
        CHECK(predict(m, std::vector<double>{0.0}) == Label::seizure);
    }
}

TEST_CASE("decision threshold equals fp/(fp+fn-tp) for tn = 0 costs") {
    auto check_threshold = [](const CostMatrix& cost) {
        const double p_star = cost.fp / (cost.fp + cost.fn - cost.tp);
        for (int i = 0; i <= 1000; ++i) {
            const double p = static_cast<double>(i) / 1000.0;
            const auto m = fixed_proba_model(static_cast<std::uint32_t>(i),
                                             static_cast<std::uint32_t>(1000 - i), cost);
            // brute-force expected-cost comparison
            const bool brute = p * cost.tp + (1.0 - p) * cost.fp <=
                               p * cost.fn + (1.0 - p) * cost.tn;
            const bool predicted = predict(m, std::vector<double>{0.0}) == Label::seizure;
            CHECK(predicted == brute);
            if (std::abs(p - p_star) > 1e-9) CHECK(predicted == (p >= p_star));
        }
    };
    check_threshold(kPaperCost);        // p* = 1/15
    check_threshold(kAlternativeCost);  // p* = 2/3
}

TEST_CASE("raising the FN cost never flips a seizure prediction away") {
    for (int i = 0; i <= 100; ++i) {
        const auto low = fixed_proba_model(static_cast<std::uint32_t>(i),
                                           static_cast<std::uint32_t>(100 - i), kAlternativeCost);
        auto high_cost = kAlternativeCost;
        high_cost.fn = 20.0;
        const auto high = fixed_proba_model(static_cast<std::uint32_t>(i),
                                            static_cast<std::uint32_t>(100 - i), high_cost);
        if (predict(low, std::vector<double>{0.0}) == Label::seizure) {
            CHECK(predict(high, std::vector<double>{0.0}) == Label::seizure);
        }
    }
}

TEST_CASE("serialization") {
    auto rng = seizurewave::detail::derive_stream(74, 0);
    const auto ds = separable_dataset(rng, 25, 1.5);  // overlapping enough for real trees
    ForestHyperparams hp;
    hp.n_trees = 8;
    const auto model = train(ds, kPaperCost, hp, 5);

    SUBCASE("round trip predicts identically on 1000 random records") {
        const auto restored = deserialize(serialize(model));
        CHECK(restored.feature_names == model.feature_names);
        CHECK(restored.cost == model.cost);
        CHECK(restored.hyperparams == model.hyperparams);
        for (int i = 0; i < 1000; ++i) {
            const std::vector<double> record = {4.0 * testutil::standard_normal(rng),
                                                4.0 * testutil::standard_normal(rng)};
            CHECK(predict(restored, record) == predict(model, record));
            CHECK(predict_proba(restored, record) == predict_proba(model, record));
        }
        CHECK(serialize(restored) == serialize(model));
    }

    SUBCASE("truncated bytes are CorruptModel") {
        const auto bytes = serialize(model);
        CHECK_THROWS_AS(deserialize(std::string_view(bytes).substr(0, bytes.size() / 2)),
                        CorruptModel);
        CHECK_THROWS_AS(deserialize("garbage"), CorruptModel);
        CHECK_THROWS_AS(deserialize("{}"), CorruptModel);
    }

    SUBCASE("unknown version tag is VersionMismatch") {
        auto bytes = serialize(model);
        const auto pos = bytes.find("\"version\":1");
        REQUIRE(pos != std::string::npos);
        bytes.replace(pos, 11, "\"version\":9");
        CHECK_THROWS_AS(deserialize(bytes), VersionMismatch);
    }
}

TEST_CASE("schema and input validation") {
    auto rng = seizurewave::detail::derive_stream(75, 0);
    const auto ds = separable_dataset(rng, 10);
    const auto model = train(ds, kPaperCost, ForestHyperparams{.n_trees = 3}, 2);

    SUBCASE("record width must match the model") {
        CHECK_THROWS_AS(predict(model, std::vector<double>{1.0}), SchemaMismatch);
        CHECK_THROWS_AS(predict(model, std::vector<double>{1.0, 2.0, 3.0}), SchemaMismatch);
    }

    SUBCASE("training rejects tiny, unlabeled, ragged, and non-finite inputs") {
        FeatureDataset empty;
        empty.names = {"a"};
        CHECK_THROWS_AS(train(empty, kPaperCost, {}, 1), EmptyTrainingSet);

        auto unlabeled = ds;
        unlabeled.records[3].label.reset();
        CHECK_THROWS_AS(train(unlabeled, kPaperCost, {}, 1), SchemaMismatch);

        auto ragged = ds;
        ragged.records[2].values.push_back(0.0);
        CHECK_THROWS_AS(train(ragged, kPaperCost, {}, 1), SchemaMismatch);

        auto with_nan = ds;
        with_nan.records[1].values[0] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(train(with_nan, kPaperCost, {}, 1), SchemaMismatch);
    }
}

TEST_CASE("min_leaf is respected") {
    auto rng = seizurewave::detail::derive_stream(76, 0);
    const auto ds = separable_dataset(rng, 50, 1.0);
    ForestHyperparams hp;
    hp.n_trees = 6;
    hp.min_leaf = 8;
    const auto model = train(ds, kPaperCost, hp, 3);
    for (const auto& tree : model.trees) {
        for (const auto& node : tree.nodes) {
            if (node.feature < 0) {
                CHECK(node.n_seizure + node.n_non_seizure >= 8);
            }
        }
    }
}

TEST_CASE("max_depth caps the tree height") {
    auto rng = seizurewave::detail::derive_stream(77, 0);
    const auto ds = separable_dataset(rng, 60, 0.5);  // heavy overlap forces deep trees
    ForestHyperparams hp;
    hp.n_trees = 4;
    hp.max_depth = 2;
    const auto model = train(ds, kPaperCost, hp, 3);
    for (const auto& tree : model.trees) {
        // depth <= 2 means at most 7 nodes
        CHECK(tree.nodes.size() <= 7);
    }
}

TEST_SUITE_END();
