#include <doctest.h>

#include <cmath>
#include <memory>

#include "helpers.hpp"
#include "seizurewave/features.hpp"

using namespace seizurewave;

namespace {

std::shared_ptr<Recording> recording_from_channels(std::vector<std::vector<double>> channels,
                                                   int sample_rate,
                                                   std::vector<std::string> labels = {}) {
    auto rec = std::make_shared<Recording>();
    rec->sample_rate = sample_rate;
    rec->duration_seconds =
        static_cast<double>(channels[0].size()) / static_cast<double>(sample_rate);
    for (std::size_t c = 0; c < channels.size(); ++c) {
        ChannelInfo info;
        info.label = labels.empty() ? "ch" + std::to_string(c) : labels[c];
        info.samples_per_record = sample_rate;
        rec->channels.push_back(info);
    }
    rec->samples = std::move(channels);
    return rec;
}

EpochedRecording one_epoch(std::vector<std::vector<double>> channels,
                           std::vector<std::string> labels = {}) {
    const int rate = static_cast<int>(channels[0].size());
    return segment_and_label(recording_from_channels(std::move(channels), rate, std::move(labels)),
                             SeizureAnnotation{}, 1.0);
}

// Seven channels engineered so the level-1 wavelet correlations reproduce the
// worked seven-electrode adjacency at threshold 0.125. Distinct Fourier modes
// stay orthogonal under circular filtering, so each edge gets its own
// in-band tone shared by exactly its two endpoints (correlation > 0.15) while
// non-adjacent pairs correlate at ~1e-16.
std::vector<std::vector<double>> seven_node_channels() {
    const std::size_t n = 256;
    const auto adj = testutil::seven_node_adjacency();

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = i + 1; j < 7; ++j) {
            if (adj[i][j]) edges.emplace_back(i, j);
        }
    }
    REQUIRE(edges.size() == 9);

    auto tone = [&](std::size_t cycles, double amplitude) {
        std::vector<double> x(n);
        for (std::size_t t = 0; t < n; ++t) {
            x[t] = amplitude * std::sin(2.0 * M_PI * static_cast<double>(cycles) *
                                        static_cast<double>(t) / static_cast<double>(n));
        }
        return x;
    };

    std::vector<std::vector<double>> channels(7, std::vector<double>(n, 0.0));
    for (std::size_t c = 0; c < 7; ++c) {
        const auto own = tone(90 + c, 1.0);  // 90..96 cycles: inside the 64-128 Hz band
        for (std::size_t t = 0; t < n; ++t) channels[c][t] += own[t];
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto shared = tone(97 + e, 2.0);  // 97..105 cycles
        for (std::size_t t = 0; t < n; ++t) {
            channels[edges[e].first][t] += shared[t];
            channels[edges[e].second][t] += shared[t];
        }
    }
    return channels;
}

}  // namespace

TEST_SUITE_BEGIN("features");

TEST_CASE("stats_signal worked examples") {
    SUBCASE("constant vector") {
        const auto s = stats_signal(std::vector<double>{2, 2, 2, 2});
        CHECK(s == std::array<double, 5>{2, 2, 2, 0, 4});
    }
    SUBCASE("[1,3]: population std and normalized energy") {
        const auto s = stats_signal(std::vector<double>{1, 3});
        CHECK(s[2] == 2.0);   // mean
        CHECK(s[3] == 1.0);   // std with divisor n
        CHECK(s[4] == 5.0);   // (1+9)/2
    }
    SUBCASE("[-1,1]: symmetric") {
        const auto s = stats_signal(std::vector<double>{-1, 1});
        CHECK(s[2] == 0.0);
        CHECK(s[4] == 1.0);
    }
    SUBCASE("empty input throws") {
        CHECK_THROWS_AS(stats_signal(std::vector<double>{}), EmptyInput);
    }
}

TEST_CASE("stats_degree_or_eff worked examples") {
    SUBCASE("degree vector of the seven-electrode example") {
        const auto s = stats_degree_or_eff(std::vector<double>{2, 4, 5, 1, 1, 3, 2});
        CHECK(s[0] == doctest::Approx(18.0 / 7.0).epsilon(1e-12));  // mean
        CHECK(s[1] == 5.0);                                         // max
    }
    SUBCASE("symmetric vector has zero skewness") {
        const auto s = stats_degree_or_eff(std::vector<double>{1, 2, 3});
        CHECK(s[4] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(std::abs(s[4]) < 1e-12);
    }
    SUBCASE("skewness matches the direct moment computation") {
        // v = [0,0,0,10]: m2 = 18.75, m3 = 93.75, skew = 93.75/18.75^1.5 = 2/sqrt(3)
        const auto s = stats_degree_or_eff(std::vector<double>{0, 0, 0, 10});
        CHECK(s[4] == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));
    }
    SUBCASE("constant vector defines skewness as 0") {
        const auto s = stats_degree_or_eff(std::vector<double>{3, 3, 3});
        CHECK(s[4] == 0.0);
    }
}

TEST_CASE("quartiles interpolate between order statistics") {
    const auto s = summarize(std::vector<double>{1, 2, 3, 4});
    CHECK(s.q1 == 1.75);
    CHECK(s.q3 == 3.25);

    const auto t = summarize(std::vector<double>{2, 4, 5, 1, 1, 3, 2, 0});
    CHECK(t.q1 == 1.0);
    CHECK(t.q3 == 3.25);

    const auto single = summarize(std::vector<double>{7.5});
    CHECK(single.q1 == 7.5);
    CHECK(single.q3 == 7.5);
}

TEST_CASE("summary invariants on random vectors") {
    auto rng = seizurewave::detail::derive_stream(61, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto v = testutil::random_signal(rng, 1 + testutil::uniform_below(rng, 40));
        const auto s = summarize(v);
        CHECK(s.min <= s.q1);
        CHECK(s.q1 <= s.q3);
        CHECK(s.q3 <= s.max);
        CHECK(s.stddev >= 0.0);
        CHECK(s.norm_energy >= 0.0);
        CHECK(s.min <= s.mean);
        CHECK(s.mean <= s.max);
    }
}

TEST_CASE("step1 produces five stats per channel in recording order") {
    auto rng = seizurewave::detail::derive_stream(62, 0);
    std::vector<std::vector<double>> channels;
    for (int c = 0; c < 23; ++c) channels.push_back(testutil::random_signal(rng, 256));
    const auto er = one_epoch(std::move(channels));

    FeatureConfig cfg;  // la8, J=5, exclude {1,2}
    const auto values = step1_features(er, 0, cfg);
    CHECK(values.size() == 115);
}

TEST_CASE("step1 with no exclusions reduces to raw-signal statistics") {
    std::vector<std::vector<double>> channels = {std::vector<double>(64, 3.0),
                                                 std::vector<double>(64, -1.5)};
    const auto er = one_epoch(std::move(channels));
    FeatureConfig cfg;
    cfg.levels = 3;
    cfg.excluded_levels = {};
    const auto values = step1_features(er, 0, cfg);
    REQUIRE(values.size() == 10);
    // flat channel c: (c, c, c, 0, c^2)
    CHECK(values[0] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(values[1] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(values[2] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(values[3] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::abs(values[3]) < 1e-9);
    CHECK(values[4] == doctest::Approx(9.0).epsilon(1e-9));
    CHECK(values[7] == doctest::Approx(-1.5).epsilon(1e-9));
    CHECK(values[9] == doctest::Approx(2.25).epsilon(1e-9));
}

TEST_CASE("engineered epoch reproduces the seven-electrode worked example") {
    const auto er = one_epoch(seven_node_channels());
    const WaveletFilter& filter = la8_filter();
    ConnectivityConfig cfg;  // level 1, threshold 0.125

    SUBCASE("adjacency matches") {
        const auto g = epoch_connectivity_graph(er, 0, filter, cfg);
        const auto expected = testutil::seven_node_adjacency();
        for (std::size_t i = 0; i < 7; ++i) {
            for (std::size_t j = 0; j < 7; ++j) CHECK(g.adjacency[i][j] == expected[i][j]);
        }
    }

    SUBCASE("step2 equals the stats of the degree vector 2,4,5,1,1,3,2") {
        const auto s2 = step2_features(er, 0, filter, cfg);
        const auto expected = stats_degree_or_eff(std::vector<double>{2, 4, 5, 1, 1, 3, 2});
        for (std::size_t i = 0; i < 5; ++i) CHECK(s2[i] == expected[i]);
    }

    SUBCASE("step3 equals the stats of the published efficiency fractions") {
        const auto s3 = step3_features(er, 0, filter, cfg);
        const std::vector<double> eglob = {2.0 / 3.0,  5.0 / 6.0, 11.0 / 12.0, 5.0 / 9.0,
                                           5.0 / 9.0, 3.0 / 4.0, 11.0 / 18.0};
        const auto expected = stats_degree_or_eff(eglob);
        for (std::size_t i = 0; i < 5; ++i) CHECK(s3[i] == doctest::Approx(expected[i]).epsilon(1e-12));
        CHECK(s3[1] == doctest::Approx(11.0 / 12.0).epsilon(1e-12));  // MaxG
    }
}

TEST_CASE("identical channels give a complete graph; zero-skew constant degrees") {
    auto rng = seizurewave::detail::derive_stream(63, 0);
    const auto base = testutil::random_signal(rng, 128);
    std::vector<std::vector<double>> channels(5, base);
    const auto er = one_epoch(std::move(channels));
    ConnectivityConfig cfg;
    const auto s2 = step2_features(er, 0, la8_filter(), cfg);
    CHECK(s2[0] == 4.0);  // meanC = n-1
    CHECK(s2[1] == 4.0);
    CHECK(s2[4] == 0.0);  // skewC of a constant vector

    const auto s3 = step3_features(er, 0, la8_filter(), cfg);
    CHECK(s3[0] == 1.0);  // MeanG of the complete graph
    CHECK(s3[1] == 1.0);
    CHECK(s3[4] == 0.0);
}

TEST_CASE("independent noise channels at threshold 1.0 have all-zero degrees") {
    auto rng = seizurewave::detail::derive_stream(64, 0);
    std::vector<std::vector<double>> channels;
    for (int c = 0; c < 6; ++c) channels.push_back(testutil::random_signal(rng, 256));
    const auto er = one_epoch(std::move(channels));
    ConnectivityConfig cfg;
    cfg.threshold = 1.0;
    const auto s2 = step2_features(er, 0, la8_filter(), cfg);
    CHECK(s2[0] == 0.0);
    CHECK(s2[1] == 0.0);
}

TEST_CASE("build_dataset") {
    auto rng = seizurewave::detail::derive_stream(65, 0);
    std::vector<std::vector<double>> channels;
    for (int c = 0; c < 4; ++c) channels.push_back(testutil::random_signal(rng, 3 * 64));
    auto rec = recording_from_channels(std::move(channels), 64,
                                       {"FP1", "F7", "T7-P7", "P7-T7"});
    const auto er = segment_and_label(rec, SeizureAnnotation{{{1.0, 2.0}}}, 1.0);

    FeatureConfig cfg;
    cfg.levels = 4;
    cfg.excluded_levels = {1};

    SUBCASE("record shape is 5C + 5 + 5 regardless of connectivity exclusions") {
        FeatureConfig with_exclusion = cfg;
        with_exclusion.connectivity.exclude_channels = {"P7-T7"};
        for (const auto& c : {cfg, with_exclusion}) {
            const auto ds = build_dataset(er, c);
            REQUIRE(ds.records.size() == 3);
            CHECK(ds.names.size() == 4 * 5 + 10);
            for (const auto& r : ds.records) CHECK(r.values.size() == ds.names.size());
        }
    }

    SUBCASE("schema names follow the documented pattern") {
        const auto ds = build_dataset(er, cfg);
        CHECK(ds.names[0] == "min_FP1");
        CHECK(ds.names[1] == "max_FP1");
        CHECK(ds.names[2] == "mean_FP1");
        CHECK(ds.names[3] == "std_FP1");
        CHECK(ds.names[4] == "normE_FP1");
        CHECK(ds.names[5] == "min_F7");
        CHECK(ds.names[20] == "meanC");
        CHECK(ds.names[24] == "skewC");
        CHECK(ds.names[25] == "MeanG");
        CHECK(ds.names[29] == "SkewG");
    }

    SUBCASE("labels follow the segmentation") {
        const auto ds = build_dataset(er, cfg);
        CHECK(ds.records[0].label == Label::non_seizure);
        CHECK(ds.records[1].label == Label::seizure);
        CHECK(ds.records[2].label == Label::non_seizure);
    }

    SUBCASE("deterministic: two runs agree bitwise") {
        const auto a = build_dataset(er, cfg);
        const auto b = build_dataset(er, cfg);
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t k = 0; k < a.records.size(); ++k) {
            CHECK(a.records[k].values == b.records[k].values);
        }
    }

    SUBCASE("connectivity level beyond the decomposition is rejected") {
        FeatureConfig bad = cfg;
        bad.connectivity.level = 9;
        CHECK_THROWS_AS(build_dataset(er, bad), LevelOutOfRange);
    }

    SUBCASE("step-1 values scale with the signal; step-2/3 values do not") {
        const auto base_ds = build_dataset(er, cfg);
        auto scaled_rec = std::make_shared<Recording>(er.recording());
        for (auto& ch : scaled_rec->samples) {
            for (auto& v : ch) v *= 10.0;
        }
        const auto scaled =
            build_dataset(segment_and_label(scaled_rec, SeizureAnnotation{{{1.0, 2.0}}}, 1.0), cfg);
        for (std::size_t k = 0; k < base_ds.records.size(); ++k) {
            for (std::size_t i = 0; i < 20; i += 5) {
                CHECK(scaled.records[k].values[i + 0] ==
                      doctest::Approx(10.0 * base_ds.records[k].values[i + 0]).epsilon(1e-9));
                CHECK(scaled.records[k].values[i + 3] ==
                      doctest::Approx(10.0 * base_ds.records[k].values[i + 3]).epsilon(1e-9));
                CHECK(scaled.records[k].values[i + 4] ==
                      doctest::Approx(100.0 * base_ds.records[k].values[i + 4]).epsilon(1e-9));
            }
            for (std::size_t i = 20; i < 30; ++i) {
                CHECK(scaled.records[k].values[i] ==
                      doctest::Approx(base_ds.records[k].values[i]).epsilon(1e-9));
            }
        }
    }

    SUBCASE("duplicate channel labels are rejected") {
        auto rec2 = std::make_shared<Recording>(er.recording());
        rec2->channels[1].label = "FP1";
        const auto er2 = segment_and_label(rec2, SeizureAnnotation{}, 1.0);
        CHECK_THROWS_AS(build_dataset(er2, cfg), Error);
    }
}

TEST_CASE("feature CSV round-trips bitwise") {
    auto rng = seizurewave::detail::derive_stream(66, 0);
    std::vector<std::vector<double>> channels;
    for (int c = 0; c < 3; ++c) channels.push_back(testutil::random_signal(rng, 2 * 64));
    const auto er = segment_and_label(recording_from_channels(std::move(channels), 64),
                                      SeizureAnnotation{{{0.0, 1.0}}}, 1.0);
    FeatureConfig cfg;
    cfg.levels = 3;
    cfg.excluded_levels = {1};
    const auto ds = build_dataset(er, cfg);

    const std::string csv = feature_csv(ds);
    const auto parsed = parse_feature_csv(csv);
    CHECK(parsed.names == ds.names);
    REQUIRE(parsed.records.size() == ds.records.size());
    for (std::size_t k = 0; k < ds.records.size(); ++k) {
        CHECK(parsed.records[k].values == ds.records[k].values);
        CHECK(parsed.records[k].label == ds.records[k].label);
    }
    CHECK(feature_csv(parsed) == csv);

    SUBCASE("label column is optional") {
        FeatureDataset unlabeled = ds;
        for (auto& r : unlabeled.records) r.label.reset();
        const std::string csv2 = feature_csv(unlabeled);
        CHECK(csv2.find("label") == std::string::npos);
        const auto parsed2 = parse_feature_csv(csv2);
        CHECK(!parsed2.records[0].label.has_value());
        CHECK(parsed2.records[0].values == ds.records[0].values);
    }

    SUBCASE("malformed rows are rejected") {
        CHECK_THROWS_AS(parse_feature_csv("a,b,label\n1.0,seizure\n"), RaggedRow);
        CHECK_THROWS_AS(parse_feature_csv("a,b,label\n1.0,x,seizure\n"), NonNumericCell);
    }
}

TEST_SUITE_END();
