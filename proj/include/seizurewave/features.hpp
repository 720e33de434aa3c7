#pragma once

#include <array>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "seizurewave/graph.hpp"
#include "seizurewave/ingest.hpp"
#include "seizurewave/wavelet.hpp"

namespace seizurewave {

/// All statistical parameters used by the pipeline, from one pass over the
/// data. Quartiles interpolate linearly between order statistics (position
/// p*(n-1)+1); skewness is the population moment ratio m3 / m2^(3/2), defined
/// as 0 for constant input.
struct StatSummary {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;       // population (divisor n)
    double norm_energy = 0.0;  // sum of squares / n
    double q1 = 0.0;
    double q3 = 0.0;
    double skewness = 0.0;
};

StatSummary summarize(std::span<const double> x);

/// Signal-shape parameters in record order: min, max, mean, std, normE.
std::array<double, 5> stats_signal(std::span<const double> x);

/// Distribution parameters for degree/efficiency vectors in record order:
/// mean, max, q1, q3, skewness.
std::array<double, 5> stats_degree_or_eff(std::span<const double> v);

/// Connectivity settings shared by Steps 2 and 3.
struct ConnectivityConfig {
    int level = 1;            // decomposition level whose coefficients are correlated
    double threshold = 0.125;
    bool abs_corr = false;    // threshold |rho| instead of signed rho
    std::vector<std::string> exclude_channels;  // dropped from the graph only
};

struct FeatureConfig {
    std::string filter = "la8";
    int levels = 5;
    std::set<int> excluded_levels = {1, 2};  // zeroed before reconstruction
    ConnectivityConfig connectivity;
};

struct FeatureRecord {
    std::size_t epoch_index = 0;
    std::vector<double> values;
    std::optional<Label> label;
};

/// Records plus their shared schema. Schema order: per channel
/// min_<ch>, max_<ch>, mean_<ch>, std_<ch>, normE_<ch>; then meanC, maxC,
/// q1C, q3C, skewC; then MeanG, MaxG, Q1G, Q3G, SkewG.
struct FeatureDataset {
    std::vector<std::string> names;
    std::vector<FeatureRecord> records;
};

/// Noise-reduced per-channel signal statistics (Step 1): each channel is
/// decomposed, the excluded detail levels are zeroed, the signal is rebuilt,
/// and the five signal parameters are taken. 5 values per channel, recording
/// channel order.
std::vector<double> step1_features(const EpochedRecording& er, std::size_t epoch,
                                   const FeatureConfig& cfg);

/// Connectivity graph for one epoch under the given settings (channels in
/// recording order minus the exclusion list).
ConnectivityGraph epoch_connectivity_graph(const EpochedRecording& er, std::size_t epoch,
                                           const WaveletFilter& filter,
                                           const ConnectivityConfig& cfg);

/// Degree-distribution parameters of the epoch's connectivity graph (Step 2).
std::array<double, 5> step2_features(const EpochedRecording& er, std::size_t epoch,
                                     const WaveletFilter& filter, const ConnectivityConfig& cfg);

/// Global-efficiency-distribution parameters from the same adjacency (Step 3).
std::array<double, 5> step3_features(const EpochedRecording& er, std::size_t epoch,
                                     const WaveletFilter& filter, const ConnectivityConfig& cfg);

/// Full per-epoch feature extraction: Steps 1-3 concatenated, label attached.
/// Epochs are processed in parallel; output order is by epoch index.
FeatureDataset build_dataset(const EpochedRecording& er, const FeatureConfig& cfg);

/// Expected schema for a channel-label list under a config.
std::vector<std::string> feature_names(const std::vector<std::string>& channel_labels);

/// Feature CSV: schema header plus "label", one row per epoch, doubles
/// round-trip exactly. The label column is omitted when no record has one.
std::string feature_csv(const FeatureDataset& ds);
FeatureDataset parse_feature_csv(std::string_view text);

}  // namespace seizurewave
