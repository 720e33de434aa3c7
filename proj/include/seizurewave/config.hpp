#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "seizurewave/classify.hpp"
#include "seizurewave/features.hpp"

namespace seizurewave {

/// Every experimental knob of the pipeline in one serializable place.
struct PipelineConfig {
    double epoch_seconds = 1.0;
    std::string filter = "la8";
    int levels = 5;
    std::set<int> excluded_levels = {1, 2};
    int connectivity_level = 1;
    double threshold = 0.125;
    bool abs_corr = false;
    std::vector<std::string> channels_exclude;
    CostMatrix cost;
    ForestHyperparams classifier;
    std::optional<std::uint64_t> seed;  // commands that randomize require it

    /// Cross-module constraint checks; throws BadConfig.
    void validate() const;

    FeatureConfig feature_config() const;

    std::string to_json() const;  // canonical form: load(dump(c)) == c
    static PipelineConfig from_json(std::string_view text);
};

}  // namespace seizurewave
