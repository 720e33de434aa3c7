#include "seizurewave/config.hpp"

#include <cmath>

#include <json.hpp>

namespace seizurewave {

void PipelineConfig::validate() const {
    if (!(epoch_seconds > 0.0)) throw BadConfig("epoch_seconds must be positive");
    try {
        filter_by_name(filter);
    } catch (const UnknownFilter& e) {
        throw BadConfig(e.what());
    }
    if (levels < 1) throw BadConfig("levels must be >= 1");
    for (int level : excluded_levels) {
        if (level < 1 || level > levels) {
            throw BadConfig("excluded level " + std::to_string(level) + " outside 1.." +
                            std::to_string(levels));
        }
    }
    if (connectivity_level < 1 || connectivity_level > levels) {
        throw BadConfig("connectivity_level must lie in 1..levels");
    }
    if (!(threshold > 0.0) || threshold > 1.0) throw BadConfig("threshold must lie in (0, 1]");
    try {
        cost.validate();
        classifier.validate();
    } catch (const Error& e) {
        throw BadConfig(e.what());
    }
}

FeatureConfig PipelineConfig::feature_config() const {
    FeatureConfig fc;
    fc.filter = filter;
    fc.levels = levels;
    fc.excluded_levels = excluded_levels;
    fc.connectivity.level = connectivity_level;
    fc.connectivity.threshold = threshold;
    fc.connectivity.abs_corr = abs_corr;
    fc.connectivity.exclude_channels = channels_exclude;
    return fc;
}

std::string PipelineConfig::to_json() const {
    nlohmann::json j;
    j["epoch_seconds"] = epoch_seconds;
    j["filter"] = filter;
    j["levels"] = levels;
    j["excluded_levels"] = excluded_levels;
    j["connectivity_level"] = connectivity_level;
    j["threshold"] = threshold;
    j["abs_corr"] = abs_corr;
    j["channels_exclude"] = channels_exclude;
    j["cost"] = {{"tp", cost.tp}, {"fp", cost.fp}, {"fn", cost.fn}, {"tn", cost.tn}};
    j["classifier"] = {{"n_trees", classifier.n_trees},
                       {"max_depth", classifier.max_depth},
                       {"min_leaf", classifier.min_leaf},
                       {"feature_fraction", classifier.feature_fraction}};
    if (seed) j["seed"] = *seed;
    return j.dump(2) + "\n";
}

PipelineConfig PipelineConfig::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw BadConfig(std::string("config is not valid JSON: ") + e.what());
    }
    PipelineConfig c;
    try {
        c.epoch_seconds = j.value("epoch_seconds", c.epoch_seconds);
        c.filter = j.value("filter", c.filter);
        c.levels = j.value("levels", c.levels);
        if (j.contains("excluded_levels")) {
            c.excluded_levels.clear();
            for (const auto& v : j.at("excluded_levels")) c.excluded_levels.insert(v.get<int>());
        }
        c.connectivity_level = j.value("connectivity_level", c.connectivity_level);
        c.threshold = j.value("threshold", c.threshold);
        c.abs_corr = j.value("abs_corr", c.abs_corr);
        if (j.contains("channels_exclude")) {
            c.channels_exclude = j.at("channels_exclude").get<std::vector<std::string>>();
        }
        if (j.contains("cost")) {
            const auto& jc = j.at("cost");
            c.cost.tp = jc.value("tp", c.cost.tp);
            c.cost.fp = jc.value("fp", c.cost.fp);
            c.cost.fn = jc.value("fn", c.cost.fn);
            c.cost.tn = jc.value("tn", c.cost.tn);
        }
        if (j.contains("classifier")) {
            const auto& jc = j.at("classifier");
            c.classifier.n_trees = jc.value("n_trees", c.classifier.n_trees);
            c.classifier.max_depth = jc.value("max_depth", c.classifier.max_depth);
            c.classifier.min_leaf = jc.value("min_leaf", c.classifier.min_leaf);
            c.classifier.feature_fraction =
                jc.value("feature_fraction", c.classifier.feature_fraction);
        }
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw BadConfig(std::string("config field has the wrong type: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace seizurewave
