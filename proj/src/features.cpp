#include "seizurewave/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "seizurewave/detail/parallel.hpp"
#include "seizurewave/wstats.hpp"

namespace seizurewave {

namespace {

double quantile_type7(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<std::size_t> connectivity_channel_indices(const Recording& rec,
                                                      const ConnectivityConfig& cfg) {
    std::vector<std::size_t> indices;
    for (std::size_t c = 0; c < rec.channel_count(); ++c) {
        const auto& label = rec.channels[c].label;
        if (std::find(cfg.exclude_channels.begin(), cfg.exclude_channels.end(), label) ==
            cfg.exclude_channels.end()) {
            indices.push_back(c);
        }
    }
    return indices;
}

ConnectivityGraph graph_from_decomps(std::span<const ModwtDecomposition> decomps,
                                     std::vector<std::string> labels,
                                     const ConnectivityConfig& cfg) {
    const auto rho = correlation_matrix(decomps, cfg.level, std::move(labels));
    return build_graph(rho, cfg.threshold, cfg.abs_corr);
}

std::array<double, 5> degree_stats(const ConnectivityGraph& g) {
    const auto deg = degrees(g);
    std::vector<double> values(deg.begin(), deg.end());
    return stats_degree_or_eff(values);
}

std::array<double, 5> efficiency_stats(const ConnectivityGraph& g) {
    const auto eglob = global_efficiency(g);
    return stats_degree_or_eff(eglob);
}

void append_number(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

StatSummary summarize(std::span<const double> x) {
    if (x.empty()) throw EmptyInput("statistics of an empty vector");
    const double n = static_cast<double>(x.size());

    StatSummary s;
    s.min = x[0];
    s.max = x[0];
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : x) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        sum += v;
        sum_sq += v * v;
    }
    s.mean = sum / n;
    s.norm_energy = sum_sq / n;

    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : x) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    s.stddev = std::sqrt(m2);
    s.skewness = m2 > 0.0 ? m3 / (m2 * std::sqrt(m2)) : 0.0;

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    s.q1 = quantile_type7(sorted, 0.25);
    s.q3 = quantile_type7(sorted, 0.75);
    return s;
}

std::array<double, 5> stats_signal(std::span<const double> x) {
    const StatSummary s = summarize(x);
    return {s.min, s.max, s.mean, s.stddev, s.norm_energy};
}

std::array<double, 5> stats_degree_or_eff(std::span<const double> v) {
    const StatSummary s = summarize(v);
    return {s.mean, s.max, s.q1, s.q3, s.skewness};
}

std::vector<double> step1_features(const EpochedRecording& er, std::size_t epoch,
                                   const FeatureConfig& cfg) {
    const WaveletFilter& filter = filter_by_name(cfg.filter);
    const Recording& rec = er.recording();
    std::vector<double> out;
    out.reserve(5 * rec.channel_count());
    for (std::size_t c = 0; c < rec.channel_count(); ++c) {
        const auto d = modwt(er.channel_epoch(epoch, c), filter, cfg.levels);
        const auto reduced = reconstruct_excluding(d, cfg.excluded_levels);
        for (double v : stats_signal(reduced)) out.push_back(v);
    }
    return out;
}

ConnectivityGraph epoch_connectivity_graph(const EpochedRecording& er, std::size_t epoch,
                                           const WaveletFilter& filter,
                                           const ConnectivityConfig& cfg) {
    const Recording& rec = er.recording();
    const auto indices = connectivity_channel_indices(rec, cfg);
    if (indices.size() < 2) {
        throw TooFewNodes("connectivity needs at least 2 channels after exclusions");
    }
    std::vector<ModwtDecomposition> decomps;
    std::vector<std::string> labels;
    decomps.reserve(indices.size());
    for (std::size_t c : indices) {
        decomps.push_back(modwt(er.channel_epoch(epoch, c), filter, cfg.level));
        labels.push_back(rec.channels[c].label);
    }
    return graph_from_decomps(decomps, std::move(labels), cfg);
}

std::array<double, 5> step2_features(const EpochedRecording& er, std::size_t epoch,
                                     const WaveletFilter& filter, const ConnectivityConfig& cfg) {
    return degree_stats(epoch_connectivity_graph(er, epoch, filter, cfg));
}

std::array<double, 5> step3_features(const EpochedRecording& er, std::size_t epoch,
                                     const WaveletFilter& filter, const ConnectivityConfig& cfg) {
    return efficiency_stats(epoch_connectivity_graph(er, epoch, filter, cfg));
}

std::vector<std::string> feature_names(const std::vector<std::string>& channel_labels) {
    static const char* kSignalStats[5] = {"min", "max", "mean", "std", "normE"};
    std::vector<std::string> names;
    names.reserve(5 * channel_labels.size() + 10);
    for (const auto& ch : channel_labels) {
        for (const char* stat : kSignalStats) names.push_back(std::string(stat) + "_" + ch);
    }
    for (const char* stat : {"meanC", "maxC", "q1C", "q3C", "skewC"}) names.emplace_back(stat);
    for (const char* stat : {"MeanG", "MaxG", "Q1G", "Q3G", "SkewG"}) names.emplace_back(stat);
    return names;
}

FeatureDataset build_dataset(const EpochedRecording& er, const FeatureConfig& cfg) {
    const WaveletFilter& filter = filter_by_name(cfg.filter);
    const Recording& rec = er.recording();

    if (cfg.connectivity.level > cfg.levels) {
        throw LevelOutOfRange("connectivity level exceeds decomposition levels");
    }
    {
        std::set<std::string> seen;
        for (const auto& ch : rec.channels) {
            if (!seen.insert(ch.label).second) {
                throw Error("duplicate channel label '" + ch.label +
                            "'; feature names must be unique");
            }
        }
    }

    const auto conn_indices = connectivity_channel_indices(rec, cfg.connectivity);
    if (conn_indices.size() < 2) {
        throw TooFewNodes("connectivity needs at least 2 channels after exclusions");
    }

    std::vector<std::string> conn_labels;
    for (std::size_t c : conn_indices) conn_labels.push_back(rec.channels[c].label);

    FeatureDataset ds;
    ds.names = feature_names([&] {
        std::vector<std::string> labels;
        for (const auto& ch : rec.channels) labels.push_back(ch.label);
        return labels;
    }());
    ds.records.resize(er.epoch_count());

    detail::parallel_for(er.epoch_count(), [&](std::size_t k) {
        try {
            FeatureRecord& record = ds.records[k];
            record.epoch_index = k;
            record.label = er.labels()[k];
            record.values.reserve(ds.names.size());

            // One decomposition per channel serves both the Step-1
            // reconstruction and the Step-2 correlation coefficients.
            std::vector<ModwtDecomposition> decomps;
            decomps.reserve(rec.channel_count());
            for (std::size_t c = 0; c < rec.channel_count(); ++c) {
                decomps.push_back(modwt(er.channel_epoch(k, c), filter, cfg.levels));
            }

            for (const auto& d : decomps) {
                const auto reduced = reconstruct_excluding(d, cfg.excluded_levels);
                for (double v : stats_signal(reduced)) record.values.push_back(v);
            }

            std::vector<ModwtDecomposition> conn_decomps;
            conn_decomps.reserve(conn_indices.size());
            for (std::size_t c : conn_indices) conn_decomps.push_back(decomps[c]);
            const auto g = graph_from_decomps(conn_decomps, conn_labels, cfg.connectivity);

            for (double v : degree_stats(g)) record.values.push_back(v);
            for (double v : efficiency_stats(g)) record.values.push_back(v);

            for (double v : record.values) {
                if (!std::isfinite(v)) throw Error("non-finite feature value");
            }
        } catch (const Error& e) {
            throw Error("epoch " + std::to_string(k) + ": " + e.what());
        }
    });
    return ds;
}

std::string feature_csv(const FeatureDataset& ds) {
    const bool labeled = std::any_of(ds.records.begin(), ds.records.end(),
                                     [](const FeatureRecord& r) { return r.label.has_value(); });
    std::string out;
    for (std::size_t i = 0; i < ds.names.size(); ++i) {
        if (i) out += ',';
        out += ds.names[i];
    }
    if (labeled) out += ",label";
    out += '\n';

    for (const auto& record : ds.records) {
        if (record.values.size() != ds.names.size()) {
            throw Error("feature record width does not match schema");
        }
        for (std::size_t i = 0; i < record.values.size(); ++i) {
            if (i) out += ',';
            append_number(out, record.values[i]);
        }
        if (labeled) {
            if (!record.label) throw Error("mixed labeled and unlabeled records");
            out += ',';
            out += to_string(*record.label);
        }
        out += '\n';
    }
    return out;
}

FeatureDataset parse_feature_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        pos = nl + 1;
    }
    if (lines.empty()) throw Error("empty feature CSV");

    auto split = [](std::string_view line) {
        std::vector<std::string_view> cells;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string_view::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        return cells;
    };

    const auto header = split(lines[0]);
    const bool labeled = !header.empty() && header.back() == "label";
    const std::size_t width = header.size() - (labeled ? 1 : 0);

    FeatureDataset ds;
    for (std::size_t i = 0; i < width; ++i) ds.names.emplace_back(header[i]);

    for (std::size_t row = 1; row < lines.size(); ++row) {
        const auto cells = split(lines[row]);
        if (cells.size() != header.size()) {
            throw RaggedRow("feature CSV row " + std::to_string(row + 1) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        }
        FeatureRecord record;
        record.epoch_index = row - 1;
        record.values.reserve(width);
        for (std::size_t i = 0; i < width; ++i) {
            const std::string cell(cells[i]);
            std::size_t consumed = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &consumed);
            } catch (const std::exception&) {
                throw NonNumericCell("feature CSV row " + std::to_string(row + 1) + " column " +
                                     std::to_string(i + 1) + ": '" + cell + "'");
            }
            if (consumed != cell.size()) {
                throw NonNumericCell("feature CSV row " + std::to_string(row + 1) + " column " +
                                     std::to_string(i + 1) + ": '" + cell + "'");
            }
            record.values.push_back(v);
        }
        if (labeled) record.label = label_from_string(cells.back());
        ds.records.push_back(std::move(record));
    }
    return ds;
}

}  // namespace seizurewave
