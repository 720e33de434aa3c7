#include "seizurewave/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace seizurewave {

std::string to_string(Label label) {
    return label == Label::seizure ? "seizure" : "non-seizure";
}

Label label_from_string(std::string_view text) {
    if (text == "seizure") return Label::seizure;
    if (text == "non-seizure") return Label::non_seizure;
    throw Error("unknown class label: " + std::string(text));
}

std::optional<std::size_t> Recording::channel_index(std::string_view label) const {
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (channels[i].label == label) return i;
    }
    return std::nullopt;
}

SeizureAnnotation::SeizureAnnotation(std::vector<std::pair<double, double>> intervals)
    : intervals_(std::move(intervals)) {
    for (const auto& [start, end] : intervals_) {
        if (!(start >= 0.0) || !(end > start)) {
            throw BadAnnotation("annotation interval must satisfy 0 <= start < end");
        }
    }
    for (std::size_t i = 1; i < intervals_.size(); ++i) {
        if (intervals_[i].first < intervals_[i - 1].second) {
            throw BadAnnotation("annotation intervals must be sorted and non-overlapping");
        }
    }
}

bool SeizureAnnotation::intersects(double start, double end) const {
    for (const auto& [s, e] : intervals_) {
        if (s < end && start < e) return true;
        if (s >= end) break;  // sorted
    }
    return false;
}

SeizureAnnotation parse_annotation_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw BadAnnotation(std::string("annotation JSON parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("intervals") || !j["intervals"].is_array()) {
        throw BadAnnotation("annotation JSON must be {\"intervals\": [[start, end], ...]}");
    }
    std::vector<std::pair<double, double>> intervals;
    for (const auto& item : j["intervals"]) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
            throw BadAnnotation("each interval must be a [start, end] number pair");
        }
        intervals.emplace_back(item[0].get<double>(), item[1].get<double>());
    }
    return SeizureAnnotation(std::move(intervals));
}

EpochedRecording::EpochedRecording(std::shared_ptr<const Recording> rec, double epoch_seconds,
                                   std::size_t epoch_samples, std::vector<Label> labels)
    : rec_(std::move(rec)),
      epoch_seconds_(epoch_seconds),
      epoch_samples_(epoch_samples),
      labels_(std::move(labels)) {}

std::span<const double> EpochedRecording::channel_epoch(std::size_t epoch,
                                                        std::size_t channel) const {
    const auto& samples = rec_->samples[channel];
    return std::span<const double>(samples).subspan(epoch * epoch_samples_, epoch_samples_);
}

Recording parse_csv(std::string_view text, int sample_rate) {
    if (sample_rate <= 0) throw Error("parse_csv: sample rate must be positive");

    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.emplace_back(line);
        pos = nl + 1;
    }
    if (lines.empty()) throw Error("parse_csv: empty input");

    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        return cells;
    };

    const std::vector<std::string> header = split(lines[0]);
    const std::size_t n_channels = header.size();

    Recording rec;
    rec.sample_rate = sample_rate;
    rec.channels.resize(n_channels);
    rec.samples.assign(n_channels, {});
    for (std::size_t c = 0; c < n_channels; ++c) {
        rec.channels[c].label = header[c];
        rec.channels[c].samples_per_record = sample_rate;
    }

    for (std::size_t row = 1; row < lines.size(); ++row) {
        const auto cells = split(lines[row]);
        if (cells.size() != n_channels) {
            throw RaggedRow("row " + std::to_string(row + 1) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(n_channels));
        }
        for (std::size_t c = 0; c < n_channels; ++c) {
            std::size_t consumed = 0;
            double value = 0.0;
            try {
                value = std::stod(cells[c], &consumed);
            } catch (const std::exception&) {
                throw NonNumericCell("row " + std::to_string(row + 1) + " column " +
                                     std::to_string(c + 1) + ": '" + cells[c] + "'");
            }
            if (consumed != cells[c].size()) {
                throw NonNumericCell("row " + std::to_string(row + 1) + " column " +
                                     std::to_string(c + 1) + ": '" + cells[c] + "'");
            }
            rec.samples[c].push_back(value);
        }
    }
    rec.duration_seconds =
        static_cast<double>(rec.samples_per_channel()) / static_cast<double>(sample_rate);
    return rec;
}

EpochedRecording segment_and_label(std::shared_ptr<const Recording> rec,
                                   const SeizureAnnotation& ann, double epoch_seconds) {
    if (!rec || rec->channel_count() == 0) throw Error("segment_and_label: empty recording");
    if (!(epoch_seconds > 0.0)) throw Error("segment_and_label: epoch_seconds must be positive");

    const double samples_exact = epoch_seconds * rec->sample_rate;
    const double rounded = std::round(samples_exact);
    if (rounded < 1.0 || std::abs(samples_exact - rounded) > 1e-9) {
        throw Error("segment_and_label: epoch_seconds x sample_rate must be a positive integer");
    }
    const auto epoch_samples = static_cast<std::size_t>(rounded);

    const std::size_t total = rec->samples_per_channel();
    const std::size_t n_epochs = total / epoch_samples;
    if (n_epochs == 0) {
        throw EpochTooLong("epoch of " + std::to_string(epoch_samples) +
                           " samples exceeds recording length " + std::to_string(total));
    }

    for (const auto& [start, end] : ann.intervals()) {
        if (end > rec->duration_seconds + 1e-9) {
            throw BadAnnotation("annotation interval ends after the recording (" +
                                std::to_string(end) + "s > " +
                                std::to_string(rec->duration_seconds) + "s)");
        }
        (void)start;
    }

    std::vector<Label> labels(n_epochs, Label::non_seizure);
    for (std::size_t k = 0; k < n_epochs; ++k) {
        const double t0 = static_cast<double>(k) * epoch_seconds;
        if (ann.intersects(t0, t0 + epoch_seconds)) labels[k] = Label::seizure;
    }
    return EpochedRecording(std::move(rec), epoch_seconds, epoch_samples, std::move(labels));
}

Recording crop_recording(const Recording& rec, double start_seconds, double end_seconds) {
    if (!(start_seconds >= 0.0) || !(end_seconds > start_seconds) ||
        end_seconds > rec.duration_seconds + 1e-9) {
        throw Error("crop window must satisfy 0 <= start < end <= duration");
    }
    const auto first = static_cast<std::size_t>(std::llround(start_seconds * rec.sample_rate));
    const auto last = static_cast<std::size_t>(std::llround(end_seconds * rec.sample_rate));

    Recording out = rec;
    for (auto& ch : out.samples) {
        ch = std::vector<double>(ch.begin() + static_cast<std::ptrdiff_t>(first),
                                 ch.begin() + static_cast<std::ptrdiff_t>(last));
    }
    out.duration_seconds = static_cast<double>(last - first) / rec.sample_rate;
    if (out.edf) out.edf->n_records = 0;  // header no longer matches; rewritten on save
    return out;
}

}  // namespace seizurewave
