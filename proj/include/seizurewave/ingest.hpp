#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seizurewave/errors.hpp"

namespace seizurewave {

enum class Label : std::uint8_t { non_seizure = 0, seizure = 1 };

std::string to_string(Label label);
Label label_from_string(std::string_view text);

struct ChannelInfo {
    std::string label;
    std::string unit;            // physical dimension, e.g. "uV"
    int samples_per_record = 0;  // per EDF data record
    double phys_min = -1.0;
    double phys_max = 1.0;
    int dig_min = -32768;
    int dig_max = 32767;
    std::string transducer;
    std::string prefiltering;
};

/// Header fields preserved so writing a parsed file back is byte-exact.
struct EdfMeta {
    std::string patient_id;
    std::string recording_id;
    std::string start_date = "01.01.00";
    std::string start_time = "00.00.00";
    double record_duration_seconds = 1.0;
    int n_records = 0;
};

/// A uniformly sampled multichannel recording, amplitudes in physical units.
struct Recording {
    std::vector<ChannelInfo> channels;
    int sample_rate = 0;                       // samples per second
    std::vector<std::vector<double>> samples;  // [channel][t], equal lengths
    double duration_seconds = 0.0;
    std::optional<EdfMeta> edf;  // present when parsed from / destined for EDF

    std::size_t channel_count() const { return channels.size(); }
    std::size_t samples_per_channel() const { return samples.empty() ? 0 : samples[0].size(); }
    /// Index of the named channel, or nullopt.
    std::optional<std::size_t> channel_index(std::string_view label) const;
};

/// Sorted, non-overlapping half-open seizure intervals in seconds.
class SeizureAnnotation {
public:
    SeizureAnnotation() = default;
    explicit SeizureAnnotation(std::vector<std::pair<double, double>> intervals);

    const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
    bool intersects(double start, double end) const;

private:
    std::vector<std::pair<double, double>> intervals_;
};

/// Parses the JSON sidecar {"intervals": [[start, end], ...]}.
SeizureAnnotation parse_annotation_json(std::string_view text);

/// Fixed-duration view of a recording: epoch k spans samples
/// [k * epoch_samples, (k+1) * epoch_samples) of every channel.
class EpochedRecording {
public:
    EpochedRecording(std::shared_ptr<const Recording> rec, double epoch_seconds,
                     std::size_t epoch_samples, std::vector<Label> labels);

    std::size_t epoch_count() const { return labels_.size(); }
    std::size_t epoch_samples() const { return epoch_samples_; }
    double epoch_seconds() const { return epoch_seconds_; }
    const std::vector<Label>& labels() const { return labels_; }
    const Recording& recording() const { return *rec_; }
    std::span<const double> channel_epoch(std::size_t epoch, std::size_t channel) const;

private:
    std::shared_ptr<const Recording> rec_;
    double epoch_seconds_;
    std::size_t epoch_samples_;
    std::vector<Label> labels_;
};

/// EDF: 256-byte fixed header, ns x 256-byte signal headers, data records of
/// 16-bit little-endian two's-complement samples. Samples are calibrated to
/// physical units. All channels must agree on samples-per-record.
Recording parse_edf(std::span<const std::uint8_t> bytes);

/// Serializes a recording as EDF; parse_edf followed by write_edf is
/// byte-exact for files this writer produced. Physical values are quantized
/// back to the channel's digital range.
std::vector<std::uint8_t> write_edf(const Recording& rec);

/// CSV: header row of channel labels, one sample instant per row.
Recording parse_csv(std::string_view text, int sample_rate);

/// Splits a recording into floor(duration/epoch_seconds) epochs (trailing
/// partial epoch discarded) and labels each epoch seizure iff its time span
/// intersects an annotation interval.
EpochedRecording segment_and_label(std::shared_ptr<const Recording> rec,
                                   const SeizureAnnotation& ann, double epoch_seconds);

/// Convenience: crops a recording to the half-open window [start, end) in
/// seconds (used by the CLI --time-window flag). Annotation times must be
/// shifted by the caller.
Recording crop_recording(const Recording& rec, double start_seconds, double end_seconds);

}  // namespace seizurewave
