#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "seizurewave/ingest.hpp"

// EDF layout: 256-byte main header; ns sequential blocks of per-signal header
// fields (each field stored for all signals before the next field starts);
// then data records, each holding samples_per_record 16-bit LE samples per
// signal in signal order.

namespace seizurewave {

namespace {

constexpr std::size_t kHeaderSize = 256;

std::string trimmed(std::span<const std::uint8_t> bytes, std::size_t offset, std::size_t len) {
    std::string s(reinterpret_cast<const char*>(bytes.data()) + offset, len);
    const auto first = s.find_first_not_of(' ');
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(' ');
    return s.substr(first, last - first + 1);
}

long parse_long(const std::string& field, const char* what) {
    try {
        std::size_t consumed = 0;
        const long v = std::stol(field, &consumed);
        if (consumed != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw Error(std::string("EDF header field '") + what + "' is not an integer: '" + field +
                    "'");
    }
}

double parse_double(const std::string& field, const char* what) {
    try {
        std::size_t consumed = 0;
        const double v = std::stod(field, &consumed);
        if (consumed != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw Error(std::string("EDF header field '") + what + "' is not a number: '" + field +
                    "'");
    }
}

// Fixed-width ASCII field, left-justified, space padded. Values that do not
// fit are an error rather than silently truncated.
void put_field(std::string& out, const std::string& value, std::size_t width, const char* what) {
    if (value.size() > width) {
        throw Error(std::string("EDF field '") + what + "' longer than " + std::to_string(width) +
                    " bytes: '" + value + "'");
    }
    out += value;
    out.append(width - value.size(), ' ');
}

std::string format_number(double v) {
    char buf[32];
    // shortest exact-enough form that fits 8-byte EDF numeric fields
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

Recording parse_edf(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize) {
        throw TruncatedHeader("EDF shorter than the 256-byte fixed header");
    }
    const std::string version = trimmed(bytes, 0, 8);
    if (version != "0") {
        throw BadMagic("EDF version field must be '0', got '" + version + "'");
    }

    const long header_bytes = parse_long(trimmed(bytes, 184, 8), "header bytes");
    long n_records = parse_long(trimmed(bytes, 236, 8), "record count");
    const double record_duration = parse_double(trimmed(bytes, 244, 8), "record duration");
    const long ns = parse_long(trimmed(bytes, 252, 4), "signal count");
    if (ns < 1) throw Error("EDF declares no signals");
    if (record_duration <= 0.0) throw Error("EDF record duration must be positive");

    const std::size_t expected_header = kHeaderSize * (static_cast<std::size_t>(ns) + 1);
    if (static_cast<std::size_t>(header_bytes) != expected_header) {
        throw TruncatedHeader("EDF header size field " + std::to_string(header_bytes) +
                              " does not match 256*(ns+1) = " + std::to_string(expected_header));
    }
    if (bytes.size() < expected_header) {
        throw TruncatedHeader("EDF truncated inside the signal headers");
    }

    Recording rec;
    rec.edf = EdfMeta{};
    rec.edf->patient_id = trimmed(bytes, 8, 80);
    rec.edf->recording_id = trimmed(bytes, 88, 80);
    rec.edf->start_date = trimmed(bytes, 168, 8);
    rec.edf->start_time = trimmed(bytes, 176, 8);
    rec.edf->record_duration_seconds = record_duration;

    const auto nsz = static_cast<std::size_t>(ns);
    rec.channels.resize(nsz);
    std::size_t off = kHeaderSize;
    for (std::size_t i = 0; i < nsz; ++i) rec.channels[i].label = trimmed(bytes, off + 16 * i, 16);
    off += 16 * nsz;
    for (std::size_t i = 0; i < nsz; ++i)
        rec.channels[i].transducer = trimmed(bytes, off + 80 * i, 80);
    off += 80 * nsz;
    for (std::size_t i = 0; i < nsz; ++i) rec.channels[i].unit = trimmed(bytes, off + 8 * i, 8);
    off += 8 * nsz;
    for (std::size_t i = 0; i < nsz; ++i)
        rec.channels[i].phys_min = parse_double(trimmed(bytes, off + 8 * i, 8), "physical min");
    off += 8 * nsz;
    for (std::size_t i = 0; i < nsz; ++i)
        rec.channels[i].phys_max = parse_double(trimmed(bytes, off + 8 * i, 8), "physical max");
    off += 8 * nsz;
    for (std::size_t i = 0; i < nsz; ++i)
        rec.channels[i].dig_min =
            static_cast<int>(parse_long(trimmed(bytes, off + 8 * i, 8), "digital min"));
    off += 8 * nsz;
    for (std::size_t i = 0; i < nsz; ++i)
        rec.channels[i].dig_max =
            static_cast<int>(parse_long(trimmed(bytes, off + 8 * i, 8), "digital max"));
    off += 8 * nsz;
    for (std::size_t i = 0; i < nsz; ++i)
        rec.channels[i].prefiltering = trimmed(bytes, off + 80 * i, 80);
    off += 80 * nsz;
    for (std::size_t i = 0; i < nsz; ++i)
        rec.channels[i].samples_per_record =
            static_cast<int>(parse_long(trimmed(bytes, off + 8 * i, 8), "samples per record"));
    off += 8 * nsz;
    off += 32 * nsz;  // per-signal reserved

    for (const auto& ch : rec.channels) {
        if (ch.samples_per_record < 1) throw Error("EDF signal declares no samples per record");
        if (ch.dig_max <= ch.dig_min) throw Error("EDF digital range is degenerate");
        if (ch.samples_per_record != rec.channels[0].samples_per_record) {
            throw NonUniformRate("EDF signals disagree on samples per record; uniform-rate "
                                 "recordings only");
        }
    }

    std::size_t record_samples = 0;
    for (const auto& ch : rec.channels) record_samples += static_cast<std::size_t>(ch.samples_per_record);
    const std::size_t record_bytes = record_samples * 2;
    const std::size_t data_bytes = bytes.size() - expected_header;

    if (n_records < 0) {
        // unknown count ("-1"): infer from the payload, which must tile exactly
        if (record_bytes == 0 || data_bytes % record_bytes != 0) {
            throw RecordCountMismatch("EDF with unknown record count has a partial data record");
        }
        n_records = static_cast<long>(data_bytes / record_bytes);
    }
    if (data_bytes != static_cast<std::size_t>(n_records) * record_bytes) {
        throw RecordCountMismatch("EDF declares " + std::to_string(n_records) + " records (" +
                                  std::to_string(static_cast<std::size_t>(n_records) * record_bytes) +
                                  " data bytes) but file holds " + std::to_string(data_bytes));
    }
    rec.edf->n_records = static_cast<int>(n_records);

    const double rate_exact =
        static_cast<double>(rec.channels[0].samples_per_record) / record_duration;
    const double rate_rounded = std::round(rate_exact);
    if (rate_rounded < 1.0 || std::abs(rate_exact - rate_rounded) > 1e-9) {
        throw Error("EDF sample rate is not a positive integer: " + std::to_string(rate_exact));
    }
    rec.sample_rate = static_cast<int>(rate_rounded);
    rec.duration_seconds = static_cast<double>(n_records) * record_duration;

    rec.samples.assign(nsz, {});
    for (auto& ch : rec.samples) ch.reserve(static_cast<std::size_t>(n_records) *
                                            static_cast<std::size_t>(rec.channels[0].samples_per_record));

    const std::uint8_t* p = bytes.data() + expected_header;
    for (long r = 0; r < n_records; ++r) {
        for (std::size_t c = 0; c < nsz; ++c) {
            const auto& info = rec.channels[c];
            const double scale = (info.phys_max - info.phys_min) /
                                 (static_cast<double>(info.dig_max) - info.dig_min);
            for (int s = 0; s < info.samples_per_record; ++s) {
                const auto raw = static_cast<std::int16_t>(
                    static_cast<std::uint16_t>(p[0]) | (static_cast<std::uint16_t>(p[1]) << 8));
                p += 2;
                rec.samples[c].push_back((raw - info.dig_min) * scale + info.phys_min);
            }
        }
    }
    return rec;
}

std::vector<std::uint8_t> write_edf(const Recording& rec) {
    if (rec.channel_count() == 0) throw Error("write_edf: recording has no channels");
    const EdfMeta meta = rec.edf.value_or(EdfMeta{});

    const int spr = rec.channels[0].samples_per_record > 0 ? rec.channels[0].samples_per_record
                                                           : rec.sample_rate;
    for (const auto& ch : rec.channels) {
        if (ch.samples_per_record > 0 && ch.samples_per_record != spr) {
            throw NonUniformRate("write_edf: channels disagree on samples per record");
        }
    }
    const std::size_t total = rec.samples_per_channel();
    for (const auto& ch : rec.samples) {
        if (ch.size() != total) throw Error("write_edf: channels have unequal sample counts");
    }
    if (spr <= 0 || total % static_cast<std::size_t>(spr) != 0) {
        throw Error("write_edf: sample count is not a whole number of data records");
    }
    const auto n_records = static_cast<long>(total / static_cast<std::size_t>(spr));
    const double record_duration = meta.record_duration_seconds > 0.0
                                       ? meta.record_duration_seconds
                                       : static_cast<double>(spr) / rec.sample_rate;

    const std::size_t nsz = rec.channel_count();
    std::string header;
    header.reserve(kHeaderSize * (nsz + 1));
    put_field(header, "0", 8, "version");
    put_field(header, meta.patient_id, 80, "patient id");
    put_field(header, meta.recording_id, 80, "recording id");
    put_field(header, meta.start_date, 8, "start date");
    put_field(header, meta.start_time, 8, "start time");
    put_field(header, std::to_string(kHeaderSize * (nsz + 1)), 8, "header bytes");
    put_field(header, "", 44, "reserved");
    put_field(header, std::to_string(n_records), 8, "record count");
    put_field(header, format_number(record_duration), 8, "record duration");
    put_field(header, std::to_string(nsz), 4, "signal count");

    for (const auto& ch : rec.channels) put_field(header, ch.label, 16, "label");
    for (const auto& ch : rec.channels) put_field(header, ch.transducer, 80, "transducer");
    for (const auto& ch : rec.channels) put_field(header, ch.unit, 8, "unit");
    for (const auto& ch : rec.channels)
        put_field(header, format_number(ch.phys_min), 8, "physical min");
    for (const auto& ch : rec.channels)
        put_field(header, format_number(ch.phys_max), 8, "physical max");
    for (const auto& ch : rec.channels)
        put_field(header, std::to_string(ch.dig_min), 8, "digital min");
    for (const auto& ch : rec.channels)
        put_field(header, std::to_string(ch.dig_max), 8, "digital max");
    for (const auto& ch : rec.channels) put_field(header, ch.prefiltering, 80, "prefiltering");
    for (std::size_t i = 0; i < nsz; ++i) put_field(header, std::to_string(spr), 8, "spr");
    for (std::size_t i = 0; i < nsz; ++i) put_field(header, "", 32, "signal reserved");

    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + total * nsz * 2);

    for (long r = 0; r < n_records; ++r) {
        for (std::size_t c = 0; c < nsz; ++c) {
            const auto& info = rec.channels[c];
            const double scale = (info.phys_max - info.phys_min) /
                                 (static_cast<double>(info.dig_max) - info.dig_min);
            for (int s = 0; s < spr; ++s) {
                const double phys =
                    rec.samples[c][static_cast<std::size_t>(r) * static_cast<std::size_t>(spr) +
                                   static_cast<std::size_t>(s)];
                long digital = std::lround((phys - info.phys_min) / scale) + info.dig_min;
                digital = std::clamp(digital, static_cast<long>(info.dig_min),
                                     static_cast<long>(info.dig_max));
                const auto raw = static_cast<std::uint16_t>(static_cast<std::int16_t>(digital));
                out.push_back(static_cast<std::uint8_t>(raw & 0xff));
                out.push_back(static_cast<std::uint8_t>(raw >> 8));
            }
        }
    }
    return out;
}

}  // namespace seizurewave
