#include "seizurewave/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace seizurewave::cli {

namespace {

std::string lower_extension(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string file_stem(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

SeizureAnnotation shifted_annotation(const SeizureAnnotation& ann, double window_start,
                                     double window_end) {
    std::vector<std::pair<double, double>> shifted;
    for (auto [start, end] : ann.intervals()) {
        start = std::max(start, window_start);
        end = std::min(end, window_end);
        if (end > start) shifted.emplace_back(start - window_start, end - window_start);
    }
    return SeizureAnnotation(std::move(shifted));
}

EpochedRecording load_epochs(const std::string& input_path, const std::string& annotations_path,
                             std::optional<std::pair<double, double>> time_window,
                             std::optional<int> csv_sample_rate, const PipelineConfig& cfg) {
    Recording rec = load_recording(input_path, csv_sample_rate);
    SeizureAnnotation ann = parse_annotation_json(read_text_file(annotations_path));
    if (time_window) {
        rec = crop_recording(rec, time_window->first, time_window->second);
        ann = shifted_annotation(ann, time_window->first, time_window->second);
    }
    return segment_and_label(std::make_shared<Recording>(std::move(rec)), ann,
                             cfg.epoch_seconds);
}

std::uint64_t require_seed(const PipelineConfig& cfg) {
    if (!cfg.seed) throw BadConfig("this command requires an explicit --seed (or config seed)");
    return *cfg.seed;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!in.good() && !in.eof()) throw IoError("read failure: " + path);
    return buffer.str();
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    const std::string text = read_text_file(path);
    return std::vector<std::uint8_t>(text.begin(), text.end());
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.good()) throw IoError("write failure: " + path);
}

Recording load_recording(const std::string& path, std::optional<int> csv_sample_rate) {
    const std::string ext = lower_extension(path);
    if (ext == "edf") {
        const auto bytes = read_binary_file(path);
        return parse_edf(bytes);
    }
    if (ext == "csv") {
        if (!csv_sample_rate) {
            throw BadConfig("CSV recordings need --sample-rate (no rate in the file format)");
        }
        return parse_csv(read_text_file(path), *csv_sample_rate);
    }
    throw IoError("unsupported recording extension '" + ext + "' (want .edf or .csv): " + path);
}

void cmd_featurize(const std::string& input_path, const std::string& annotations_path,
                   std::optional<std::pair<double, double>> time_window,
                   std::optional<int> csv_sample_rate, const PipelineConfig& cfg,
                   const std::string& out_path, std::ostream& log) {
    cfg.validate();
    const EpochedRecording er =
        load_epochs(input_path, annotations_path, time_window, csv_sample_rate, cfg);
    const FeatureDataset ds = build_dataset(er, cfg.feature_config());
    write_text_file(out_path, feature_csv(ds));

    std::size_t seizure = 0;
    for (const auto& r : ds.records) {
        if (r.label == Label::seizure) ++seizure;
    }
    log << "featurize: " << ds.records.size() << " records x " << ds.names.size()
        << " attributes (" << seizure << " seizure, " << ds.records.size() - seizure
        << " non-seizure) -> " << out_path << "\n";
}

void cmd_train(const std::string& data_path, const std::string& model_path,
               const PipelineConfig& cfg, std::ostream& log) {
    cfg.validate();
    const FeatureDataset ds = parse_feature_csv(read_text_file(data_path));
    std::vector<std::string> warnings;
    const ForestModel model = train(ds, cfg.cost, cfg.classifier, require_seed(cfg), &warnings);
    write_text_file(model_path, serialize(model));
    for (const auto& w : warnings) log << "warning: " << w << "\n";
    log << "train: " << model.trees.size() << " trees on " << ds.records.size()
        << " records -> " << model_path << "\n";
}

void cmd_predict(const std::string& model_path, const std::string& data_path,
                 const std::string& predictions_out_path, std::ostream& log) {
    const ForestModel model = deserialize(read_text_file(model_path));
    const FeatureDataset ds = parse_feature_csv(read_text_file(data_path));
    if (ds.names != model.feature_names) {
        throw SchemaMismatch("feature CSV schema does not match the model's training schema");
    }

    std::vector<Label> predicted;
    predicted.reserve(ds.records.size());
    for (const auto& r : ds.records) predicted.push_back(predict(model, r.values));

    const bool labeled = !ds.records.empty() && ds.records.front().label.has_value();
    if (!predictions_out_path.empty()) {
        std::string out = labeled ? "epoch,predicted,actual\n" : "epoch,predicted\n";
        for (std::size_t i = 0; i < ds.records.size(); ++i) {
            out += std::to_string(ds.records[i].epoch_index) + ',' + to_string(predicted[i]);
            if (labeled) out += ',' + to_string(*ds.records[i].label);
            out += '\n';
        }
        write_text_file(predictions_out_path, out);
    }

    if (labeled) {
        std::vector<Label> actual;
        actual.reserve(ds.records.size());
        for (const auto& r : ds.records) actual.push_back(*r.label);
        const ConfusionCounts c = score(predicted, actual);
        const MetricSet m = metrics(c);
        log << "predict: tp=" << c.tp << " fp=" << c.fp << " tn=" << c.tn << " fn=" << c.fn
            << " accuracy=" << fmt(m.accuracy_pct) << "%";
        if (m.recall) log << " recall=" << fmt(*m.recall);
        if (m.precision) log << " precision=" << fmt(*m.precision);
        if (m.f_score) log << " f=" << fmt(*m.f_score);
        log << "\n";
    } else {
        log << "predict: " << ds.records.size() << " unlabeled records scored\n";
    }
}

void cmd_loocv(const std::vector<std::string>& data_paths, const PipelineConfig& cfg,
               const std::string& report_path, const std::string& summary_path,
               std::ostream& log) {
    cfg.validate();
    std::vector<SubjectDataset> subjects;
    for (const auto& path : data_paths) {
        subjects.push_back({file_stem(path), parse_feature_csv(read_text_file(path))});
    }
    const LoocvResult result = loocv(subjects, cfg.cost, cfg.classifier, require_seed(cfg));
    if (!report_path.empty()) write_text_file(report_path, loocv_report_csv(result));
    if (!summary_path.empty()) write_text_file(summary_path, loocv_summary_json(result));

    for (const auto& subject : result.excluded_subjects) {
        log << "note: subject '" << subject
            << "' has no positive epochs; excluded from the macro averages\n";
    }
    log << "loocv: " << result.per_subject.size() << " subjects";
    if (result.macro_f_score) {
        log << " macro_recall=" << fmt(*result.macro_recall)
            << " macro_precision=" << fmt(*result.macro_precision)
            << " macro_f=" << fmt(*result.macro_f_score);
    }
    log << "\n";
}

void cmd_plotdata(PlotKind kind, const std::string& input_path,
                  const std::string& annotations_path,
                  std::optional<std::pair<double, double>> time_window,
                  std::optional<int> csv_sample_rate, std::optional<std::size_t> epoch,
                  const PipelineConfig& cfg, const std::string& out_path, std::ostream& log) {
    cfg.validate();
    const EpochedRecording er =
        load_epochs(input_path, annotations_path, time_window, csv_sample_rate, cfg);
    const WaveletFilter& filter = filter_by_name(cfg.filter);
    const FeatureConfig fc = cfg.feature_config();
    const Recording& rec = er.recording();

    if (epoch && *epoch >= er.epoch_count()) {
        throw Error("epoch index " + std::to_string(*epoch) + " out of range (have " +
                    std::to_string(er.epoch_count()) + ")");
    }

    std::string out;
    switch (kind) {
        case PlotKind::degree_hist: {
            // one histogram series per class, over all epochs
            std::map<std::pair<Label, int>, std::size_t> hist;
            for (std::size_t k = 0; k < er.epoch_count(); ++k) {
                const auto g = epoch_connectivity_graph(er, k, filter, fc.connectivity);
                for (int d : degrees(g)) ++hist[{er.labels()[k], d}];
            }
            out = "class,degree,count\n";
            for (const auto& [key, count] : hist) {
                out += to_string(key.first) + ',' + std::to_string(key.second) + ',' +
                       std::to_string(count) + '\n';
            }
            break;
        }
        case PlotKind::band_energy: {
            out = "epoch,channel,level,energy\n";
            const std::size_t first = epoch.value_or(0);
            const std::size_t last = epoch ? *epoch + 1 : er.epoch_count();
            for (std::size_t k = first; k < last; ++k) {
                for (std::size_t c = 0; c < rec.channel_count(); ++c) {
                    const auto d = modwt(er.channel_epoch(k, c), filter, fc.levels);
                    for (int level = 1; level <= fc.levels; ++level) {
                        out += std::to_string(k) + ',' + rec.channels[c].label + ",D" +
                               std::to_string(level) + ',' + fmt(band_energy(d, level)) + '\n';
                    }
                    out += std::to_string(k) + ',' + rec.channels[c].label + ",S" +
                           std::to_string(fc.levels) + ',' +
                           fmt(band_energy(d, fc.levels + 1)) + '\n';
                }
            }
            break;
        }
        case PlotKind::edges: {
            out = "epoch,node_a,node_b\n";
            const std::size_t first = epoch.value_or(0);
            const std::size_t last = epoch ? *epoch + 1 : er.epoch_count();
            for (std::size_t k = first; k < last; ++k) {
                const auto g = epoch_connectivity_graph(er, k, filter, fc.connectivity);
                for (std::size_t i = 0; i < g.size(); ++i) {
                    for (std::size_t j = i + 1; j < g.size(); ++j) {
                        if (g.adjacency[i][j]) {
                            out += std::to_string(k) + ',' + g.node_labels[i] + ',' +
                                   g.node_labels[j] + '\n';
                        }
                    }
                }
            }
            break;
        }
        case PlotKind::corr: {
            if (!epoch) throw Error("--kind corr needs --epoch");
            std::vector<ModwtDecomposition> decomps;
            std::vector<std::string> labels;
            for (std::size_t c = 0; c < rec.channel_count(); ++c) {
                const auto& label = rec.channels[c].label;
                if (std::find(fc.connectivity.exclude_channels.begin(),
                              fc.connectivity.exclude_channels.end(),
                              label) != fc.connectivity.exclude_channels.end()) {
                    continue;
                }
                decomps.push_back(modwt(er.channel_epoch(*epoch, c), filter,
                                        fc.connectivity.level));
                labels.push_back(label);
            }
            const auto rho = correlation_matrix(decomps, fc.connectivity.level, labels);
            out = "channel";
            for (const auto& label : rho.channel_ids) out += ',' + label;
            out += '\n';
            for (std::size_t i = 0; i < rho.size(); ++i) {
                out += rho.channel_ids[i];
                for (std::size_t j = 0; j < rho.size(); ++j) {
                    out += ',';
                    if (rho.defined(i, j)) out += fmt(rho.rho[i][j]);
                }
                out += '\n';
            }
            break;
        }
    }
    write_text_file(out_path, out);
    log << "plot-data: wrote " << out_path << "\n";
}

void cmd_validate_config(const std::string& config_path, std::ostream& out) {
    const PipelineConfig cfg = PipelineConfig::from_json(read_text_file(config_path));
    out << cfg.to_json();
}

}  // namespace seizurewave::cli
