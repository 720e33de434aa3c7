#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "seizurewave/config.hpp"
#include "seizurewave/eval.hpp"

namespace seizurewave::cli {

/// File helpers shared by the commands (IoError on failure).
std::string read_text_file(const std::string& path);
std::vector<std::uint8_t> read_binary_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

/// Loads a recording by extension: .edf is parsed as EDF, .csv as a
/// header-plus-rows table (sample rate required for CSV).
Recording load_recording(const std::string& path, std::optional<int> csv_sample_rate);

/// Command bodies. All of them throw seizurewave::Error subclasses on
/// failure; the binary maps those to a JSON error and a nonzero exit code.
/// `log` receives the human-readable summary lines.

void cmd_featurize(const std::string& input_path, const std::string& annotations_path,
                   std::optional<std::pair<double, double>> time_window,
                   std::optional<int> csv_sample_rate, const PipelineConfig& cfg,
                   const std::string& out_path, std::ostream& log);

void cmd_train(const std::string& data_path, const std::string& model_path,
               const PipelineConfig& cfg, std::ostream& log);

void cmd_predict(const std::string& model_path, const std::string& data_path,
                 const std::string& predictions_out_path, std::ostream& log);

void cmd_loocv(const std::vector<std::string>& data_paths, const PipelineConfig& cfg,
               const std::string& report_path, const std::string& summary_path,
               std::ostream& log);

enum class PlotKind { degree_hist, band_energy, edges, corr };

void cmd_plotdata(PlotKind kind, const std::string& input_path,
                  const std::string& annotations_path,
                  std::optional<std::pair<double, double>> time_window,
                  std::optional<int> csv_sample_rate, std::optional<std::size_t> epoch,
                  const PipelineConfig& cfg, const std::string& out_path, std::ostream& log);

void cmd_validate_config(const std::string& config_path, std::ostream& out);

}  // namespace seizurewave::cli
