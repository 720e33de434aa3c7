#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seizurewave/cli.hpp"

namespace {

using seizurewave::PipelineConfig;

struct CommonConfigFlags {
    std::string config_path;
    std::optional<double> epoch_seconds;
    std::string filter;
    std::optional<int> levels;
    std::vector<int> excluded_levels;
    std::optional<int> connectivity_level;
    std::optional<double> threshold;
    bool abs_corr = false;
    std::vector<std::string> channels_exclude;
    std::optional<double> cost_tp, cost_fp, cost_fn, cost_tn;
    std::optional<int> n_trees, max_depth, min_leaf;
    std::optional<double> feature_fraction;
    std::optional<std::uint64_t> seed;
};

void add_config_flags(CLI::App& cmd, CommonConfigFlags& f) {
    cmd.add_option("--config", f.config_path, "Pipeline config JSON (flags override it)");
    cmd.add_option("--epoch-seconds", f.epoch_seconds, "Epoch duration in seconds");
    cmd.add_option("--filter", f.filter, "Wavelet filter name (haar, la8/s8)");
    cmd.add_option("--levels", f.levels, "MODWT decomposition depth J");
    cmd.add_option("--exclude-levels", f.excluded_levels,
                   "Detail levels zeroed before reconstruction")
        ->delimiter(',');
    cmd.add_option("--connectivity-level", f.connectivity_level,
                   "Decomposition level used for electrode correlation");
    cmd.add_option("--threshold", f.threshold, "Correlation lower bound for an edge");
    cmd.add_flag("--abs-corr", f.abs_corr, "Threshold |rho| instead of signed rho");
    cmd.add_option("--channels-exclude", f.channels_exclude,
                   "Channel labels dropped from connectivity (comma separated)")
        ->delimiter(',');
    cmd.add_option("--cost-tp", f.cost_tp, "Cost of a true positive");
    cmd.add_option("--cost-fp", f.cost_fp, "Cost of a false positive");
    cmd.add_option("--cost-fn", f.cost_fn, "Cost of a false negative");
    cmd.add_option("--cost-tn", f.cost_tn, "Cost of a true negative");
    cmd.add_option("--trees", f.n_trees, "Number of trees in the forest");
    cmd.add_option("--max-depth", f.max_depth, "Tree depth cap (0 = unbounded)");
    cmd.add_option("--min-leaf", f.min_leaf, "Minimum training records per leaf");
    cmd.add_option("--feature-fraction", f.feature_fraction,
                   "Fraction of features tried per split (0 = sqrt rule)");
    cmd.add_option("--seed", f.seed, "Master RNG seed (required where randomness is used)");
}

PipelineConfig resolve_config(const CommonConfigFlags& f) {
    PipelineConfig cfg;
    if (!f.config_path.empty()) {
        cfg = PipelineConfig::from_json(seizurewave::cli::read_text_file(f.config_path));
    }
    if (f.epoch_seconds) cfg.epoch_seconds = *f.epoch_seconds;
    if (!f.filter.empty()) cfg.filter = f.filter;
    if (f.levels) cfg.levels = *f.levels;
    if (!f.excluded_levels.empty()) {
        cfg.excluded_levels = std::set<int>(f.excluded_levels.begin(), f.excluded_levels.end());
    }
    if (f.connectivity_level) cfg.connectivity_level = *f.connectivity_level;
    if (f.threshold) cfg.threshold = *f.threshold;
    if (f.abs_corr) cfg.abs_corr = true;
    if (!f.channels_exclude.empty()) cfg.channels_exclude = f.channels_exclude;
    if (f.cost_tp) cfg.cost.tp = *f.cost_tp;
    if (f.cost_fp) cfg.cost.fp = *f.cost_fp;
    if (f.cost_fn) cfg.cost.fn = *f.cost_fn;
    if (f.cost_tn) cfg.cost.tn = *f.cost_tn;
    if (f.n_trees) cfg.classifier.n_trees = *f.n_trees;
    if (f.max_depth) cfg.classifier.max_depth = *f.max_depth;
    if (f.min_leaf) cfg.classifier.min_leaf = *f.min_leaf;
    if (f.feature_fraction) cfg.classifier.feature_fraction = *f.feature_fraction;
    if (f.seed) cfg.seed = *f.seed;
    cfg.validate();
    return cfg;
}

std::optional<std::pair<double, double>> parse_window(const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw seizurewave::BadConfig("--time-window wants START:END in seconds");
    }
    try {
        return std::make_pair(std::stod(spec.substr(0, colon)), std::stod(spec.substr(colon + 1)));
    } catch (const std::exception&) {
        throw seizurewave::BadConfig("--time-window wants numeric START:END, got '" + spec + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wavelet-based EEG seizure detection pipeline"};
    app.require_subcommand(1);

    // featurize
    auto* featurize = app.add_subcommand("featurize", "Recording + annotations -> feature CSV");
    std::string fz_input, fz_annotations, fz_out = "features.csv", fz_window;
    std::optional<int> fz_sample_rate;
    CommonConfigFlags fz_flags;
    featurize->add_option("--input", fz_input, "Recording file (.edf or .csv)")->required();
    featurize->add_option("--annotations", fz_annotations, "Seizure interval JSON sidecar")
        ->required();
    featurize->add_option("--out", fz_out, "Output feature CSV path");
    featurize->add_option("--time-window", fz_window, "Crop to START:END seconds before epoching");
    featurize->add_option("--sample-rate", fz_sample_rate, "Sample rate for CSV recordings (Hz)");
    add_config_flags(*featurize, fz_flags);

    // train
    auto* train = app.add_subcommand("train", "Feature CSV -> forest model JSON");
    std::string tr_data, tr_model = "model.json";
    CommonConfigFlags tr_flags;
    train->add_option("--data", tr_data, "Labeled feature CSV")->required();
    train->add_option("--model", tr_model, "Output model path");
    add_config_flags(*train, tr_flags);

    // predict
    auto* predict = app.add_subcommand("predict", "Score a feature CSV with a trained model");
    std::string pr_model, pr_data, pr_out;
    predict->add_option("--model", pr_model, "Trained model JSON")->required();
    predict->add_option("--data", pr_data, "Feature CSV to score")->required();
    predict->add_option("--out", pr_out, "Optional predictions CSV path");

    // loocv
    auto* loocv = app.add_subcommand("loocv", "Leave-one-subject-out cross-validation");
    std::vector<std::string> cv_data;
    std::string cv_report = "loocv_report.csv", cv_summary = "loocv_summary.json";
    CommonConfigFlags cv_flags;
    loocv->add_option("--data", cv_data, "One labeled feature CSV per subject")
        ->required()
        ->expected(-2);
    loocv->add_option("--report", cv_report, "Per-subject report CSV path");
    loocv->add_option("--summary", cv_summary, "Macro summary JSON path");
    add_config_flags(*loocv, cv_flags);

    // plot-data
    auto* plot = app.add_subcommand("plot-data", "Emit plot-ready series (no rendering)");
    std::string pl_input, pl_annotations, pl_kind, pl_out = "plot.csv", pl_window;
    std::optional<int> pl_sample_rate;
    std::optional<std::size_t> pl_epoch;
    CommonConfigFlags pl_flags;
    plot->add_option("--input", pl_input, "Recording file (.edf or .csv)")->required();
    plot->add_option("--annotations", pl_annotations, "Seizure interval JSON sidecar")->required();
    plot->add_option("--kind", pl_kind, "degree-hist | band-energy | edges | corr")
        ->required()
        ->check(CLI::IsMember({"degree-hist", "band-energy", "edges", "corr"}));
    plot->add_option("--out", pl_out, "Output CSV path");
    plot->add_option("--epoch", pl_epoch, "Restrict to one epoch index");
    plot->add_option("--time-window", pl_window, "Crop to START:END seconds before epoching");
    plot->add_option("--sample-rate", pl_sample_rate, "Sample rate for CSV recordings (Hz)");
    add_config_flags(*plot, pl_flags);

    // validate-config
    auto* validate = app.add_subcommand("validate-config", "Check a config and print it back");
    std::string vc_path;
    validate->add_option("--config", vc_path, "Pipeline config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (featurize->parsed()) {
            seizurewave::cli::cmd_featurize(fz_input, fz_annotations, parse_window(fz_window),
                                            fz_sample_rate, resolve_config(fz_flags), fz_out,
                                            std::cout);
        } else if (train->parsed()) {
            seizurewave::cli::cmd_train(tr_data, tr_model, resolve_config(tr_flags), std::cout);
        } else if (predict->parsed()) {
            seizurewave::cli::cmd_predict(pr_model, pr_data, pr_out, std::cout);
        } else if (loocv->parsed()) {
            seizurewave::cli::cmd_loocv(cv_data, resolve_config(cv_flags), cv_report, cv_summary,
                                        std::cout);
        } else if (plot->parsed()) {
            const auto kind = pl_kind == "degree-hist" ? seizurewave::cli::PlotKind::degree_hist
                              : pl_kind == "band-energy" ? seizurewave::cli::PlotKind::band_energy
                              : pl_kind == "edges"       ? seizurewave::cli::PlotKind::edges
                                                         : seizurewave::cli::PlotKind::corr;
            seizurewave::cli::cmd_plotdata(kind, pl_input, pl_annotations, parse_window(pl_window),
                                           pl_sample_rate, pl_epoch, resolve_config(pl_flags),
                                           pl_out, std::cout);
        } else if (validate->parsed()) {
            seizurewave::cli::cmd_validate_config(vc_path, std::cout);
        }
    } catch (const seizurewave::Error& e) {
        nlohmann::json err;
        err["error"] = std::string(e.name());
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = "Error";
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
