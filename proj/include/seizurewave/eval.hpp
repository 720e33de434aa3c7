#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seizurewave/classify.hpp"

namespace seizurewave {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionCounts&) const = default;
};

/// Tallies predicted against actual labels (equal-length sequences).
ConfusionCounts score(std::span<const Label> predicted, std::span<const Label> actual);

/// accuracy% = (tp+tn)/total*100, recall = tp/(tp+fn), precision = tp/(tp+fp),
/// f = 2PR/(P+R). Degenerate denominators leave the metric absent (and the
/// f-score absent with it); P = R = 0 gives f = 0.
struct MetricSet {
    double accuracy_pct = 0.0;
    std::optional<double> recall;
    std::optional<double> precision;
    std::optional<double> f_score;
};

MetricSet metrics(const ConfusionCounts& c);

/// Harmonic mean of the averaged recalls and averaged precisions (NOT the
/// average of per-subject f-scores).
double macro_f(std::span<const std::pair<double, double>> recall_precision_pairs);

struct SubjectDataset {
    std::string subject;
    FeatureDataset data;
};

struct SubjectResult {
    std::string subject;
    ConfusionCounts counts;
    MetricSet metric_values;
};

struct LoocvResult {
    std::vector<SubjectResult> per_subject;  // ordered by subject name
    /// Subjects without a defined recall (no positive epochs), excluded from
    /// the macro averages below.
    std::vector<std::string> excluded_subjects;
    std::optional<double> macro_recall;
    std::optional<double> macro_precision;
    std::optional<double> macro_f_score;
    /// Variant counting excluded subjects as vacuously perfect (recall and
    /// precision 1 when their denominators are empty).
    double macro_f_all_subjects = 0.0;
};

/// Leave-one-subject-out cross-validation: each subject is scored by a forest
/// trained on all the others. Deterministic for a fixed seed; folds run in
/// parallel.
LoocvResult loocv(std::span<const SubjectDataset> subjects, const CostMatrix& cost,
                  const ForestHyperparams& hp, std::uint64_t seed);

/// Report CSV: subject, tp, fp, tn, fn, accuracy, recall, precision, f
/// (absent metrics serialize as empty cells).
std::string loocv_report_csv(const LoocvResult& result);
/// JSON summary with the macro metrics and exclusion notes.
std::string loocv_summary_json(const LoocvResult& result);

}  // namespace seizurewave
