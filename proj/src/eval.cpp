#include "seizurewave/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "seizurewave/detail/parallel.hpp"
#include "seizurewave/detail/rng.hpp"

namespace seizurewave {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double f_from(double recall, double precision) {
    const double denom = recall + precision;
    return denom > 0.0 ? 2.0 * recall * precision / denom : 0.0;
}

}  // namespace

ConfusionCounts score(std::span<const Label> predicted, std::span<const Label> actual) {
    if (predicted.size() != actual.size()) {
        throw ShapeMismatch("predicted and actual label sequences differ in length");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool pred_seiz = predicted[i] == Label::seizure;
        const bool is_seiz = actual[i] == Label::seizure;
        if (pred_seiz && is_seiz) ++c.tp;
        else if (pred_seiz && !is_seiz) ++c.fp;
        else if (!pred_seiz && is_seiz) ++c.fn;
        else ++c.tn;
    }
    return c;
}

MetricSet metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw EmptyList("metrics of an empty confusion matrix");
    MetricSet m;
    m.accuracy_pct = 100.0 * static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    if (c.tp + c.fn > 0) {
        m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    }
    if (c.tp + c.fp > 0) {
        m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    }
    if (m.recall && m.precision) m.f_score = f_from(*m.recall, *m.precision);
    return m;
}

double macro_f(std::span<const std::pair<double, double>> recall_precision_pairs) {
    if (recall_precision_pairs.empty()) throw EmptyList("macro_f of an empty list");
    double mar = 0.0;
    double map = 0.0;
    for (const auto& [recall, precision] : recall_precision_pairs) {
        mar += recall;
        map += precision;
    }
    mar /= static_cast<double>(recall_precision_pairs.size());
    map /= static_cast<double>(recall_precision_pairs.size());
    return f_from(mar, map);
}

LoocvResult loocv(std::span<const SubjectDataset> subjects, const CostMatrix& cost,
                  const ForestHyperparams& hp, std::uint64_t seed) {
    if (subjects.size() < 2) {
        throw SingleSubject("leave-one-out cross-validation needs at least 2 subjects");
    }
    for (const auto& s : subjects) {
        if (s.data.names != subjects[0].data.names) {
            throw SchemaMismatch("subject '" + s.subject + "' has a different feature schema");
        }
    }

    // Fold order (and the per-fold seed streams) follow subject names so the
    // result does not depend on the order datasets were supplied in.
    std::vector<std::size_t> order(subjects.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return subjects[a].subject < subjects[b].subject; });

    LoocvResult result;
    result.per_subject.resize(subjects.size());

    detail::parallel_for(order.size(), [&](std::size_t fold) {
        const SubjectDataset& held_out = subjects[order[fold]];

        FeatureDataset training;
        training.names = subjects[0].data.names;
        for (std::size_t i = 0; i < subjects.size(); ++i) {
            if (i == order[fold]) continue;
            for (const auto& r : subjects[i].data.records) training.records.push_back(r);
        }

        const ForestModel model =
            train(training, cost, hp, detail::splitmix64(seed ^ (0x5eedf01dULL + fold)));

        std::vector<Label> predicted;
        std::vector<Label> actual;
        predicted.reserve(held_out.data.records.size());
        for (const auto& r : held_out.data.records) {
            if (!r.label) throw SchemaMismatch("held-out records must be labeled for scoring");
            predicted.push_back(predict(model, r.values));
            actual.push_back(*r.label);
        }

        SubjectResult& sr = result.per_subject[fold];
        sr.subject = held_out.subject;
        sr.counts = score(predicted, actual);
        sr.metric_values = metrics(sr.counts);
    });

    std::vector<std::pair<double, double>> defined_pairs;
    double mar_all = 0.0;
    double map_all = 0.0;
    for (const auto& sr : result.per_subject) {
        const auto& m = sr.metric_values;
        if (m.recall && m.precision) {
            defined_pairs.emplace_back(*m.recall, *m.precision);
        } else {
            result.excluded_subjects.push_back(sr.subject);
        }
        mar_all += m.recall.value_or(1.0);
        map_all += m.precision.value_or(1.0);
    }
    if (!defined_pairs.empty()) {
        double mar = 0.0;
        double map = 0.0;
        for (const auto& [r, p] : defined_pairs) {
            mar += r;
            map += p;
        }
        mar /= static_cast<double>(defined_pairs.size());
        map /= static_cast<double>(defined_pairs.size());
        result.macro_recall = mar;
        result.macro_precision = map;
        result.macro_f_score = f_from(mar, map);
    }
    mar_all /= static_cast<double>(result.per_subject.size());
    map_all /= static_cast<double>(result.per_subject.size());
    result.macro_f_all_subjects = f_from(mar_all, map_all);
    return result;
}

std::string loocv_report_csv(const LoocvResult& result) {
    std::string out = "subject,tp,fp,tn,fn,accuracy,recall,precision,f\n";
    for (const auto& sr : result.per_subject) {
        out += sr.subject;
        out += ',' + std::to_string(sr.counts.tp) + ',' + std::to_string(sr.counts.fp) + ',' +
               std::to_string(sr.counts.tn) + ',' + std::to_string(sr.counts.fn);
        out += ',' + fmt(sr.metric_values.accuracy_pct);
        out += ',';
        if (sr.metric_values.recall) out += fmt(*sr.metric_values.recall);
        out += ',';
        if (sr.metric_values.precision) out += fmt(*sr.metric_values.precision);
        out += ',';
        if (sr.metric_values.f_score) out += fmt(*sr.metric_values.f_score);
        out += '\n';
    }
    return out;
}

std::string loocv_summary_json(const LoocvResult& result) {
    nlohmann::json j;
    j["subjects"] = nlohmann::json::array();
    for (const auto& sr : result.per_subject) {
        nlohmann::json s;
        s["subject"] = sr.subject;
        s["tp"] = sr.counts.tp;
        s["fp"] = sr.counts.fp;
        s["tn"] = sr.counts.tn;
        s["fn"] = sr.counts.fn;
        s["accuracy_pct"] = sr.metric_values.accuracy_pct;
        if (sr.metric_values.recall) s["recall"] = *sr.metric_values.recall;
        if (sr.metric_values.precision) s["precision"] = *sr.metric_values.precision;
        if (sr.metric_values.f_score) s["f_score"] = *sr.metric_values.f_score;
        j["subjects"].push_back(std::move(s));
    }
    j["excluded_from_macro"] = result.excluded_subjects;
    if (result.macro_recall) j["macro_recall"] = *result.macro_recall;
    if (result.macro_precision) j["macro_precision"] = *result.macro_precision;
    if (result.macro_f_score) j["macro_f"] = *result.macro_f_score;
    j["macro_f_all_subjects_vacuous_perfect"] = result.macro_f_all_subjects;
    return j.dump(2);
}

}  // namespace seizurewave
