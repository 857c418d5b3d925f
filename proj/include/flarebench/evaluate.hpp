#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "flarebench/error.hpp"
#include "flarebench/timeutil.hpp"

namespace flarebench {

/// One externally produced model output for a patch.
struct PredictionRecord {
    std::string patch_id;
    UtcTime observation_time = 0;
    double center_longitude = 0.0;
    double score = 0.0;  // in [0, 1]
    bool true_fl = false;

    void validate() const {
        if (!(score >= 0.0 && score <= 1.0)) {
            throw ContractViolation("score outside [0, 1]");
        }
        if (std::abs(center_longitude) > 90.0) {
            throw ContractViolation("longitude outside [-90, 90]");
        }
    }
};

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t positives() const { return tp + fn; }
    std::uint64_t negatives() const { return tn + fp; }

    bool operator==(const ConfusionCounts&) const = default;
};

inline ConfusionCounts merge_counts(const ConfusionCounts& a, const ConfusionCounts& b) {
    return {a.tp + b.tp, a.tn + b.tn, a.fp + b.fp, a.fn + b.fn};
}

/// Tallies records against truth with the inclusive rule: predicted FL iff
/// score >= threshold.
inline ConfusionCounts confusion_counts(const std::vector<PredictionRecord>& records,
                                        double threshold) {
    ConfusionCounts c;
    for (const PredictionRecord& r : records) {
        const bool predicted_fl = r.score >= threshold;
        if (r.true_fl) {
            predicted_fl ? ++c.tp : ++c.fn;
        } else {
            predicted_fl ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

/// True Skill Statistic: TP/(TP+FN) - FP/(FP+TN).
inline double tss(const ConfusionCounts& c) {
    if (c.positives() == 0 || c.negatives() == 0) {
        throw UndefinedScoreError("TSS undefined: evaluation set lacks a class");
    }
    return static_cast<double>(c.tp) / static_cast<double>(c.positives()) -
           static_cast<double>(c.fp) / static_cast<double>(c.negatives());
}

/// Heidke Skill Score: 2 (TP*TN - FN*FP) / (P (FN+TN) + (TP+FP) N).
inline double hss(const ConfusionCounts& c) {
    const double denom = static_cast<double>(c.positives()) * static_cast<double>(c.fn + c.tn) +
                         static_cast<double>(c.tp + c.fp) * static_cast<double>(c.negatives());
    if (denom <= 0.0) {
        throw UndefinedScoreError("HSS undefined: zero denominator");
    }
    const double num = static_cast<double>(c.tp) * static_cast<double>(c.tn) -
                       static_cast<double>(c.fn) * static_cast<double>(c.fp);
    return 2.0 * num / denom;
}

/// Composite Skill Score: 0 when TSS*HSS < 0, else sqrt(TSS*HSS).
inline double css(double tss_value, double hss_value) {
    const double product = tss_value * hss_value;
    return product < 0.0 ? 0.0 : std::sqrt(product);
}

struct SkillScores {
    double tss = 0.0;
    double hss = 0.0;
    double css = 0.0;
};

inline SkillScores skill_scores(const ConfusionCounts& c) {
    SkillScores s;
    s.tss = tss(c);
    s.hss = hss(c);
    s.css = css(s.tss, s.hss);
    return s;
}

/// One evaluated subset; scores are absent when the subset is degenerate.
struct SubsetResult {
    std::string name;
    ConfusionCounts counts;
    std::optional<SkillScores> scores;
};

inline SubsetResult evaluate_subset(std::string name, const std::vector<PredictionRecord>& records,
                                    double threshold) {
    SubsetResult row;
    row.name = std::move(name);
    row.counts = confusion_counts(records, threshold);
    try {
        row.scores = skill_scores(row.counts);
    } catch (const UndefinedScoreError&) {
        row.scores = std::nullopt;
    }
    return row;
}

/// Grid search over thresholds 0.01..0.99 step 0.01 maximizing CSS on the
/// validation set. Ties break to the smallest threshold.
inline double calibrate_threshold(const std::vector<PredictionRecord>& validation) {
    bool has_fl = false, has_nf = false;
    for (const PredictionRecord& r : validation) (r.true_fl ? has_fl : has_nf) = true;
    if (!has_fl || !has_nf) {
        throw UndefinedScoreError("calibration requires both FL and NF records");
    }
    double best_threshold = 0.01;
    double best_css = -1.0;
    for (int i = 1; i <= 99; ++i) {
        const double threshold = static_cast<double>(i) / 100.0;
        const SkillScores s = skill_scores(confusion_counts(validation, threshold));
        if (s.css > best_css) {
            best_css = s.css;
            best_threshold = threshold;
        }
    }
    return best_threshold;
}

/// Cumulative |longitude| <= L evaluation, default L in {30,45,60,75,90}.
inline std::vector<SubsetResult> evaluate_longitude_subsets(
    const std::vector<PredictionRecord>& records, double threshold,
    const std::vector<double>& limits = {30.0, 45.0, 60.0, 75.0, 90.0}) {
    std::vector<SubsetResult> table;
    table.reserve(limits.size());
    for (double limit : limits) {
        std::vector<PredictionRecord> subset;
        for (const PredictionRecord& r : records) {
            if (std::abs(r.center_longitude) <= limit) subset.push_back(r);
        }
        char name[32];
        std::snprintf(name, sizeof(name), "lon<=%g", limit);
        table.push_back(evaluate_subset(name, subset, threshold));
    }
    return table;
}

/// Disjoint zone evaluation: Zone 1 |lon| <= 30, Zone 2 (30, 60], Zone 3
/// (60, 90]. Boundary points assign inward.
struct ZoneTable {
    SubsetResult zone1;
    SubsetResult zone2;
    SubsetResult zone3;
};

inline int zone_of(double longitude) {
    const double a = std::abs(longitude);
    if (a <= 30.0) return 1;
    if (a <= 60.0) return 2;
    return 3;
}

inline ZoneTable evaluate_zones(const std::vector<PredictionRecord>& records, double threshold) {
    std::vector<PredictionRecord> zones[3];
    for (const PredictionRecord& r : records) {
        zones[zone_of(r.center_longitude) - 1].push_back(r);
    }
    return {evaluate_subset("zone1", zones[0], threshold),
            evaluate_subset("zone2", zones[1], threshold),
            evaluate_subset("zone3", zones[2], threshold)};
}

}  // namespace flarebench
