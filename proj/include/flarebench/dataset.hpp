#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flarebench/augment.hpp"
#include "flarebench/error.hpp"
#include "flarebench/flare.hpp"
#include "flarebench/rng.hpp"
#include "flarebench/timeutil.hpp"

namespace flarebench {

/// Four disjoint month groups covering the calendar year. Default scheme is
/// contiguous quarters.
struct PartitionScheme {
    std::array<std::set<int>, 4> month_groups = {
        std::set<int>{1, 2, 3},
        std::set<int>{4, 5, 6},
        std::set<int>{7, 8, 9},
        std::set<int>{10, 11, 12},
    };

    void validate() const {
        std::set<int> all;
        for (const auto& g : month_groups) {
            for (int m : g) {
                if (m < 1 || m > 12 || !all.insert(m).second) {
                    throw ContractViolation("month groups must be disjoint and within 1..12");
                }
            }
        }
        if (all.size() != 12) {
            throw ContractViolation("month groups must cover every calendar month");
        }
    }
};

/// Per-subclass NF undersampling fractions.
struct SamplingPlan {
    double fraction_a = 0.30;
    double fraction_b = 0.30;
    double fraction_c = 0.30;
    double fraction_fq = 0.08;
    std::uint64_t seed = 0;

    double fraction_for(FlareLetter letter) const {
        switch (letter) {
            case FlareLetter::A: return fraction_a;
            case FlareLetter::B: return fraction_b;
            case FlareLetter::C: return fraction_c;
            default: return fraction_fq;
        }
    }

    void validate() const {
        for (double f : {fraction_a, fraction_b, fraction_c, fraction_fq}) {
            if (!(f >= 0.0 && f <= 1.0)) {
                throw ContractViolation("sampling fractions must lie in [0, 1]");
            }
        }
    }
};

/// Partition id (1..4) from the HARP onset month. Every record of a HARP
/// series shares the onset, so the whole trajectory lands in one partition.
inline int assign_partition(UtcTime onset, const PartitionScheme& scheme = {}) {
    const int month = utc_month(onset);
    for (int g = 0; g < 4; ++g) {
        if (scheme.month_groups[g].count(month)) return g + 1;
    }
    throw ContractViolation("partition scheme does not cover month " + std::to_string(month));
}

/// Identity-level record used for curation; the raster stays on disk.
struct DatasetRecord {
    std::string patch_id;
    int harp_id = 0;
    UtcTime observation_time = 0;
    UtcTime harp_onset_time = 0;
    FlareLabel label;
    std::string path;
};

/// Stratified undersampling of NF records: per subclass (FQ/A/B/C) selects
/// floor(fraction * count) records without replacement. Deterministic in the
/// plan seed; candidates are ordered by patch_id before drawing.
inline std::vector<DatasetRecord> undersample_nf(const std::vector<DatasetRecord>& records,
                                                 const SamplingPlan& plan) {
    plan.validate();
    for (const DatasetRecord& r : records) {
        if (r.label.is_fl) {
            throw ContractViolation("undersample_nf received an FL record");
        }
    }
    std::map<FlareLetter, std::vector<const DatasetRecord*>> strata;
    for (const DatasetRecord& r : records) {
        strata[r.label.max_class_in_window.letter].push_back(&r);
    }
    std::vector<DatasetRecord> selected;
    for (auto& [letter, stratum] : strata) {
        std::sort(stratum.begin(), stratum.end(),
                  [](const DatasetRecord* a, const DatasetRecord* b) {
                      return a->patch_id < b->patch_id;
                  });
        const auto count = static_cast<std::size_t>(
            std::floor(plan.fraction_for(letter) * static_cast<double>(stratum.size())));
        const std::uint64_t stratum_seed =
            mix_seed(plan.seed, static_cast<std::uint64_t>(letter) + 1);
        for (std::size_t i : sample_without_replacement(stratum.size(), count, stratum_seed)) {
            selected.push_back(*stratum[i]);
        }
    }
    std::sort(selected.begin(), selected.end(),
              [](const DatasetRecord& a, const DatasetRecord& b) {
                  return a.patch_id < b.patch_id;
              });
    return selected;
}

/// Per-class counts and the NF:FL imbalance ratio.
struct DatasetStats {
    std::map<std::string, std::uint64_t> per_class;
    std::uint64_t nf_count = 0;
    std::uint64_t fl_count = 0;
    std::optional<double> imbalance_ratio;  // NF / FL; absent when FL = 0
};

inline DatasetStats dataset_stats(const std::vector<DatasetRecord>& records) {
    DatasetStats stats;
    for (const DatasetRecord& r : records) {
        ++stats.per_class[r.label.max_class_in_window.letter == FlareLetter::Quiet
                              ? "FQ"
                              : letter_name(r.label.max_class_in_window.letter)];
        r.label.is_fl ? ++stats.fl_count : ++stats.nf_count;
    }
    if (stats.fl_count > 0) {
        stats.imbalance_ratio =
            static_cast<double>(stats.nf_count) / static_cast<double>(stats.fl_count);
    }
    return stats;
}

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace detail

/// Flare catalog CSV: "noaa_ar,start_time,peak_time,end_time,class" with an
/// optional trailing "peak_flux" column. A header row is skipped if present.
/// Rows with a missing NOAA AR or sub-A class are kept but flagged.
inline std::vector<FlareEvent> parse_flare_catalog(std::istream& in) {
    std::vector<FlareEvent> events;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (row == 1 && line.rfind("noaa_ar,", 0) == 0) continue;
        const auto fields = detail::split_csv_row(line);
        if (fields.size() != 5 && fields.size() != 6) {
            throw ParseError("catalog row " + std::to_string(row) + ": expected 5 or 6 fields");
        }
        FlareEvent e;
        try {
            if (!fields[0].empty()) e.noaa_ar = std::stoi(fields[0]);
            e.start_time = parse_utc(fields[1]);
            e.peak_time = parse_utc(fields[2]);
            e.end_time = parse_utc(fields[3]);
            e.flare_class = FlareClass::parse(fields[4]);
            if (fields.size() == 6 && !fields[5].empty()) e.peak_flux = std::stod(fields[5]);
        } catch (const std::exception& ex) {
            throw ParseError("catalog row " + std::to_string(row) + ": " + ex.what());
        }
        if (!(e.start_time <= e.peak_time && e.peak_time <= e.end_time)) {
            throw ParseError("catalog row " + std::to_string(row) +
                             ": times must satisfy start <= peak <= end");
        }
        e.flagged = !e.noaa_ar || e.flare_class.letter < FlareLetter::A;
        events.push_back(e);
    }
    return events;
}

inline std::vector<FlareEvent> parse_flare_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open flare catalog: " + path);
    return parse_flare_catalog(in);
}

/// One manifest line: where an instance lives and how it entered the split.
struct ManifestRow {
    std::string patch_id;
    int harp_id = 0;
    int partition = 0;
    std::string split;       // train / validation / test
    std::string label;       // FL / NF
    std::string provenance;  // original or the augmentation name
    std::string path;
};

/// Builds the full dataset manifest. Partitions 1+2 form the training split
/// with NF undersampling and 5x FL augmentation rows; partitions 3 and 4 are
/// the untouched validation and test splits.
inline std::vector<ManifestRow> build_manifest(const std::vector<DatasetRecord>& records,
                                               const PartitionScheme& scheme,
                                               const SamplingPlan& plan) {
    scheme.validate();
    {
        std::set<std::string> ids;
        for (const DatasetRecord& r : records) {
            if (!ids.insert(r.patch_id).second) {
                throw ContractViolation("duplicate patch id: " + r.patch_id);
            }
        }
    }
    std::vector<DatasetRecord> ordered(records);
    std::sort(ordered.begin(), ordered.end(),
              [](const DatasetRecord& a, const DatasetRecord& b) {
                  return a.patch_id < b.patch_id;
              });

    std::vector<DatasetRecord> train_nf;
    std::vector<ManifestRow> manifest;
    auto emit = [&manifest](const DatasetRecord& r, int partition, const std::string& split,
                            const std::string& provenance, const std::string& id_suffix = "") {
        manifest.push_back({r.patch_id + id_suffix, r.harp_id, partition, split,
                            r.label.is_fl ? "FL" : "NF", provenance,
                            id_suffix.empty() ? r.path : r.path + id_suffix});
    };

    for (const DatasetRecord& r : ordered) {
        const int partition = assign_partition(r.harp_onset_time, scheme);
        if (partition <= 2) {
            if (r.label.is_fl) {
                emit(r, partition, "train", "original");
                for (AugmentationKind kind : kAllAugmentations) {
                    emit(r, partition, "train", augmentation_name(kind),
                         std::string("_") + augmentation_name(kind));
                }
            } else {
                train_nf.push_back(r);
            }
        } else {
            emit(r, partition, partition == 3 ? "validation" : "test", "original");
        }
    }
    for (const DatasetRecord& r : undersample_nf(train_nf, plan)) {
        emit(r, assign_partition(r.harp_onset_time, scheme), "train", "original");
    }
    std::sort(manifest.begin(), manifest.end(),
              [](const ManifestRow& a, const ManifestRow& b) { return a.patch_id < b.patch_id; });
    return manifest;
}

}  // namespace flarebench
