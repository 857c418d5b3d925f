#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "flarebench/dataset.hpp"
#include "flarebench/error.hpp"
#include "flarebench/evaluate.hpp"
#include "flarebench/raster.hpp"
#include "flarebench/timeutil.hpp"

namespace flarebench {

// ---------------------------------------------------------------------------
// Patch bundles: <stem>.meta (key=value text), <stem>.flux (row-major LE
// 32-bit floats), <stem>.bitmap (row-major bytes).
// ---------------------------------------------------------------------------

inline std::string bundle_stem(const std::string& path) {
    if (path.size() > 5 && path.compare(path.size() - 5, 5, ".meta") == 0) {
        return path.substr(0, path.size() - 5);
    }
    return path;
}

namespace detail {

inline void write_le_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    const unsigned char raw[4] = {
        static_cast<unsigned char>(bits & 0xff),
        static_cast<unsigned char>((bits >> 8) & 0xff),
        static_cast<unsigned char>((bits >> 16) & 0xff),
        static_cast<unsigned char>((bits >> 24) & 0xff),
    };
    out.write(reinterpret_cast<const char*>(raw), 4);
}

inline float read_le_f32(const unsigned char* raw) {
    const std::uint32_t bits = static_cast<std::uint32_t>(raw[0]) |
                               (static_cast<std::uint32_t>(raw[1]) << 8) |
                               (static_cast<std::uint32_t>(raw[2]) << 16) |
                               (static_cast<std::uint32_t>(raw[3]) << 24);
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

inline std::map<std::string, std::string> read_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("malformed key=value line in " + path + ": '" + line + "'");
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

inline const std::string& require_key(const std::map<std::string, std::string>& kv,
                                      const std::string& key, const std::string& path) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("missing key '" + key + "' in " + path);
    return it->second;
}

}  // namespace detail

inline void write_patch_bundle(const std::string& stem, const FluxRaster& raster,
                               const ArBitmap& bitmap, const PatchMetadata& meta) {
    if (raster.height() != bitmap.height() || raster.width() != bitmap.width()) {
        throw InvalidPairError("raster and bitmap dimensions differ");
    }
    {
        std::ofstream out(stem + ".meta");
        if (!out) throw IoError("cannot write: " + stem + ".meta");
        out << "harp_id=" << meta.harp_id << "\n";
        if (meta.noaa_ar) out << "noaa_ar=" << *meta.noaa_ar << "\n";
        out << "observation_time=" << format_utc(meta.observation_time) << "\n";
        out << "harp_onset_time=" << format_utc(meta.harp_onset_time) << "\n";
        char lon[32];
        std::snprintf(lon, sizeof(lon), "%.6f", meta.center_longitude);
        out << "center_longitude=" << lon << "\n";
        out << "height=" << raster.height() << "\n";
        out << "width=" << raster.width() << "\n";
    }
    {
        std::ofstream out(stem + ".flux", std::ios::binary);
        if (!out) throw IoError("cannot write: " + stem + ".flux");
        for (float v : raster.values()) detail::write_le_f32(out, v);
    }
    {
        std::ofstream out(stem + ".bitmap", std::ios::binary);
        if (!out) throw IoError("cannot write: " + stem + ".bitmap");
        out.write(reinterpret_cast<const char*>(bitmap.codes().data()),
                  static_cast<std::streamsize>(bitmap.codes().size()));
    }
}

struct PatchBundle {
    FluxRaster raster;
    ArBitmap bitmap;
    PatchMetadata meta;
};

inline PatchBundle load_patch_bundle(const std::string& path) {
    const std::string stem = bundle_stem(path);
    const std::string meta_path = stem + ".meta";
    const auto kv = detail::read_kv_file(meta_path);

    PatchMetadata meta;
    meta.harp_id = std::stoi(detail::require_key(kv, "harp_id", meta_path));
    if (auto it = kv.find("noaa_ar"); it != kv.end() && !it->second.empty()) {
        meta.noaa_ar = std::stoi(it->second);
    }
    meta.observation_time = parse_utc(detail::require_key(kv, "observation_time", meta_path));
    meta.harp_onset_time = parse_utc(detail::require_key(kv, "harp_onset_time", meta_path));
    meta.center_longitude = std::stod(detail::require_key(kv, "center_longitude", meta_path));
    const int height = std::stoi(detail::require_key(kv, "height", meta_path));
    const int width = std::stoi(detail::require_key(kv, "width", meta_path));
    if (height < 1 || width < 1) throw ParseError("non-positive dimensions in " + meta_path);
    meta.validate();
    const std::size_t pixels = static_cast<std::size_t>(height) * width;

    std::ifstream flux_in(stem + ".flux", std::ios::binary);
    if (!flux_in) throw IoError("cannot open: " + stem + ".flux");
    std::vector<unsigned char> raw((std::istreambuf_iterator<char>(flux_in)),
                                   std::istreambuf_iterator<char>());
    if (raw.size() != pixels * 4) {
        throw ParseError("flux payload length mismatch in " + stem + ".flux: expected " +
                         std::to_string(pixels * 4) + " bytes, got " + std::to_string(raw.size()));
    }
    std::vector<float> values(pixels);
    for (std::size_t i = 0; i < pixels; ++i) values[i] = detail::read_le_f32(&raw[i * 4]);

    std::ifstream bm_in(stem + ".bitmap", std::ios::binary);
    if (!bm_in) throw IoError("cannot open: " + stem + ".bitmap");
    std::vector<std::uint8_t> codes((std::istreambuf_iterator<char>(bm_in)),
                                    std::istreambuf_iterator<char>());
    if (codes.size() != pixels) {
        throw ParseError("bitmap payload length mismatch in " + stem + ".bitmap");
    }
    for (std::uint8_t c : codes) {
        if (!ArBitmap::is_valid_code(c)) {
            throw ParseError("invalid bitmap code " + std::to_string(c) + " in " + stem +
                             ".bitmap");
        }
    }
    return {FluxRaster(height, width, std::move(values)), ArBitmap(height, width, std::move(codes)),
            meta};
}

// ---------------------------------------------------------------------------
// Binary PGM (P5) image emission.
// ---------------------------------------------------------------------------

inline void write_image_pgm(const ImagePatch& patch, const std::string& path) {
    if (patch.side < 1 || patch.bytes.size() != static_cast<std::size_t>(patch.side) * patch.side) {
        throw ContractViolation("malformed image patch");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + path);
    out << "P5\n" << patch.side << " " << patch.side << "\n255\n";
    out.write(reinterpret_cast<const char*>(patch.bytes.data()),
              static_cast<std::streamsize>(patch.bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Prediction CSV.
// ---------------------------------------------------------------------------

inline constexpr const char* kPredictionHeader =
    "patch_id,observation_time,center_longitude,true_label,score";

inline std::vector<PredictionRecord> parse_prediction_csv(std::istream& in,
                                                          const std::string& context = "<stream>") {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty prediction file: " + context);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kPredictionHeader) {
        throw ParseError("bad prediction header in " + context + ": '" + line + "'");
    }
    std::vector<PredictionRecord> records;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_row(line);
        if (fields.size() != 5) {
            throw ParseError(context + " row " + std::to_string(row) + ": expected 5 fields");
        }
        PredictionRecord r;
        r.patch_id = fields[0];
        try {
            r.observation_time = parse_utc(fields[1]);
            r.center_longitude = std::stod(fields[2]);
            if (fields[3] == "FL") {
                r.true_fl = true;
            } else if (fields[3] == "NF") {
                r.true_fl = false;
            } else {
                throw ParseError("label must be FL or NF, got '" + fields[3] + "'");
            }
            r.score = std::stod(fields[4]);
            r.validate();
        } catch (const std::exception& ex) {
            throw ParseError(context + " row " + std::to_string(row) + ": " + ex.what());
        }
        records.push_back(std::move(r));
    }
    return records;
}

inline std::vector<PredictionRecord> parse_prediction_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open predictions: " + path);
    return parse_prediction_csv(in, path);
}

// ---------------------------------------------------------------------------
// Skill report CSV: "subset,tp,fp,tn,fn,tss,hss,css", six-decimal scores,
// "NA" for undefined rows.
// ---------------------------------------------------------------------------

inline void render_report(const std::vector<SubsetResult>& rows, std::ostream& out) {
    out << "subset,tp,fp,tn,fn,tss,hss,css\n";
    for (const SubsetResult& row : rows) {
        out << row.name << "," << row.counts.tp << "," << row.counts.fp << "," << row.counts.tn
            << "," << row.counts.fn << ",";
        if (row.scores) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f", row.scores->tss, row.scores->hss,
                          row.scores->css);
            out << buf;
        } else {
            out << "NA,NA,NA";
        }
        out << "\n";
    }
}

inline void render_report(const std::vector<SubsetResult>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report: " + path);
    render_report(rows, out);
    if (!out) throw IoError("write failed: " + path);
}

/// Reads a report back; used by the `report` subcommand to emit plot series.
struct ReportRow {
    std::string subset;
    ConfusionCounts counts;
    std::optional<SkillScores> scores;
};

inline std::vector<ReportRow> parse_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open report: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("subset,", 0) != 0) {
        throw ParseError("bad report header in " + path);
    }
    std::vector<ReportRow> rows;
    std::size_t rowno = 1;
    while (std::getline(in, line)) {
        ++rowno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = detail::split_csv_row(line);
        if (f.size() != 8) {
            throw ParseError(path + " row " + std::to_string(rowno) + ": expected 8 fields");
        }
        ReportRow r;
        r.subset = f[0];
        r.counts = {std::stoull(f[1]), std::stoull(f[3]), std::stoull(f[2]), std::stoull(f[4])};
        if (f[5] != "NA") {
            r.scores = SkillScores{std::stod(f[5]), std::stod(f[6]), std::stod(f[7])};
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Manifest CSV: "patch_id,harp_id,partition,split,label,provenance,path".
// ---------------------------------------------------------------------------

inline constexpr const char* kManifestHeader =
    "patch_id,harp_id,partition,split,label,provenance,path";

inline void write_manifest_csv(const std::vector<ManifestRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest: " + path);
    out << kManifestHeader << "\n";
    for (const ManifestRow& r : rows) {
        out << r.patch_id << "," << r.harp_id << "," << r.partition << "," << r.split << ","
            << r.label << "," << r.provenance << "," << r.path << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

inline std::vector<ManifestRow> parse_manifest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty manifest: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kManifestHeader) throw ParseError("bad manifest header in " + path);
    std::vector<ManifestRow> rows;
    std::size_t rowno = 1;
    while (std::getline(in, line)) {
        ++rowno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = detail::split_csv_row(line);
        if (f.size() != 7) {
            throw ParseError(path + " row " + std::to_string(rowno) + ": expected 7 fields");
        }
        rows.push_back({f[0], std::stoi(f[1]), std::stoi(f[2]), f[3], f[4], f[5], f[6]});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Run configuration: flat key=value file.
// ---------------------------------------------------------------------------

struct RunConfig {
    PipelineConfig pipeline;
    PartitionScheme partition_scheme;
    SamplingPlan sampling;
    std::uint64_t augment_seed = 0;
    int workers = 1;

    void validate() const {
        pipeline.validate();
        partition_scheme.validate();
        sampling.validate();
        if (workers < 1) throw ContractViolation("worker count must be >= 1");
    }
};

inline RunConfig parse_run_config(const std::string& path) {
    const auto kv = detail::read_kv_file(path);
    RunConfig cfg;
    auto get = [&kv](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    if (auto v = get("clamp_cap")) cfg.pipeline.clamp_cap = std::stod(*v);
    if (auto v = get("zero_band")) cfg.pipeline.zero_band = std::stod(*v);
    if (auto v = get("min_roi_width")) cfg.pipeline.min_roi_width = std::stoi(*v);
    if (auto v = get("target_side")) cfg.pipeline.target_side = std::stoi(*v);
    for (int g = 0; g < 4; ++g) {
        const std::string key = "partition" + std::to_string(g + 1) + "_months";
        if (auto v = get(key.c_str())) {
            std::set<int> months;
            std::istringstream in(*v);
            std::string tok;
            while (std::getline(in, tok, ',')) months.insert(std::stoi(tok));
            cfg.partition_scheme.month_groups[g] = std::move(months);
        }
    }
    if (auto v = get("fraction_a")) cfg.sampling.fraction_a = std::stod(*v);
    if (auto v = get("fraction_b")) cfg.sampling.fraction_b = std::stod(*v);
    if (auto v = get("fraction_c")) cfg.sampling.fraction_c = std::stod(*v);
    if (auto v = get("fraction_fq")) cfg.sampling.fraction_fq = std::stod(*v);
    if (auto v = get("sampling_seed")) cfg.sampling.seed = std::stoull(*v);
    if (auto v = get("augment_seed")) cfg.augment_seed = std::stoull(*v);
    if (auto v = get("workers")) cfg.workers = std::stoi(*v);
    cfg.validate();
    return cfg;
}

}  // namespace flarebench
