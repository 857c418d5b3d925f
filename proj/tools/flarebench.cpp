// flarebench: magnetogram patch preprocessing and flare-forecast
// verification toolkit. See README.md for the file formats.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flarebench/augment.hpp"
#include "flarebench/dataset.hpp"
#include "flarebench/driver.hpp"
#include "flarebench/evaluate.hpp"
#include "flarebench/io.hpp"
#include "flarebench/pipeline.hpp"

namespace fb = flarebench;
namespace fs = std::filesystem;

namespace {

std::string patch_id_of(const std::string& bundle_path) {
    return fs::path(fb::bundle_stem(bundle_path)).filename().string();
}

constexpr const char* kLabelsHeader =
    "patch_id,harp_id,observation_time,harp_onset_time,center_longitude,label,max_class,path";

struct LabeledRow {
    std::string patch_id;
    fb::PatchMetadata meta;
    fb::FlareLabel label;
    std::string path;
};

std::vector<LabeledRow> parse_labels_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fb::IoError("cannot open labels file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kLabelsHeader) {
        throw fb::ParseError("bad labels header in " + path);
    }
    std::vector<LabeledRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = fb::detail::split_csv_row(line);
        if (f.size() != 8) throw fb::ParseError("bad labels row in " + path + ": '" + line + "'");
        LabeledRow r;
        r.patch_id = f[0];
        r.meta.harp_id = std::stoi(f[1]);
        r.meta.observation_time = fb::parse_utc(f[2]);
        r.meta.harp_onset_time = fb::parse_utc(f[3]);
        r.meta.center_longitude = std::stod(f[4]);
        r.label.is_fl = f[5] == "FL";
        r.label.max_class_in_window = fb::FlareClass::parse(f[6]);
        r.path = f[7];
        rows.push_back(std::move(r));
    }
    return rows;
}

int cmd_preprocess(const fb::RunConfig& cfg, const std::vector<std::string>& inputs,
                   const std::string& out_dir) {
    fs::create_directories(out_dir);
    struct Result {
        std::string patch_id;
        std::optional<fb::ImagePatch> image;
        std::string stage;  // empty when accepted
    };
    auto results = fb::parallel_map<Result>(inputs.size(), cfg.workers, [&](std::size_t i) {
        const fb::PatchBundle bundle = fb::load_patch_bundle(inputs[i]);
        Result r;
        r.patch_id = patch_id_of(inputs[i]);
        fb::ProcessResult outcome = fb::process_patch(bundle.raster, bundle.bitmap, cfg.pipeline);
        if (auto* image = std::get_if<fb::ImagePatch>(&outcome)) {
            r.image = std::move(*image);
        } else {
            r.stage = fb::stage_name(std::get<fb::PatchRejection>(outcome).stage);
        }
        return r;
    });
    std::ofstream log(fs::path(out_dir) / "preprocess_log.csv", std::ios::binary);
    if (!log) throw fb::IoError("cannot write preprocess log in " + out_dir);
    log << "patch_id,status,stage\n";
    for (const Result& r : results) {
        if (r.image) {
            fb::write_image_pgm(*r.image, (fs::path(out_dir) / (r.patch_id + ".pgm")).string());
            log << r.patch_id << ",accepted,-\n";
        } else {
            log << r.patch_id << ",rejected," << r.stage << "\n";
        }
    }
    return 0;
}

int cmd_label(const fb::RunConfig& cfg, const std::vector<std::string>& inputs,
              const std::string& catalog_path, const std::string& out_path) {
    const auto events = fb::parse_flare_catalog(catalog_path);
    auto rows = fb::parallel_map<LabeledRow>(inputs.size(), cfg.workers, [&](std::size_t i) {
        const fb::PatchBundle bundle = fb::load_patch_bundle(inputs[i]);
        LabeledRow r;
        r.patch_id = patch_id_of(inputs[i]);
        r.meta = bundle.meta;
        r.label = fb::label_patch(bundle.meta, events);
        r.path = fb::bundle_stem(inputs[i]);
        return r;
    });
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw fb::IoError("cannot write labels file: " + out_path);
    out << kLabelsHeader << "\n";
    for (const LabeledRow& r : rows) {
        char lon[32];
        std::snprintf(lon, sizeof(lon), "%.6f", r.meta.center_longitude);
        out << r.patch_id << "," << r.meta.harp_id << "," << fb::format_utc(r.meta.observation_time)
            << "," << fb::format_utc(r.meta.harp_onset_time) << "," << lon << ","
            << r.label.name() << "," << r.label.max_class_in_window.to_string() << "," << r.path
            << "\n";
    }
    return 0;
}

int cmd_partition(const fb::RunConfig& cfg, const std::string& labels_path,
                  const std::string& out_path) {
    std::vector<fb::DatasetRecord> records;
    for (const LabeledRow& r : parse_labels_csv(labels_path)) {
        records.push_back({r.patch_id, r.meta.harp_id, r.meta.observation_time,
                           r.meta.harp_onset_time, r.label, r.path});
    }
    const auto manifest = fb::build_manifest(records, cfg.partition_scheme, cfg.sampling);
    fb::write_manifest_csv(manifest, out_path);
    return 0;
}

int cmd_augment(const fb::RunConfig& cfg, const std::string& labels_path,
                const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::vector<LabeledRow> fl_rows;
    for (LabeledRow& r : parse_labels_csv(labels_path)) {
        const int partition = fb::assign_partition(r.meta.harp_onset_time, cfg.partition_scheme);
        if (r.label.is_fl && partition <= 2) fl_rows.push_back(std::move(r));
    }
    struct Variants {
        std::vector<fb::AugmentedRecord> list;
    };
    auto all = fb::parallel_map<Variants>(fl_rows.size(), cfg.workers, [&](std::size_t i) {
        const LabeledRow& row = fl_rows[i];
        const fb::PatchBundle bundle = fb::load_patch_bundle(row.path);
        fb::PatchRecord record;
        record.patch_id = row.patch_id;
        record.meta = bundle.meta;
        record.raster = fb::clamp_flux(fb::roi_extract(bundle.raster, bundle.bitmap),
                                       cfg.pipeline);
        record.label = row.label;
        return Variants{fb::expand_fl_record(record, cfg.augment_seed, cfg.pipeline)};
    });
    for (const Variants& v : all) {
        for (const fb::AugmentedRecord& aug : v.list) {
            // Augmented bundles carry the extracted patch; the whole raster is
            // ROI, so the bitmap is all 34.
            fb::ArBitmap bitmap(aug.record.raster.height(), aug.record.raster.width(),
                                std::vector<std::uint8_t>(aug.record.raster.values().size(), 34));
            fb::write_patch_bundle((fs::path(out_dir) / aug.record.patch_id).string(),
                                   aug.record.raster, bitmap, aug.record.meta);
        }
    }
    return 0;
}

int cmd_calibrate(const std::string& predictions_path, const std::string& out_path) {
    const auto records = fb::parse_prediction_csv(predictions_path);
    const double threshold = fb::calibrate_threshold(records);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", threshold);
    std::cout << "threshold=" << buf << "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw fb::IoError("cannot write threshold file: " + out_path);
        out << buf << "\n";
    }
    return 0;
}

int cmd_evaluate(const fb::RunConfig& cfg, const std::string& predictions_path, double threshold,
                 const std::string& out_dir) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw fb::ParameterError("threshold must lie in (0, 1)");
    }
    const auto records = fb::parse_prediction_csv(predictions_path);
    fs::create_directories(out_dir);

    const std::vector<double> limits = {30.0, 45.0, 60.0, 75.0, 90.0};
    auto longitude_rows =
        fb::parallel_map<fb::SubsetResult>(limits.size(), cfg.workers, [&](std::size_t i) {
            std::vector<fb::PredictionRecord> subset;
            for (const auto& r : records) {
                if (std::abs(r.center_longitude) <= limits[i]) subset.push_back(r);
            }
            char name[32];
            std::snprintf(name, sizeof(name), "lon<=%g", limits[i]);
            return fb::evaluate_subset(name, subset, threshold);
        });
    fb::render_report(longitude_rows, (fs::path(out_dir) / "longitude_report.csv").string());

    const fb::ZoneTable zones = fb::evaluate_zones(records, threshold);
    fb::render_report({zones.zone1, zones.zone2, zones.zone3},
                      (fs::path(out_dir) / "zone_report.csv").string());
    return 0;
}

int cmd_report(const std::string& report_path, const std::string& out_path) {
    const auto rows = fb::parse_report_csv(report_path);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw fb::IoError("cannot write series file: " + out_path);
    out << "subset,tss,hss,css\n";
    for (const auto& r : rows) {
        out << r.subset << ",";
        if (r.scores) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f", r.scores->tss, r.scores->hss,
                          r.scores->css);
            out << buf;
        } else {
            out << "NA,NA,NA";
        }
        out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Magnetogram patch preprocessing and flare-forecast verification"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string catalog_path;
    std::string labels_path;
    std::string predictions_path;
    std::string report_path;
    std::vector<std::string> inputs;
    std::optional<int> workers_opt;
    std::optional<std::uint64_t> seed_opt;
    double threshold = 0.5;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file");
        sub->add_option("--workers", workers_opt, "worker thread count");
        sub->add_option("--seed", seed_opt, "seed override for sampling and augmentation");
    };

    CLI::App* preprocess = app.add_subcommand("preprocess", "bundles -> PGM images + log");
    add_common(preprocess);
    preprocess->add_option("--out", out_path, "output directory");
    preprocess->add_option("inputs", inputs, "patch bundle paths")->required();

    CLI::App* label = app.add_subcommand("label", "bundles + catalog -> labeled manifest");
    add_common(label);
    label->add_option("--catalog", catalog_path, "flare catalog CSV")->required();
    label->add_option("--out", out_path, "labels CSV path");
    label->add_option("inputs", inputs, "patch bundle paths")->required();

    CLI::App* partition = app.add_subcommand("partition", "labels -> split manifest");
    add_common(partition);
    partition->add_option("--labels", labels_path, "labels CSV from `label`")->required();
    partition->add_option("--out", out_path, "manifest CSV path");

    CLI::App* augment = app.add_subcommand("augment", "train FL rows -> augmented bundles");
    add_common(augment);
    augment->add_option("--labels", labels_path, "labels CSV from `label`")->required();
    augment->add_option("--out", out_path, "output directory");

    CLI::App* calibrate = app.add_subcommand("calibrate", "validation predictions -> threshold");
    add_common(calibrate);
    calibrate->add_option("--predictions", predictions_path, "prediction CSV")->required();
    calibrate->add_option("--out", out_path, "optional threshold output file");

    CLI::App* evaluate = app.add_subcommand("evaluate", "predictions -> subset/zone reports");
    add_common(evaluate);
    evaluate->add_option("--predictions", predictions_path, "prediction CSV")->required();
    evaluate->add_option("--threshold", threshold, "decision threshold")->required();
    evaluate->add_option("--out", out_path, "output directory");

    CLI::App* report = app.add_subcommand("report", "report CSV -> plot-ready series");
    add_common(report);
    report->add_option("--report", report_path, "report CSV from `evaluate`")->required();
    report->add_option("--out", out_path, "series CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        fb::RunConfig cfg;
        if (!config_path.empty()) cfg = fb::parse_run_config(config_path);
        if (workers_opt) cfg.workers = *workers_opt;
        if (seed_opt) {
            cfg.sampling.seed = *seed_opt;
            cfg.augment_seed = *seed_opt;
        }
        cfg.validate();

        if (preprocess->parsed()) {
            return cmd_preprocess(cfg, inputs, out_path.empty() ? "out" : out_path);
        }
        if (label->parsed()) {
            return cmd_label(cfg, inputs, catalog_path,
                             out_path.empty() ? "labels.csv" : out_path);
        }
        if (partition->parsed()) {
            return cmd_partition(cfg, labels_path, out_path.empty() ? "manifest.csv" : out_path);
        }
        if (augment->parsed()) {
            return cmd_augment(cfg, labels_path, out_path.empty() ? "augmented" : out_path);
        }
        if (calibrate->parsed()) {
            return cmd_calibrate(predictions_path, out_path);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(cfg, predictions_path, threshold,
                                out_path.empty() ? "reports" : out_path);
        }
        if (report->parsed()) {
            return cmd_report(report_path, out_path.empty() ? "series.csv" : out_path);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
