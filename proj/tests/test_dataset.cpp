#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "flarebench/dataset.hpp"

using namespace flarebench;

namespace {

DatasetRecord make_record(std::string id, int harp, const char* onset, bool fl,
                          const char* max_class) {
    DatasetRecord r;
    r.patch_id = std::move(id);
    r.harp_id = harp;
    r.harp_onset_time = parse_utc(onset);
    r.observation_time = r.harp_onset_time + 3600;
    r.label.is_fl = fl;
    r.label.max_class_in_window = FlareClass::parse(max_class);
    r.path = "bundles/" + r.patch_id;
    return r;
}

}  // namespace

TEST_CASE("classify_peak_flux NOAA decade convention") {
    REQUIRE(classify_peak_flux(1e-5).to_string() == "M1.0");
    REQUIRE(classify_peak_flux(2.2e-5).to_string() == "M2.2");
    REQUIRE(classify_peak_flux(9.9e-6).to_string() == "C9.9");
    REQUIRE(classify_peak_flux(1e-4).to_string() == "X1.0");
    REQUIRE(classify_peak_flux(5.67e-7).to_string() == "B5.6");
    REQUIRE(classify_peak_flux(1e-9).letter == FlareLetter::Quiet);
    REQUIRE_THROWS_AS(classify_peak_flux(0.0), ParameterError);
    REQUIRE_THROWS_AS(classify_peak_flux(-1e-5), ParameterError);
}

TEST_CASE("label_patch 24-hour half-open window") {
    PatchMetadata meta;
    meta.harp_id = 4781;
    meta.noaa_ar = 12205;
    meta.observation_time = parse_utc("2014-11-06T18:00:00Z");
    meta.harp_onset_time = parse_utc("2014-11-01T00:00:00Z");

    auto event = [&](const char* peak, const char* cls, int ar = 12205) {
        FlareEvent e;
        e.noaa_ar = ar;
        e.peak_time = parse_utc(peak);
        e.start_time = e.peak_time - 600;
        e.end_time = e.peak_time + 600;
        e.flare_class = FlareClass::parse(cls);
        return e;
    };

    SECTION("M1.5 at t+3h -> FL") {
        const FlareLabel l = label_patch(meta, {event("2014-11-06T21:00:00Z", "M1.5")});
        REQUIRE(l.is_fl);
        REQUIRE(l.max_class_in_window.to_string() == "M1.5");
    }
    SECTION("only C9.9 at t+1h -> NF with max class C") {
        const FlareLabel l = label_patch(meta, {event("2014-11-06T19:00:00Z", "C9.9")});
        REQUIRE_FALSE(l.is_fl);
        REQUIRE(l.max_class_in_window.to_string() == "C9.9");
    }
    SECTION("M1.0 at t+25h is outside the window") {
        REQUIRE_FALSE(label_patch(meta, {event("2014-11-07T19:00:00Z", "M1.0")}).is_fl);
    }
    SECTION("window boundaries: exclusive at t, inclusive at t+24h") {
        REQUIRE_FALSE(label_patch(meta, {event("2014-11-06T18:00:00Z", "M5.0")}).is_fl);
        REQUIRE(label_patch(meta, {event("2014-11-07T18:00:00Z", "M5.0")}).is_fl);
    }
    SECTION("events of other ARs are ignored") {
        REQUIRE_FALSE(label_patch(meta, {event("2014-11-06T21:00:00Z", "X1.0", 99999)}).is_fl);
    }
    SECTION("patch without a NOAA number is NF") {
        PatchMetadata anon = meta;
        anon.noaa_ar.reset();
        REQUIRE_FALSE(label_patch(anon, {event("2014-11-06T21:00:00Z", "X1.0")}).is_fl);
    }
    SECTION("labeling is monotone in the event set") {
        std::vector<FlareEvent> events = {event("2014-11-06T19:00:00Z", "C2.0")};
        REQUIRE_FALSE(label_patch(meta, events).is_fl);
        events.push_back(event("2014-11-06T20:00:00Z", "M2.0"));
        REQUIRE(label_patch(meta, events).is_fl);
    }
}

TEST_CASE("assign_partition by onset month") {
    REQUIRE(assign_partition(parse_utc("2014-11-06T00:00:00Z")) == 4);
    REQUIRE(assign_partition(parse_utc("2012-01-15T08:00:00Z")) == 1);
    REQUIRE(assign_partition(parse_utc("2013-06-30T23:59:59Z")) == 2);
    REQUIRE(assign_partition(parse_utc("2015-07-01T00:00:00Z")) == 3);
    // Two records of the same HARP share the onset, hence the partition.
    const UtcTime onset = parse_utc("2014-09-03T00:00:00Z");
    REQUIRE(assign_partition(onset) == assign_partition(onset));

    PartitionScheme bad;
    bad.month_groups[0].erase(1);
    REQUIRE_THROWS_AS(bad.validate(), ContractViolation);
}

TEST_CASE("undersample_nf stratified counts and determinism") {
    std::vector<DatasetRecord> records;
    for (int i = 0; i < 100; ++i) {
        records.push_back(make_record("c" + std::to_string(i), 100 + i, "2013-02-01T00:00:00Z",
                                      false, "C1.0"));
    }
    for (int i = 0; i < 10; ++i) {
        records.push_back(make_record("b" + std::to_string(i), 300 + i, "2013-02-01T00:00:00Z",
                                      false, "B1.0"));
    }
    for (int i = 0; i < 50; ++i) {
        records.push_back(make_record("q" + std::to_string(i), 500 + i, "2013-02-01T00:00:00Z",
                                      false, "FQ"));
    }
    SamplingPlan plan;
    plan.seed = 123;
    const auto selected = undersample_nf(records, plan);

    std::size_t n_c = 0, n_b = 0, n_fq = 0;
    for (const auto& r : selected) {
        switch (r.label.max_class_in_window.letter) {
            case FlareLetter::C: ++n_c; break;
            case FlareLetter::B: ++n_b; break;
            default: ++n_fq; break;
        }
    }
    REQUIRE(n_c == 30);  // floor(0.30 * 100)
    REQUIRE(n_b == 3);   // floor(0.30 * 10)
    REQUIRE(n_fq == 4);  // floor(0.08 * 50)

    const auto again = undersample_nf(records, plan);
    REQUIRE(selected.size() == again.size());
    for (std::size_t i = 0; i < selected.size(); ++i) {
        REQUIRE(selected[i].patch_id == again[i].patch_id);
    }

    SECTION("empty subclass yields zero") {
        const auto none = undersample_nf({}, plan);
        REQUIRE(none.empty());
    }
    SECTION("FL records are refused") {
        std::vector<DatasetRecord> bad = {
            make_record("x", 1, "2013-02-01T00:00:00Z", true, "M1.0")};
        REQUIRE_THROWS_AS(undersample_nf(bad, plan), ContractViolation);
    }
}

TEST_CASE("dataset_stats counts and imbalance ratio") {
    SECTION("paper-scale synthetic counts") {
        std::vector<DatasetRecord> records;
        DatasetRecord nf = make_record("nf", 1, "2013-02-01T00:00:00Z", false, "FQ");
        DatasetRecord fl = make_record("fl", 2, "2013-02-01T00:00:00Z", true, "M1.0");
        records.reserve(501106 + 10315);
        for (int i = 0; i < 501106; ++i) records.push_back(nf);
        for (int i = 0; i < 10315; ++i) records.push_back(fl);
        const DatasetStats stats = dataset_stats(records);
        REQUIRE(stats.nf_count == 501106);
        REQUIRE(stats.fl_count == 10315);
        REQUIRE(stats.imbalance_ratio.has_value());
        REQUIRE_THAT(*stats.imbalance_ratio, Catch::Matchers::WithinAbs(48.58, 0.005));
    }
    SECTION("balanced and empty sets") {
        std::vector<DatasetRecord> records;
        for (int i = 0; i < 10; ++i) {
            records.push_back(make_record("n" + std::to_string(i), i + 1,
                                          "2013-02-01T00:00:00Z", false, "FQ"));
            records.push_back(make_record("f" + std::to_string(i), i + 100,
                                          "2013-02-01T00:00:00Z", true, "M1.0"));
        }
        REQUIRE(*dataset_stats(records).imbalance_ratio == 1.0);
        const DatasetStats empty = dataset_stats({});
        REQUIRE(empty.nf_count == 0);
        REQUIRE_FALSE(empty.imbalance_ratio.has_value());
    }
    SECTION("zero FL is undefined, not an exception") {
        std::vector<DatasetRecord> records = {
            make_record("n", 1, "2013-02-01T00:00:00Z", false, "A1.0")};
        REQUIRE_FALSE(dataset_stats(records).imbalance_ratio.has_value());
    }
}

TEST_CASE("parse_flare_catalog") {
    SECTION("example row") {
        std::istringstream in(
            "12205,2014-11-07T16:53,2014-11-07T17:26,2014-11-07T17:34,X1.6\n");
        const auto events = parse_flare_catalog(in);
        REQUIRE(events.size() == 1);
        REQUIRE(events[0].noaa_ar == 12205);
        REQUIRE(events[0].flare_class.to_string() == "X1.6");
        REQUIRE_FALSE(events[0].flagged);
        REQUIRE(format_utc(events[0].peak_time) == "2014-11-07T17:26:00Z");
    }
    SECTION("header row is skipped; peak_flux column is optional") {
        std::istringstream in(
            "noaa_ar,start_time,peak_time,end_time,class,peak_flux\n"
            "12205,2014-11-07T16:53,2014-11-07T17:26,2014-11-07T17:34,X1.6,1.6e-4\n");
        const auto events = parse_flare_catalog(in);
        REQUIRE(events.size() == 1);
        REQUIRE(events[0].peak_flux == 1.6e-4);
    }
    SECTION("empty file") {
        std::istringstream in("");
        REQUIRE(parse_flare_catalog(in).empty());
    }
    SECTION("end before start is an error naming the row") {
        std::istringstream in(
            "12205,2014-11-07T18:00,2014-11-07T17:26,2014-11-07T17:00,X1.6\n");
        REQUIRE_THROWS_WITH(parse_flare_catalog(in),
                            Catch::Matchers::ContainsSubstring("row 1"));
    }
    SECTION("missing NOAA AR is retained but flagged") {
        std::istringstream in(",2014-11-07T16:53,2014-11-07T17:26,2014-11-07T17:34,C1.0\n");
        const auto events = parse_flare_catalog(in);
        REQUIRE(events.size() == 1);
        REQUIRE(events[0].flagged);
    }
    SECTION("malformed class names the row") {
        std::istringstream in("12205,2014-11-07T16:53,2014-11-07T17:26,2014-11-07T17:34,Z9\n");
        REQUIRE_THROWS_AS(parse_flare_catalog(in), ParseError);
    }
}

TEST_CASE("build_manifest splits, sampling, and augmentation rows") {
    std::vector<DatasetRecord> records;
    // Partition 1 (Feb onset): 10 NF FQ + 2 FL.
    for (int i = 0; i < 10; ++i) {
        records.push_back(make_record("p1_nf" + std::to_string(i), 10 + i,
                                      "2013-02-01T00:00:00Z", false, "FQ"));
    }
    records.push_back(make_record("p1_fl0", 50, "2013-02-01T00:00:00Z", true, "M2.0"));
    records.push_back(make_record("p1_fl1", 51, "2013-02-01T00:00:00Z", true, "X1.0"));
    // Partition 2 (May onset): 20 NF C-class.
    for (int i = 0; i < 20; ++i) {
        records.push_back(make_record("p2_nf" + std::to_string(i), 100 + i,
                                      "2013-05-01T00:00:00Z", false, "C1.0"));
    }
    // Partition 3 (Aug onset): 5 NF + 1 FL, untouched validation.
    for (int i = 0; i < 5; ++i) {
        records.push_back(make_record("p3_nf" + std::to_string(i), 200 + i,
                                      "2013-08-01T00:00:00Z", false, "FQ"));
    }
    records.push_back(make_record("p3_fl0", 250, "2013-08-01T00:00:00Z", true, "M1.0"));
    // Partition 4 (Nov onset): 3 NF, untouched test.
    for (int i = 0; i < 3; ++i) {
        records.push_back(make_record("p4_nf" + std::to_string(i), 300 + i,
                                      "2013-11-01T00:00:00Z", false, "A1.0"));
    }

    SamplingPlan plan;
    plan.seed = 9;
    const auto manifest = build_manifest(records, PartitionScheme{}, plan);

    std::size_t train = 0, validation = 0, test = 0, augmented = 0;
    for (const auto& row : manifest) {
        if (row.split == "train") ++train;
        if (row.split == "validation") ++validation;
        if (row.split == "test") ++test;
        if (row.provenance != "original") ++augmented;
    }
    // Train: floor(0.08*10)=0 FQ + floor(0.30*20)=6 C + 2 FL * 6 rows.
    REQUIRE(train == 6 + 12);
    REQUIRE(augmented == 10);
    REQUIRE(validation == 6);  // raw partition 3 counts, no sampling
    REQUIRE(test == 3);

    SECTION("augmented rows inherit label and name their kind") {
        bool found = false;
        for (const auto& row : manifest) {
            if (row.patch_id == "p1_fl0_polarity_inversion") {
                found = true;
                REQUIRE(row.label == "FL");
                REQUIRE(row.provenance == "polarity_inversion");
                REQUIRE(row.split == "train");
            }
        }
        REQUIRE(found);
    }
    SECTION("duplicate ids are rejected") {
        auto dup = records;
        dup.push_back(records.front());
        REQUIRE_THROWS_AS(build_manifest(dup, PartitionScheme{}, plan), ContractViolation);
    }
    SECTION("empty input yields an empty manifest") {
        REQUIRE(build_manifest({}, PartitionScheme{}, plan).empty());
    }
}
