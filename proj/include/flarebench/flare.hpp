#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "flarebench/error.hpp"
#include "flarebench/raster.hpp"
#include "flarebench/timeutil.hpp"

namespace flarebench {

/// GOES X-ray flare class letters, weakest to strongest. Quiet means no
/// detectable flare (FQ).
enum class FlareLetter { Quiet = 0, A, B, C, M, X };

inline const char* letter_name(FlareLetter l) {
    switch (l) {
        case FlareLetter::Quiet: return "FQ";
        case FlareLetter::A: return "A";
        case FlareLetter::B: return "B";
        case FlareLetter::C: return "C";
        case FlareLetter::M: return "M";
        case FlareLetter::X: return "X";
    }
    return "?";
}

/// Flare class: letter plus one-decimal magnitude, e.g. M2.2.
struct FlareClass {
    FlareLetter letter = FlareLetter::Quiet;
    double magnitude = 0.0;

    static FlareClass quiet() { return {}; }

    std::partial_ordering operator<=>(const FlareClass& other) const {
        if (auto c = letter <=> other.letter; c != 0) return c;
        return magnitude <=> other.magnitude;
    }
    bool operator==(const FlareClass&) const = default;

    std::string to_string() const {
        if (letter == FlareLetter::Quiet) return "FQ";
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%s%.1f", letter_name(letter), magnitude);
        return buf;
    }

    /// Parses "M2.2", "X1.6", ... ("FQ" gives the quiet class).
    static FlareClass parse(const std::string& text) {
        if (text == "FQ") return quiet();
        if (text.empty()) throw ParseError("empty flare class");
        FlareLetter letter;
        switch (text[0]) {
            case 'A': letter = FlareLetter::A; break;
            case 'B': letter = FlareLetter::B; break;
            case 'C': letter = FlareLetter::C; break;
            case 'M': letter = FlareLetter::M; break;
            case 'X': letter = FlareLetter::X; break;
            default: throw ParseError("unknown flare class letter in '" + text + "'");
        }
        char* end = nullptr;
        const double mag = std::strtod(text.c_str() + 1, &end);
        if (end == text.c_str() + 1 || *end != '\0' || mag < 1.0) {
            throw ParseError("bad flare class magnitude in '" + text + "'");
        }
        return {letter, mag};
    }
};

/// True when the class reaches M1.0, the FL labeling cutoff.
inline bool is_major(const FlareClass& c) { return c.letter >= FlareLetter::M; }

/// NOAA decade thresholds on peak X-ray flux (W/m^2).
inline FlareClass classify_peak_flux(double peak_flux) {
    if (!(peak_flux > 0.0)) throw ParameterError("peak flux must be positive");
    struct Band {
        FlareLetter letter;
        double base;
    };
    static constexpr Band bands[] = {
        {FlareLetter::X, 1e-4}, {FlareLetter::M, 1e-5}, {FlareLetter::C, 1e-6},
        {FlareLetter::B, 1e-7}, {FlareLetter::A, 1e-8},
    };
    for (const Band& b : bands) {
        if (peak_flux >= b.base) {
            // Magnitude truncated to one decimal; the epsilon absorbs the
            // binary representation of ratios like 2.2e-5 / 1e-5.
            const double mag = std::floor(peak_flux / b.base * 10.0 + 1e-9) / 10.0;
            return {b.letter, mag};
        }
    }
    return FlareClass::quiet();
}

/// One catalogued flare event.
struct FlareEvent {
    std::optional<int> noaa_ar;
    UtcTime start_time = 0;
    UtcTime peak_time = 0;
    UtcTime end_time = 0;
    FlareClass flare_class;
    std::optional<double> peak_flux;
    bool flagged = false;  // missing NOAA AR or class below A

    void validate() const {
        if (!(start_time <= peak_time && peak_time <= end_time)) {
            throw ContractViolation("flare event times must satisfy start <= peak <= end");
        }
    }
};

/// Binary patch label with the strongest class seen in the window.
struct FlareLabel {
    bool is_fl = false;
    FlareClass max_class_in_window = FlareClass::quiet();

    const char* name() const { return is_fl ? "FL" : "NF"; }
};

/// Labels a patch from events of its NOAA AR: FL iff any >= M1.0 event peaks
/// in the half-open window (observation_time, observation_time + horizon].
inline FlareLabel label_patch(const PatchMetadata& meta, const std::vector<FlareEvent>& events,
                              std::int64_t horizon_seconds = 24 * 3600) {
    FlareLabel label;
    if (!meta.noaa_ar) return label;  // no NOAA number: conservative NF
    for (const FlareEvent& e : events) {
        if (!e.noaa_ar || *e.noaa_ar != *meta.noaa_ar) continue;
        if (e.peak_time <= meta.observation_time ||
            e.peak_time > meta.observation_time + horizon_seconds) {
            continue;
        }
        if (e.flare_class > label.max_class_in_window) {
            label.max_class_in_window = e.flare_class;
        }
    }
    label.is_fl = is_major(label.max_class_in_window);
    return label;
}

/// Fully described patch: processed flux raster plus identity and label.
struct PatchRecord {
    std::string patch_id;
    PatchMetadata meta;
    FluxRaster raster;  // clamped flux, pre-scaling
    FlareLabel label;
};

}  // namespace flarebench
