#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "flarebench/error.hpp"
#include "flarebench/timeutil.hpp"

namespace flarebench {

/// 2-D grid of line-of-sight magnetic flux values in Gauss, row-major.
class FluxRaster {
public:
    FluxRaster() = default;

    FluxRaster(int height, int width, std::vector<float> values)
        : height_(height), width_(width), values_(std::move(values)) {
        if (height_ < 1 || width_ < 1) {
            throw ContractViolation("raster dimensions must be positive");
        }
        if (values_.size() != static_cast<std::size_t>(height_) * width_) {
            throw ContractViolation("raster value count does not match dimensions");
        }
        for (float v : values_) {
            if (!std::isfinite(v)) {
                throw ContractViolation("raster contains non-finite flux value");
            }
        }
    }

    FluxRaster(int height, int width, float fill = 0.0f)
        : FluxRaster(height, width,
                     std::vector<float>(static_cast<std::size_t>(height) * width, fill)) {}

    int height() const { return height_; }
    int width() const { return width_; }

    float at(int row, int col) const {
        return values_[static_cast<std::size_t>(row) * width_ + col];
    }
    float& at(int row, int col) {
        return values_[static_cast<std::size_t>(row) * width_ + col];
    }

    const std::vector<float>& values() const { return values_; }
    std::vector<float>& values() { return values_; }

    bool operator==(const FluxRaster&) const = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<float> values_;
};

/// SHARP bitmap codes marking the active-region interior.
/// Codes 33 and 34 flag pixels inside the AR.
class ArBitmap {
public:
    ArBitmap() = default;

    ArBitmap(int height, int width, std::vector<std::uint8_t> codes)
        : height_(height), width_(width), codes_(std::move(codes)) {
        if (height_ < 1 || width_ < 1) {
            throw ContractViolation("bitmap dimensions must be positive");
        }
        if (codes_.size() != static_cast<std::size_t>(height_) * width_) {
            throw ContractViolation("bitmap code count does not match dimensions");
        }
        for (std::uint8_t c : codes_) {
            if (!is_valid_code(c)) {
                throw ContractViolation("invalid bitmap code " + std::to_string(c));
            }
        }
    }

    static bool is_valid_code(std::uint8_t c) {
        return c == 0 || c == 1 || c == 2 || c == 33 || c == 34;
    }
    static bool is_roi_code(std::uint8_t c) { return c == 33 || c == 34; }

    int height() const { return height_; }
    int width() const { return width_; }
    std::uint8_t at(int row, int col) const {
        return codes_[static_cast<std::size_t>(row) * width_ + col];
    }
    const std::vector<std::uint8_t>& codes() const { return codes_; }

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint8_t> codes_;
};

/// Identity and ephemeris of one AR patch observation.
struct PatchMetadata {
    int harp_id = 0;
    std::optional<int> noaa_ar;
    UtcTime observation_time = 0;
    double center_longitude = 0.0;  // degrees, in [-90, +90]
    UtcTime harp_onset_time = 0;

    void validate() const {
        if (harp_id <= 0) throw ContractViolation("harp_id must be positive");
        if (std::abs(center_longitude) > 90.0) {
            throw ContractViolation("center_longitude outside [-90, 90]");
        }
        if (harp_onset_time > observation_time) {
            throw ContractViolation("harp_onset_time after observation_time");
        }
    }
};

/// Square 8-bit grayscale patch, the pipeline's final product.
struct ImagePatch {
    int side = 0;
    std::vector<std::uint8_t> bytes;  // row-major, side*side

    bool operator==(const ImagePatch&) const = default;
};

/// Knobs of the preprocessing pipeline.
struct PipelineConfig {
    double clamp_cap = 256.0;   // Gauss
    double zero_band = 25.0;    // Gauss
    int min_roi_width = 70;     // pixels
    int target_side = 512;      // pixels

    void validate() const {
        if (!(clamp_cap > zero_band && zero_band > 0.0)) {
            throw ContractViolation("require clamp_cap > zero_band > 0");
        }
        if (min_roi_width < 1) throw ContractViolation("min_roi_width must be >= 1");
        if (target_side < 1) throw ContractViolation("target_side must be >= 1");
    }
};

}  // namespace flarebench
