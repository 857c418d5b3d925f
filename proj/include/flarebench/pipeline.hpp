#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "flarebench/error.hpp"
#include "flarebench/raster.hpp"
#include "flarebench/window.hpp"

namespace flarebench {

enum class PipelineStage {
    RoiExtract,
    SizeGate,
    ClampFlux,
    PadToTarget,
    WindowSelect,
    ScaleToBytes,
};

inline const char* stage_name(PipelineStage s) {
    switch (s) {
        case PipelineStage::RoiExtract: return "roi_extract";
        case PipelineStage::SizeGate: return "size_gate";
        case PipelineStage::ClampFlux: return "clamp_flux";
        case PipelineStage::PadToTarget: return "pad_to_target";
        case PipelineStage::WindowSelect: return "window_select";
        case PipelineStage::ScaleToBytes: return "scale_to_bytes";
    }
    return "unknown";
}

/// Non-error rejection outcome carrying the stage that filtered the patch.
struct PatchRejection {
    PipelineStage stage;
    std::string reason;
};

using ProcessResult = std::variant<ImagePatch, PatchRejection>;

/// Zeroes every pixel outside the AR (bitmap codes 33/34), then crops to the
/// tight bounding box of the AR pixels.
inline FluxRaster roi_extract(const FluxRaster& raster, const ArBitmap& bitmap) {
    if (raster.height() != bitmap.height() || raster.width() != bitmap.width()) {
        throw InvalidPairError("raster and bitmap dimensions differ");
    }
    int top = raster.height(), bottom = -1, left = raster.width(), right = -1;
    for (int i = 0; i < raster.height(); ++i) {
        for (int j = 0; j < raster.width(); ++j) {
            if (ArBitmap::is_roi_code(bitmap.at(i, j))) {
                if (i < top) top = i;
                if (i > bottom) bottom = i;
                if (j < left) left = j;
                if (j > right) right = j;
            }
        }
    }
    if (bottom < 0) {
        throw EmptyRoiError("bitmap marks no AR pixels (codes 33/34)");
    }
    const int h = bottom - top + 1;
    const int w = right - left + 1;
    std::vector<float> out(static_cast<std::size_t>(h) * w, 0.0f);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            if (ArBitmap::is_roi_code(bitmap.at(top + i, left + j))) {
                out[static_cast<std::size_t>(i) * w + j] = raster.at(top + i, left + j);
            }
        }
    }
    return FluxRaster(h, w, std::move(out));
}

/// Width-only size filter on an extracted ROI.
inline bool size_gate(const FluxRaster& roi, const PipelineConfig& config) {
    return roi.width() >= config.min_roi_width;
}

/// Piecewise flux adjustment: |v| <= zero_band -> 0, |v| > clamp_cap ->
/// sign(v) * clamp_cap, otherwise unchanged.
inline FluxRaster clamp_flux(const FluxRaster& raster, const PipelineConfig& config) {
    std::vector<float> out(raster.values());
    const float cap = static_cast<float>(config.clamp_cap);
    const float band = static_cast<float>(config.zero_band);
    for (float& v : out) {
        if (std::abs(v) <= band) {
            v = 0.0f;
        } else if (v > cap) {
            v = cap;
        } else if (v < -cap) {
            v = -cap;
        }
    }
    return FluxRaster(raster.height(), raster.width(), std::move(out));
}

/// Zero-pads each dimension below target_side up to exactly target_side,
/// centered, with the odd extra row/column on the bottom/right.
inline FluxRaster pad_to_target(const FluxRaster& raster, const PipelineConfig& config) {
    const int h = std::max(raster.height(), config.target_side);
    const int w = std::max(raster.width(), config.target_side);
    if (h == raster.height() && w == raster.width()) {
        return raster;
    }
    const int pad_top = (h - raster.height()) / 2;
    const int pad_left = (w - raster.width()) / 2;
    std::vector<float> out(static_cast<std::size_t>(h) * w, 0.0f);
    for (int i = 0; i < raster.height(); ++i) {
        for (int j = 0; j < raster.width(); ++j) {
            out[static_cast<std::size_t>(pad_top + i) * w + (pad_left + j)] = raster.at(i, j);
        }
    }
    return FluxRaster(h, w, std::move(out));
}

/// Linear map [-clamp_cap, +clamp_cap] -> [0, 255] with round-half-up.
inline ImagePatch scale_to_bytes(const FluxRaster& raster, const PipelineConfig& config) {
    if (raster.height() != config.target_side || raster.width() != config.target_side) {
        throw ContractViolation("scale_to_bytes requires a target_side square raster");
    }
    const double cap = config.clamp_cap;
    ImagePatch patch;
    patch.side = config.target_side;
    patch.bytes.reserve(raster.values().size());
    for (float v : raster.values()) {
        if (std::abs(static_cast<double>(v)) > cap) {
            throw ContractViolation("flux value outside [-clamp_cap, clamp_cap]");
        }
        const double b = std::floor((static_cast<double>(v) + cap) * 255.0 / (2.0 * cap) + 0.5);
        patch.bytes.push_back(static_cast<std::uint8_t>(b));
    }
    return patch;
}

/// The full per-patch pipeline: mask/crop, size gate, flux adjustment,
/// padding, max-USFLUX window selection for oversized patches, byte scaling.
inline ProcessResult process_patch(const FluxRaster& raster, const ArBitmap& bitmap,
                                   const PipelineConfig& config) {
    config.validate();
    FluxRaster roi = roi_extract(raster, bitmap);
    if (!size_gate(roi, config)) {
        return PatchRejection{PipelineStage::SizeGate,
                              "ROI width " + std::to_string(roi.width()) + " < " +
                                  std::to_string(config.min_roi_width)};
    }
    FluxRaster clamped = clamp_flux(roi, config);
    FluxRaster padded = pad_to_target(clamped, config);
    if (padded.height() > config.target_side || padded.width() > config.target_side) {
        const WindowSelection sel = select_max_usflux_window(padded, config.target_side);
        padded = crop_window(padded, sel);
    }
    return scale_to_bytes(padded, config);
}

}  // namespace flarebench
