#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "flarebench/error.hpp"
#include "flarebench/flare.hpp"
#include "flarebench/raster.hpp"
#include "flarebench/rng.hpp"

namespace flarebench {

/// The five FL-class augmentations, in presentation order.
enum class AugmentationKind {
    PolarityInversion,
    GaussianBlur,
    FlipHorizontal,
    FlipVertical,
    BoundedNoise,
};

inline constexpr std::array<AugmentationKind, 5> kAllAugmentations = {
    AugmentationKind::PolarityInversion, AugmentationKind::GaussianBlur,
    AugmentationKind::FlipHorizontal,    AugmentationKind::FlipVertical,
    AugmentationKind::BoundedNoise,
};

inline const char* augmentation_name(AugmentationKind k) {
    switch (k) {
        case AugmentationKind::PolarityInversion: return "polarity_inversion";
        case AugmentationKind::GaussianBlur: return "gaussian_blur";
        case AugmentationKind::FlipHorizontal: return "flip_horizontal";
        case AugmentationKind::FlipVertical: return "flip_vertical";
        case AugmentationKind::BoundedNoise: return "bounded_noise";
    }
    return "unknown";
}

inline FluxRaster invert_polarity(const FluxRaster& raster) {
    std::vector<float> out(raster.values());
    for (float& v : out) v = -v;
    return FluxRaster(raster.height(), raster.width(), std::move(out));
}

inline FluxRaster flip_horizontal(const FluxRaster& raster) {
    FluxRaster out(raster.height(), raster.width());
    for (int i = 0; i < raster.height(); ++i) {
        for (int j = 0; j < raster.width(); ++j) {
            out.at(i, j) = raster.at(i, raster.width() - 1 - j);
        }
    }
    return out;
}

inline FluxRaster flip_vertical(const FluxRaster& raster) {
    FluxRaster out(raster.height(), raster.width());
    for (int i = 0; i < raster.height(); ++i) {
        for (int j = 0; j < raster.width(); ++j) {
            out.at(i, j) = raster.at(raster.height() - 1 - i, j);
        }
    }
    return out;
}

/// Separable Gaussian blur, kernel radius ceil(3*sigma), weights normalized
/// to sum 1 per axis, mirrored borders.
inline FluxRaster gaussian_blur(const FluxRaster& raster, double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("blur sigma must be positive");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double total = 0.0;
    for (int d = -radius; d <= radius; ++d) {
        kernel[d + radius] = std::exp(-(static_cast<double>(d) * d) / (2.0 * sigma * sigma));
        total += kernel[d + radius];
    }
    for (double& w : kernel) w /= total;

    const int h = raster.height();
    const int w = raster.width();
    auto mirror = [](int i, int n) {
        while (i < 0 || i >= n) {
            if (i < 0) i = -i - 1;
            if (i >= n) i = 2 * n - 1 - i;
        }
        return i;
    };

    // Horizontal pass in doubles, then vertical.
    std::vector<double> tmp(static_cast<std::size_t>(h) * w, 0.0);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            double acc = 0.0;
            for (int d = -radius; d <= radius; ++d) {
                acc += kernel[d + radius] * raster.at(i, mirror(j + d, w));
            }
            tmp[static_cast<std::size_t>(i) * w + j] = acc;
        }
    }
    FluxRaster out(h, w);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            double acc = 0.0;
            for (int d = -radius; d <= radius; ++d) {
                acc += kernel[d + radius] * tmp[static_cast<std::size_t>(mirror(i + d, h)) * w + j];
            }
            out.at(i, j) = static_cast<float>(acc);
        }
    }
    return out;
}

/// Adds per-pixel uniform noise in [-amplitude, +amplitude], then re-caps the
/// result to +/- clamp_cap. The zero band is deliberately not re-applied.
inline FluxRaster add_bounded_noise(const FluxRaster& raster, double amplitude,
                                    std::uint64_t seed, const PipelineConfig& config) {
    if (!(amplitude > 0.0)) throw ParameterError("noise amplitude must be positive");
    SplitMix64 gen(seed);
    const double cap = config.clamp_cap;
    std::vector<float> out(raster.values());
    for (float& v : out) {
        double perturbed = static_cast<double>(v) + gen.next_in(-amplitude, amplitude);
        if (perturbed > cap) perturbed = cap;
        if (perturbed < -cap) perturbed = -cap;
        v = static_cast<float>(perturbed);
    }
    return FluxRaster(raster.height(), raster.width(), std::move(out));
}

/// One augmented variant of an FL record.
struct AugmentedRecord {
    AugmentationKind kind;
    PatchRecord record;
};

/// Expands one FL record into its five augmented variants, in the canonical
/// order. Blur uses sigma 1; noise amplitude 25 G with a seed derived from
/// (seed, harp_id, observation_time).
inline std::vector<AugmentedRecord> expand_fl_record(const PatchRecord& record,
                                                     std::uint64_t seed,
                                                     const PipelineConfig& config = {}) {
    if (!record.label.is_fl) {
        throw ContractViolation("expand_fl_record applies to FL-labeled records only");
    }
    const std::uint64_t noise_seed =
        mix_seed(seed, static_cast<std::uint64_t>(record.meta.harp_id),
                 static_cast<std::uint64_t>(record.meta.observation_time));
    std::vector<AugmentedRecord> out;
    out.reserve(kAllAugmentations.size());
    for (AugmentationKind kind : kAllAugmentations) {
        PatchRecord variant = record;
        variant.patch_id = record.patch_id + "_" + augmentation_name(kind);
        switch (kind) {
            case AugmentationKind::PolarityInversion:
                variant.raster = invert_polarity(record.raster);
                break;
            case AugmentationKind::GaussianBlur:
                variant.raster = gaussian_blur(record.raster, 1.0);
                break;
            case AugmentationKind::FlipHorizontal:
                variant.raster = flip_horizontal(record.raster);
                break;
            case AugmentationKind::FlipVertical:
                variant.raster = flip_vertical(record.raster);
                break;
            case AugmentationKind::BoundedNoise:
                variant.raster = add_bounded_noise(record.raster, 25.0, noise_seed, config);
                break;
        }
        out.push_back({kind, std::move(variant)});
    }
    return out;
}

}  // namespace flarebench
