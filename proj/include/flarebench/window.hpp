#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "flarebench/error.hpp"
#include "flarebench/raster.hpp"

namespace flarebench {

/// Summed-area table over |flux|, accumulated in double precision.
/// cumulative(i, j) = sum of |raster| over the inclusive rectangle (0,0)..(i,j).
class SummedAreaTable {
public:
    explicit SummedAreaTable(const FluxRaster& raster)
        : height_(raster.height()), width_(raster.width()),
          cumulative_(static_cast<std::size_t>(height_) * width_) {
        for (int i = 0; i < height_; ++i) {
            double row_sum = 0.0;
            for (int j = 0; j < width_; ++j) {
                row_sum += std::abs(static_cast<double>(raster.at(i, j)));
                cumulative_[idx(i, j)] = row_sum + (i > 0 ? cumulative_[idx(i - 1, j)] : 0.0);
            }
        }
    }

    int height() const { return height_; }
    int width() const { return width_; }

    double cumulative(int row, int col) const { return cumulative_[idx(row, col)]; }

    /// Unsigned-flux sum over the side x side window at (top, left).
    double window_sum(int top, int left, int side) const {
        if (top < 0 || left < 0 || side < 1 || top + side > height_ || left + side > width_) {
            throw BoundsError("window outside summed-area table");
        }
        const int bottom = top + side - 1;
        const int right = left + side - 1;
        double s = cumulative_[idx(bottom, right)];
        if (top > 0) s -= cumulative_[idx(top - 1, right)];
        if (left > 0) s -= cumulative_[idx(bottom, left - 1)];
        if (top > 0 && left > 0) s += cumulative_[idx(top - 1, left - 1)];
        return s;
    }

private:
    std::size_t idx(int row, int col) const {
        return static_cast<std::size_t>(row) * width_ + col;
    }

    int height_;
    int width_;
    std::vector<double> cumulative_;
};

inline SummedAreaTable build_unsigned_sat(const FluxRaster& raster) {
    return SummedAreaTable(raster);
}

inline double window_sum(const SummedAreaTable& sat, int top, int left, int side) {
    return sat.window_sum(top, left, side);
}

/// Position and unsigned-flux total of a selected square window.
struct WindowSelection {
    int top = 0;
    int left = 0;
    int side = 0;
    double usflux = 0.0;
};

/// Exhaustive stride-1 search for the side x side window with maximum total
/// unsigned flux. Ties resolve to the smallest top, then smallest left.
inline WindowSelection select_max_usflux_window(const FluxRaster& raster, int side) {
    if (side < 1 || raster.height() < side || raster.width() < side) {
        throw BoundsError("raster smaller than the selection kernel; pad first");
    }
    const SummedAreaTable sat(raster);
    WindowSelection best{0, 0, side, sat.window_sum(0, 0, side)};
    for (int top = 0; top + side <= raster.height(); ++top) {
        for (int left = 0; left + side <= raster.width(); ++left) {
            const double s = sat.window_sum(top, left, side);
            if (s > best.usflux) {
                best = {top, left, side, s};
            }
        }
    }
    return best;
}

/// Copies the selected window out of the source raster.
inline FluxRaster crop_window(const FluxRaster& raster, const WindowSelection& sel) {
    std::vector<float> out(static_cast<std::size_t>(sel.side) * sel.side);
    for (int i = 0; i < sel.side; ++i) {
        for (int j = 0; j < sel.side; ++j) {
            out[static_cast<std::size_t>(i) * sel.side + j] = raster.at(sel.top + i, sel.left + j);
        }
    }
    return FluxRaster(sel.side, sel.side, std::move(out));
}

}  // namespace flarebench
