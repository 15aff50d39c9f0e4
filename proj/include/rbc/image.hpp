// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <vector>

#include "rbc/error.hpp"

namespace rbc {

// Row-major grayscale image with intensities in [0,1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::vector<double> px);

    double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
};

// Square image produced by normalize_image, intensities in [0,1].
struct NormalizedImage {
    int side = 0;
    std::vector<double> pixels;

    NormalizedImage() = default;
    NormalizedImage(int side, std::vector<double> px);

    double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * side + col]; }
    double total_mass() const;
};

bool is_supported_side(int side); // {16, 32, 64}

// Resamples to side x side. Shrinking axes use area-weighted averaging,
// growing axes bilinear interpolation; an axis already at the target size is
// copied. Throws ConfigError for unsupported sides.
NormalizedImage normalize_image(const GrayImage& img, int side);

} // namespace rbc
