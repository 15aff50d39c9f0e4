// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <vector>

#include "rbc/error.hpp"
#include "rbc/image.hpp"

namespace rbc {

// Projection geometry: `projections` angles theta_j = j * 180 / projections
// degrees over a square image of the given side.
struct RadonConfig {
    int projections = 0;
    int side = 0;

    RadonConfig() = default;
    RadonConfig(int n_projections, int image_side);

    double angle_deg(int j) const { return j * 180.0 / projections; }

    bool operator==(const RadonConfig&) const = default;
};

// projections x side matrix of accumulated projection values, row-major by
// angle. `normalized` marks per-image max scaling into [0,1].
struct RadonFeatures {
    RadonConfig config;
    std::vector<double> values;
    bool normalized = false;

    double at(int angle, int bin) const {
        return values[static_cast<std::size_t>(angle) * config.side + bin];
    }
};

// Discrete Radon transform by pixel-mass accumulation: every pixel center,
// measured from the image center, adds its full intensity to the offset bin
// nearest to rho = x cos(theta) + y sin(theta). The offset axis has `side`
// bins spanning [-side*sqrt(2)/2, side*sqrt(2)/2], so each projection row
// conserves total image mass.
RadonFeatures radon_transform(const NormalizedImage& img, const RadonConfig& cfg);

// Scales every entry by the matrix maximum. All-zero input passes through.
// Idempotent.
RadonFeatures normalize_features(RadonFeatures f);

// Row-major flattening used as the SVM feature vector.
std::vector<double> flatten(const RadonFeatures& f);

} // namespace rbc
