// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "rbc/radon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rbc {

RadonConfig::RadonConfig(int n_projections, int image_side)
    : projections(n_projections), side(image_side) {
    if (projections < 1)
        throw ContractError("projection count must be at least 1");
    if (side < 1)
        throw ContractError("side must be at least 1");
}

RadonFeatures radon_transform(const NormalizedImage& img, const RadonConfig& cfg) {
    if (cfg.side != img.side)
        throw ContractError("radon_transform: config side " + std::to_string(cfg.side) +
                            " does not match image side " + std::to_string(img.side));

    const int n = img.side;
    const double half = 0.5 * n;
    const double axis_min = -half * std::numbers::sqrt2;
    const double bin_width = std::numbers::sqrt2; // n * sqrt(2) span over n bins

    std::vector<double> values(static_cast<std::size_t>(cfg.projections) * n, 0.0);
    for (int j = 0; j < cfg.projections; ++j) {
        const double theta = cfg.angle_deg(j) * std::numbers::pi / 180.0;
        const double cos_t = std::cos(theta);
        const double sin_t = std::sin(theta);
        double* row = values.data() + static_cast<std::size_t>(j) * n;
        for (int r = 0; r < n; ++r) {
            const double y = half - (r + 0.5); // row 0 is the top, y grows upward
            for (int c = 0; c < n; ++c) {
                const double x = (c + 0.5) - half;
                const double rho = x * cos_t + y * sin_t;
                int bin = static_cast<int>((rho - axis_min) / bin_width);
                bin = std::clamp(bin, 0, n - 1);
                row[bin] += img.pixels[static_cast<std::size_t>(r) * n + c];
            }
        }
    }
    return RadonFeatures{cfg, std::move(values), false};
}

RadonFeatures normalize_features(RadonFeatures f) {
    double max = 0.0;
    for (double v : f.values)
        max = std::max(max, v);
    if (max > 0.0) {
        for (double& v : f.values)
            v /= max;
    }
    f.normalized = true;
    return f;
}

std::vector<double> flatten(const RadonFeatures& f) {
    return f.values;
}

} // namespace rbc
