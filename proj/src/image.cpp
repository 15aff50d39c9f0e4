// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "rbc/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rbc {

namespace {

void check_intensities(const std::vector<double>& px) {
    for (double v : px)
        if (!(v >= 0.0 && v <= 1.0))
            throw ContractError("intensity outside [0,1]");
}

// One (source index, weight) run per output sample.
struct TapRange {
    int first = 0;
    std::vector<double> weights;
};

// Box filter: output cell i covers source span [i*scale, (i+1)*scale).
std::vector<TapRange> area_taps(int src, int dst) {
    const double scale = static_cast<double>(src) / dst;
    std::vector<TapRange> taps(dst);
    for (int i = 0; i < dst; ++i) {
        const double begin = i * scale;
        const double end = (i + 1) * scale;
        int j0 = static_cast<int>(std::floor(begin));
        int j1 = static_cast<int>(std::ceil(end));
        j0 = std::clamp(j0, 0, src - 1);
        j1 = std::clamp(j1, j0 + 1, src);
        taps[i].first = j0;
        taps[i].weights.resize(static_cast<std::size_t>(j1 - j0));
        for (int j = j0; j < j1; ++j) {
            const double overlap = std::min(end, static_cast<double>(j + 1)) -
                                   std::max(begin, static_cast<double>(j));
            taps[i].weights[static_cast<std::size_t>(j - j0)] = std::max(overlap, 0.0);
        }
    }
    return taps;
}

// Center-aligned bilinear: source position (i + 0.5) * src/dst - 0.5.
std::vector<TapRange> bilinear_taps(int src, int dst) {
    const double scale = static_cast<double>(src) / dst;
    std::vector<TapRange> taps(dst);
    for (int i = 0; i < dst; ++i) {
        double pos = (i + 0.5) * scale - 0.5;
        pos = std::clamp(pos, 0.0, static_cast<double>(src - 1));
        const int j0 = std::min(static_cast<int>(std::floor(pos)), src - 1);
        const double frac = pos - j0;
        taps[i].first = j0;
        if (j0 + 1 < src && frac > 0.0)
            taps[i].weights = {1.0 - frac, frac};
        else
            taps[i].weights = {1.0};
    }
    return taps;
}

std::vector<TapRange> taps_for_axis(int src, int dst) {
    if (src == dst) {
        std::vector<TapRange> taps(dst);
        for (int i = 0; i < dst; ++i) {
            taps[i].first = i;
            taps[i].weights = {1.0};
        }
        return taps;
    }
    return src > dst ? area_taps(src, dst) : bilinear_taps(src, dst);
}

double apply_taps(const double* row, int stride, const TapRange& t) {
    double acc = 0.0;
    double wsum = 0.0;
    for (std::size_t k = 0; k < t.weights.size(); ++k) {
        acc += t.weights[k] * row[(t.first + static_cast<int>(k)) * stride];
        wsum += t.weights[k];
    }
    return acc / wsum;
}

} // namespace

GrayImage::GrayImage(int w, int h, std::vector<double> px) : width(w), height(h), pixels(std::move(px)) {
    if (width < 1 || height < 1)
        throw ContractError("image dimensions must be at least 1x1");
    if (pixels.size() != static_cast<std::size_t>(width) * height)
        throw ContractError("pixel count does not match dimensions");
    check_intensities(pixels);
}

NormalizedImage::NormalizedImage(int s, std::vector<double> px) : side(s), pixels(std::move(px)) {
    if (side < 1)
        throw ContractError("side must be at least 1");
    if (pixels.size() != static_cast<std::size_t>(side) * side)
        throw ContractError("pixel count does not match side");
    check_intensities(pixels);
}

double NormalizedImage::total_mass() const {
    double sum = 0.0;
    for (double v : pixels)
        sum += v;
    return sum;
}

bool is_supported_side(int side) {
    return side == 16 || side == 32 || side == 64;
}

NormalizedImage normalize_image(const GrayImage& img, int side) {
    if (!is_supported_side(side))
        throw ConfigError("unsupported normalized size " + std::to_string(side) +
                          " (supported: 16, 32, 64)");

    // Horizontal pass, then vertical.
    const auto htaps = taps_for_axis(img.width, side);
    std::vector<double> mid(static_cast<std::size_t>(img.height) * side);
    for (int r = 0; r < img.height; ++r) {
        const double* row = img.pixels.data() + static_cast<std::size_t>(r) * img.width;
        for (int c = 0; c < side; ++c)
            mid[static_cast<std::size_t>(r) * side + c] = apply_taps(row, 1, htaps[c]);
    }

    const auto vtaps = taps_for_axis(img.height, side);
    std::vector<double> out(static_cast<std::size_t>(side) * side);
    for (int c = 0; c < side; ++c) {
        const double* col = mid.data() + c;
        for (int r = 0; r < side; ++r)
            out[static_cast<std::size_t>(r) * side + c] = apply_taps(col, side, vtaps[r]);
    }
    for (double& v : out)
        v = std::clamp(v, 0.0, 1.0);
    return NormalizedImage(side, std::move(out));
}

} // namespace rbc
