// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "rbc/barcode.hpp"

#include <algorithm>

namespace rbc {

std::vector<bool> threshold_projection(std::span<const double> row) {
    std::vector<double> nonzero;
    nonzero.reserve(row.size());
    for (double v : row)
        if (v != 0.0)
            nonzero.push_back(v);

    std::vector<bool> bits(row.size(), false);
    if (nonzero.empty())
        return bits;

    std::sort(nonzero.begin(), nonzero.end());
    const std::size_t m = nonzero.size() / 2;
    const double threshold =
        (nonzero.size() % 2 == 1) ? nonzero[m] : 0.5 * (nonzero[m - 1] + nonzero[m]);
    for (std::size_t i = 0; i < row.size(); ++i)
        bits[i] = row[i] >= threshold;
    return bits;
}

RadonBarcode generate_barcode(const RadonFeatures& f) {
    const int n = f.config.side;
    BitVector bits(static_cast<std::size_t>(f.config.projections) * n);
    for (int j = 0; j < f.config.projections; ++j) {
        const auto row = std::span<const double>(f.values).subspan(static_cast<std::size_t>(j) * n, n);
        const auto row_bits = threshold_projection(row);
        for (int i = 0; i < n; ++i)
            if (row_bits[static_cast<std::size_t>(i)])
                bits.set(static_cast<std::size_t>(j) * n + i, true);
    }
    return RadonBarcode{f.config, std::move(bits)};
}

std::size_t hamming_distance(const RadonBarcode& a, const RadonBarcode& b) {
    if (!(a.config == b.config))
        throw ContractError("hamming_distance: barcode configs differ");
    return hamming_distance(a.bits, b.bits);
}

std::string render_text(const RadonBarcode& code) {
    const int n = code.config.side;
    std::string out;
    out.reserve(static_cast<std::size_t>(code.config.projections) * (n + 1));
    for (int j = 0; j < code.config.projections; ++j) {
        for (int i = 0; i < n; ++i)
            out += code.bits.get(static_cast<std::size_t>(j) * n + i) ? '1' : '0';
        out += '\n';
    }
    return out;
}

} // namespace rbc
