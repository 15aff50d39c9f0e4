// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "rbc/bitvec.hpp"
#include "rbc/radon.hpp"

namespace rbc {

// Binarized Radon projections, projections * side bits, angle-major.
struct RadonBarcode {
    RadonConfig config;
    BitVector bits;

    bool operator==(const RadonBarcode&) const = default;
};

// Thresholds one projection row at the median of its strictly nonzero values
// (even count: mean of the middle pair). bit = value >= threshold. An all-zero
// row yields all-zero bits.
std::vector<bool> threshold_projection(std::span<const double> row);

// Concatenates the thresholded rows in angle order. Invariant under positive
// scaling of the input, so normalized and raw features produce the same code.
RadonBarcode generate_barcode(const RadonFeatures& f);

// Count of differing bits. Throws ContractError when configs differ.
std::size_t hamming_distance(const RadonBarcode& a, const RadonBarcode& b);

// One '0'/'1' line per projection angle.
std::string render_text(const RadonBarcode& code);

} // namespace rbc
