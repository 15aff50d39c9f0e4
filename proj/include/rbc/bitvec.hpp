// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "rbc/error.hpp"

namespace rbc {

// Fixed-length bit vector packed MSB-first within each byte. Bit k lives in
// byte k/8 at mask 0x80 >> (k%8), so the packed bytes are exactly the wire
// representation used by the index file format. Padding bits in the final
// partial byte are always zero.
class BitVector {
public:
    BitVector() = default;

    explicit BitVector(std::size_t bits) : bits_(bits), bytes_((bits + 7) / 8, 0) {}

    // Reinterprets packed bytes as a bit vector of the given length. Padding
    // bits beyond `bits` are masked to zero.
    static BitVector from_packed(std::span<const std::uint8_t> bytes, std::size_t bits) {
        if (bytes.size() != (bits + 7) / 8)
            throw ContractError("packed byte count does not match bit length");
        BitVector v(bits);
        std::memcpy(v.bytes_.data(), bytes.data(), bytes.size());
        if (bits % 8 != 0 && !v.bytes_.empty())
            v.bytes_.back() &= static_cast<std::uint8_t>(0xFF << (8 - bits % 8));
        return v;
    }

    std::size_t size() const { return bits_; }

    bool get(std::size_t i) const { return (bytes_[i / 8] >> (7 - i % 8)) & 1u; }

    void set(std::size_t i, bool v) {
        const std::uint8_t mask = static_cast<std::uint8_t>(0x80u >> (i % 8));
        if (v)
            bytes_[i / 8] |= mask;
        else
            bytes_[i / 8] &= static_cast<std::uint8_t>(~mask);
    }

    const std::vector<std::uint8_t>& packed() const { return bytes_; }

    bool operator==(const BitVector&) const = default;

private:
    std::size_t bits_ = 0;
    std::vector<std::uint8_t> bytes_;
};

// Number of differing bit positions. Word-parallel popcount over the packed
// representation; padding bits are zero on both sides and never contribute.
inline std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size())
        throw ContractError("hamming_distance: bit lengths differ");
    const std::uint8_t* pa = a.packed().data();
    const std::uint8_t* pb = b.packed().data();
    const std::size_t n = a.packed().size();
    std::size_t sum = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        std::uint64_t wa, wb;
        std::memcpy(&wa, pa + i, 8);
        std::memcpy(&wb, pb + i, 8);
        sum += static_cast<std::size_t>(std::popcount(wa ^ wb));
    }
    for (; i < n; ++i)
        sum += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(pa[i] ^ pb[i])));
    return sum;
}

} // namespace rbc
