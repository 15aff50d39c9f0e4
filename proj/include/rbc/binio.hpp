// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rbc/error.hpp"

namespace rbc {

namespace detail {
template <typename T>
T reverse_bytes(T v) {
    std::uint8_t b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
        std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
}
} // namespace detail

// Little-endian writer over an output stream.
class ByteWriter {
public:
    explicit ByteWriter(std::ostream& out) : out_(out) {}

    void u8(std::uint8_t v) { raw(&v, 1); }
    void u16(std::uint16_t v) { scalar(v); }
    void u32(std::uint32_t v) { scalar(v); }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        scalar(bits);
    }
    void bytes(std::span<const std::uint8_t> b) { raw(b.data(), b.size()); }

    // u16 length prefix + raw bytes.
    void str16(const std::string& s) {
        if (s.size() > 0xFFFF)
            throw ContractError("string too long for u16 length prefix");
        u16(static_cast<std::uint16_t>(s.size()));
        raw(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
    }

private:
    template <typename T>
    void scalar(T v) {
        static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
        if constexpr (std::endian::native == std::endian::big)
            v = detail::reverse_bytes(v);
        raw(reinterpret_cast<const std::uint8_t*>(&v), sizeof(T));
    }

    void raw(const std::uint8_t* p, std::size_t n) {
        out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n));
    }

    std::ostream& out_;
};

// Little-endian reader over an in-memory buffer. Underruns throw FormatError
// naming the byte offset where the data ran out.
class ByteReader {
public:
    explicit ByteReader(std::vector<std::uint8_t> data) : data_(std::move(data)) {}

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t u16() { return scalar<std::uint16_t>(); }
    std::uint32_t u32() { return scalar<std::uint32_t>(); }
    double f64() {
        const std::uint64_t bits = scalar<std::uint64_t>();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::span<const std::uint8_t> bytes(std::size_t n) { return take(n); }

    std::string str16() {
        const std::size_t n = u16();
        const auto b = take(n);
        return std::string(reinterpret_cast<const char*>(b.data()), b.size());
    }

    void expect_end() const {
        if (pos_ != data_.size())
            throw FormatError("trailing bytes at byte " + std::to_string(pos_));
    }

private:
    template <typename T>
    T scalar() {
        const auto b = take(sizeof(T));
        T v;
        std::memcpy(&v, b.data(), sizeof(T));
        if constexpr (std::endian::native == std::endian::big)
            v = detail::reverse_bytes(v);
        return v;
    }

    std::span<const std::uint8_t> take(std::size_t n) {
        if (pos_ + n > data_.size())
            throw FormatError("unexpected end of file at byte " + std::to_string(data_.size()) +
                              " (needed " + std::to_string(n) + " more from offset " +
                              std::to_string(pos_) + ")");
        const std::span<const std::uint8_t> out(data_.data() + pos_, n);
        pos_ += n;
        return out;
    }

    std::vector<std::uint8_t> data_;
    std::size_t pos_ = 0;
};

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file: " + path.string());
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace rbc
