// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "rbc/image_io.hpp"

#include <png.h>

#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace rbc {

namespace {

// Integer-scaled luma keeps the exact identities luma(v,v,v) = v/255 and
// luma(255,0,0) = 0.299 under round-to-nearest.
double luma(unsigned r, unsigned g, unsigned b) {
    return (299.0 * r + 587.0 * g + 114.0 * b) / 255000.0;
}

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
        throw DecodeError(std::string("PNG: ") + image.message);

    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const std::size_t stride = static_cast<std::size_t>(PNG_IMAGE_ROW_STRIDE(image));
    std::vector<std::uint8_t> buffer(PNG_IMAGE_BUFFER_SIZE(image, stride));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), static_cast<png_int_32>(stride), nullptr)) {
        png_image_free(&image);
        throw DecodeError(std::string("PNG: ") + image.message);
    }

    const int w = static_cast<int>(image.width);
    const int h = static_cast<int>(image.height);
    std::vector<double> px(static_cast<std::size_t>(w) * h);
    for (int r = 0; r < h; ++r) {
        const std::uint8_t* row = buffer.data() + static_cast<std::size_t>(r) * stride;
        for (int c = 0; c < w; ++c) {
            if (color) {
                const std::uint8_t* p = row + 3 * c;
                px[static_cast<std::size_t>(r) * w + c] = luma(p[0], p[1], p[2]);
            } else {
                px[static_cast<std::size_t>(r) * w + c] = row[c] / 255.0;
            }
        }
    }
    return GrayImage(w, h, std::move(px));
}

std::uint16_t rd_u16le(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t rd_u32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::int32_t rd_i32le(const std::uint8_t* p) {
    return static_cast<std::int32_t>(rd_u32le(p));
}

// Uncompressed BITMAPINFOHEADER bitmaps: 8-bit paletted, 24-bit BGR, 32-bit BGRA.
GrayImage decode_bmp(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 54)
        throw DecodeError("BMP: file shorter than the fixed headers");
    const std::uint32_t pixel_offset = rd_u32le(bytes.data() + 10);
    const std::uint32_t header_size = rd_u32le(bytes.data() + 14);
    if (header_size < 40)
        throw DecodeError("BMP: unsupported header size " + std::to_string(header_size));
    const std::int32_t width = rd_i32le(bytes.data() + 18);
    const std::int32_t height_raw = rd_i32le(bytes.data() + 22);
    const std::uint16_t bpp = rd_u16le(bytes.data() + 28);
    const std::uint32_t compression = rd_u32le(bytes.data() + 30);
    if (compression != 0)
        throw DecodeError("BMP: compressed bitmaps are not supported");
    if (bpp != 8 && bpp != 24 && bpp != 32)
        throw DecodeError("BMP: unsupported bit depth " + std::to_string(bpp));
    if (width <= 0 || height_raw == 0)
        throw DecodeError("BMP: invalid dimensions");
    const bool top_down = height_raw < 0;
    const int w = width;
    const int h = top_down ? -height_raw : height_raw;

    // Palette sits between the info header and the pixel data.
    std::vector<std::array<std::uint8_t, 3>> palette;
    if (bpp == 8) {
        std::uint32_t colors = rd_u32le(bytes.data() + 46);
        if (colors == 0)
            colors = 256;
        const std::size_t pal_off = 14 + header_size;
        if (pal_off + colors * 4 > bytes.size())
            throw DecodeError("BMP: palette truncated");
        palette.resize(colors);
        for (std::uint32_t i = 0; i < colors; ++i) {
            const std::uint8_t* e = bytes.data() + pal_off + i * 4; // B,G,R,reserved
            palette[i] = {e[2], e[1], e[0]};
        }
    }

    const std::size_t bytes_per_px = bpp / 8;
    const std::size_t row_stride = ((static_cast<std::size_t>(w) * bytes_per_px + 3) / 4) * 4;
    if (pixel_offset + row_stride * h > bytes.size())
        throw DecodeError("BMP: pixel data truncated");

    std::vector<double> px(static_cast<std::size_t>(w) * h);
    for (int r = 0; r < h; ++r) {
        const int src_row = top_down ? r : h - 1 - r;
        const std::uint8_t* row = bytes.data() + pixel_offset + static_cast<std::size_t>(src_row) * row_stride;
        for (int c = 0; c < w; ++c) {
            double v;
            if (bpp == 8) {
                const std::uint8_t idx = row[c];
                if (idx >= palette.size())
                    throw DecodeError("BMP: palette index out of range");
                const auto& e = palette[idx];
                v = (e[0] == e[1] && e[1] == e[2]) ? e[0] / 255.0 : luma(e[0], e[1], e[2]);
            } else {
                const std::uint8_t* p = row + c * bytes_per_px; // B,G,R[,A]
                v = luma(p[2], p[1], p[0]);
            }
            px[static_cast<std::size_t>(r) * w + c] = v;
        }
    }
    return GrayImage(w, h, std::move(px));
}

struct PgmCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    // Next whitespace-delimited token, skipping '#' comments.
    std::string token() {
        while (pos < bytes.size()) {
            const char ch = static_cast<char>(bytes[pos]);
            if (ch == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n')
                    ++pos;
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                ++pos;
            } else {
                break;
            }
        }
        std::string t;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) && bytes[pos] != '#')
            t += static_cast<char>(bytes[pos++]);
        if (t.empty())
            throw DecodeError("PGM: unexpected end of header");
        return t;
    }

    long number(const char* what) {
        const std::string t = token();
        try {
            return std::stol(t);
        } catch (const std::exception&) {
            throw DecodeError(std::string("PGM: bad ") + what + " '" + t + "'");
        }
    }
};

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    PgmCursor cur{bytes};
    const std::string magic = cur.token();
    const bool binary = magic == "P5";
    if (!binary && magic != "P2")
        throw DecodeError("PGM: unsupported magic '" + magic + "'");
    const long w = cur.number("width");
    const long h = cur.number("height");
    const long maxval = cur.number("maxval");
    if (w < 1 || h < 1)
        throw DecodeError("PGM: invalid dimensions");
    if (maxval < 1 || maxval > 65535)
        throw DecodeError("PGM: invalid maxval " + std::to_string(maxval));

    std::vector<double> px(static_cast<std::size_t>(w) * h);
    if (binary) {
        ++cur.pos; // single whitespace byte after maxval
        const std::size_t sample_size = maxval > 255 ? 2 : 1;
        if (cur.pos + px.size() * sample_size > bytes.size())
            throw DecodeError("PGM: pixel data truncated");
        for (std::size_t i = 0; i < px.size(); ++i) {
            unsigned v;
            if (sample_size == 1) {
                v = bytes[cur.pos + i];
            } else {
                v = (static_cast<unsigned>(bytes[cur.pos + 2 * i]) << 8) | bytes[cur.pos + 2 * i + 1];
            }
            if (v > static_cast<unsigned>(maxval))
                throw DecodeError("PGM: sample exceeds maxval");
            px[i] = static_cast<double>(v) / maxval;
        }
    } else {
        for (std::size_t i = 0; i < px.size(); ++i) {
            const long v = cur.number("sample");
            if (v < 0 || v > maxval)
                throw DecodeError("PGM: sample outside [0, maxval]");
            px[i] = static_cast<double>(v) / maxval;
        }
    }
    return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(px));
}

} // namespace

GrayImage decode_image(std::span<const std::uint8_t> bytes) {
    static const std::uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), png_sig, 8) == 0)
        return decode_png(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M')
        return decode_bmp(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5'))
        return decode_pgm(bytes);
    throw DecodeError("unrecognized image signature (expected PNG, BMP, or PGM)");
}

GrayImage load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open image file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_image(bytes);
    } catch (const DecodeError& e) {
        throw DecodeError(path.string() + ": " + e.what());
    }
}

} // namespace rbc
