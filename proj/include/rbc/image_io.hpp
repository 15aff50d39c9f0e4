// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "rbc/image.hpp"

namespace rbc {

// Decodes PNG, BMP, or PGM bytes into a grayscale image. Multi-channel
// sources are reduced with fixed luma weights 0.299 R + 0.587 G + 0.114 B;
// single-channel samples are divided by their maximum sample value.
// Throws DecodeError on undecodable input.
GrayImage decode_image(std::span<const std::uint8_t> bytes);

// Reads the file and decodes it. Throws DataError if unreadable.
GrayImage load_image(const std::filesystem::path& path);

} // namespace rbc
