// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rbc/error.hpp"

namespace rbc {

// One corpus entry: image path, class label, optional IRMA code.
struct ManifestRow {
    std::filesystem::path path;
    std::string class_label;
    std::optional<std::string> irma_code; // canonical 13 characters
    std::size_t line = 0;
};

struct Manifest {
    std::vector<ManifestRow> rows;
    std::size_t skipped_unlabeled = 0;
};

// Parses a CSV with header `path,class,irma_code`. Relative image paths are
// resolved against the manifest's directory. Rows with an empty class are
// skipped and counted; malformed rows throw DataError naming the line.
Manifest load_manifest(const std::filesystem::path& path);

} // namespace rbc
