// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rbc/barcode.hpp"

namespace rbc {

struct IndexedImage {
    std::string id;
    std::string class_label;
    std::optional<std::string> irma_code; // 13 characters, dashes stripped
    RadonBarcode barcode;
};

// Per-class buckets of barcode records. Insertion order within a bucket is
// preserved and defines tie-breaking for equal distances; bucket iteration is
// in class-label order.
struct BarcodeIndex {
    RadonConfig config;
    std::map<std::string, std::vector<IndexedImage>> buckets;
    std::size_t total = 0;
};

struct RankedEntry {
    std::string id;
    std::string class_label;
    std::size_t distance = 0;
};

struct RankedResult {
    std::vector<RankedEntry> entries; // distances non-decreasing
    std::size_t k_requested = 0;
};

// Buckets the records by class label, preserving input order. Records with an
// empty class label are dropped (unlabeled data is ignored). Throws DataError
// on duplicate ids or barcode config mismatches, naming the offending record.
BarcodeIndex build_index(std::vector<IndexedImage> records, const RadonConfig& cfg);

// k smallest Hamming distances within one class bucket; ties keep insertion
// order. An unknown class yields an empty result, not an error.
RankedResult knn_within_class(const BarcodeIndex& idx, const std::string& class_label,
                              const RadonBarcode& query, std::size_t k);

// As knn_within_class over every bucket; ties keep (class order, insertion
// order).
RankedResult knn_direct(const BarcodeIndex& idx, const RadonBarcode& query, std::size_t k);

// Index file: magic "RBCI", version u8, n_p u16, N u16, record count u32,
// then per record id/class (u16-length-prefixed), optional 13-byte code, and
// ceil(n_p*N/8) packed barcode bytes. Little-endian, MSB-first bit packing.
void save_index(const BarcodeIndex& idx, const std::filesystem::path& path);
BarcodeIndex load_index(const std::filesystem::path& path);

} // namespace rbc
