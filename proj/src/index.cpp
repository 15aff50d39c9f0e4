// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "rbc/index.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_set>

#include "rbc/binio.hpp"

namespace rbc {

namespace {

// Selects the k smallest distances from candidates scanned in tie-break
// order. Distances are small integers, so a counting pass finds the cutoff
// and a second pass collects entries in scan order.
RankedResult select_k(const std::vector<const IndexedImage*>& scan, const std::vector<std::size_t>& dist,
                      std::size_t k) {
    RankedResult result;
    result.k_requested = k;
    const std::size_t take = std::min(k, scan.size());
    if (take == 0)
        return result;

    std::size_t max_d = 0;
    for (std::size_t d : dist)
        max_d = std::max(max_d, d);
    std::vector<std::size_t> count(max_d + 2, 0);
    for (std::size_t d : dist)
        ++count[d];

    // cutoff: smallest distance D with |{d <= D}| >= take
    std::size_t cutoff = 0;
    std::size_t below = 0;
    for (std::size_t d = 0; d <= max_d; ++d) {
        below += count[d];
        if (below >= take) {
            cutoff = d;
            break;
        }
    }

    std::vector<std::vector<const IndexedImage*>> ranked(cutoff + 1);
    for (std::size_t i = 0; i < scan.size(); ++i)
        if (dist[i] <= cutoff)
            ranked[dist[i]].push_back(scan[i]);
    result.entries.reserve(take);
    for (std::size_t d = 0; d <= cutoff && result.entries.size() < take; ++d) {
        for (const IndexedImage* rec : ranked[d]) {
            if (result.entries.size() == take)
                break;
            result.entries.push_back({rec->id, rec->class_label, d});
        }
    }
    return result;
}

void check_query(const BarcodeIndex& idx, const RadonBarcode& query) {
    if (!(query.config == idx.config))
        throw ContractError("query barcode config does not match index config");
}

} // namespace

BarcodeIndex build_index(std::vector<IndexedImage> records, const RadonConfig& cfg) {
    BarcodeIndex idx;
    idx.config = cfg;
    std::unordered_set<std::string> seen;
    for (auto& rec : records) {
        if (!(rec.barcode.config == cfg))
            throw DataError("build_index: record '" + rec.id + "' has a mismatched barcode config");
        if (rec.class_label.empty())
            continue; // unlabeled records are ignored
        if (!seen.insert(rec.id).second)
            throw DataError("build_index: duplicate id '" + rec.id + "'");
        idx.buckets[rec.class_label].push_back(std::move(rec));
        ++idx.total;
    }
    return idx;
}

RankedResult knn_within_class(const BarcodeIndex& idx, const std::string& class_label,
                              const RadonBarcode& query, std::size_t k) {
    check_query(idx, query);
    const auto it = idx.buckets.find(class_label);
    if (it == idx.buckets.end())
        return RankedResult{{}, k};
    std::vector<const IndexedImage*> scan;
    std::vector<std::size_t> dist;
    scan.reserve(it->second.size());
    dist.reserve(it->second.size());
    for (const auto& rec : it->second) {
        scan.push_back(&rec);
        dist.push_back(hamming_distance(rec.barcode.bits, query.bits));
    }
    return select_k(scan, dist, k);
}

RankedResult knn_direct(const BarcodeIndex& idx, const RadonBarcode& query, std::size_t k) {
    check_query(idx, query);
    std::vector<const IndexedImage*> scan;
    std::vector<std::size_t> dist;
    scan.reserve(idx.total);
    dist.reserve(idx.total);
    for (const auto& [label, bucket] : idx.buckets) {
        (void)label;
        for (const auto& rec : bucket) {
            scan.push_back(&rec);
            dist.push_back(hamming_distance(rec.barcode.bits, query.bits));
        }
    }
    return select_k(scan, dist, k);
}

namespace {
constexpr char kIndexMagic[4] = {'R', 'B', 'C', 'I'};
constexpr std::uint8_t kIndexVersion = 1;
} // namespace

void save_index(const BarcodeIndex& idx, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot open index file for writing: " + path.string());
    ByteWriter w(out);
    w.bytes(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(kIndexMagic), 4));
    w.u8(kIndexVersion);
    w.u16(static_cast<std::uint16_t>(idx.config.projections));
    w.u16(static_cast<std::uint16_t>(idx.config.side));
    w.u32(static_cast<std::uint32_t>(idx.total));
    for (const auto& [label, bucket] : idx.buckets) {
        (void)label;
        for (const auto& rec : bucket) {
            w.str16(rec.id);
            w.str16(rec.class_label);
            if (rec.irma_code) {
                w.u8(1);
                w.bytes(std::span<const std::uint8_t>(
                    reinterpret_cast<const std::uint8_t*>(rec.irma_code->data()), 13));
            } else {
                w.u8(0);
            }
            w.bytes(rec.barcode.bits.packed());
        }
    }
    out.flush();
    if (!out)
        throw DataError("failed writing index file: " + path.string());
}

BarcodeIndex load_index(const std::filesystem::path& path) {
    ByteReader r(read_file_bytes(path));
    const auto magic = r.bytes(4);
    if (std::memcmp(magic.data(), kIndexMagic, 4) != 0)
        throw FormatError(path.string() + ": bad index magic at byte 0");
    const std::uint8_t version = r.u8();
    if (version != kIndexVersion)
        throw FormatError(path.string() + ": unsupported index version " + std::to_string(version) +
                          " at byte 4");
    const int projections = r.u16();
    const int side = r.u16();
    const std::size_t count = r.u32();
    const RadonConfig cfg(projections, side);
    const std::size_t bits = static_cast<std::size_t>(projections) * side;
    const std::size_t code_bytes = (bits + 7) / 8;

    std::vector<IndexedImage> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        IndexedImage rec;
        rec.id = r.str16();
        rec.class_label = r.str16();
        if (rec.class_label.empty())
            throw FormatError(path.string() + ": record '" + rec.id + "' has an empty class at byte " +
                              std::to_string(r.offset()));
        const std::uint8_t has_code = r.u8();
        if (has_code > 1)
            throw FormatError(path.string() + ": bad irma-code presence flag at byte " +
                              std::to_string(r.offset() - 1));
        if (has_code) {
            const auto code = r.bytes(13);
            rec.irma_code = std::string(reinterpret_cast<const char*>(code.data()), 13);
        }
        rec.barcode.config = cfg;
        rec.barcode.bits = BitVector::from_packed(r.bytes(code_bytes), bits);
        records.push_back(std::move(rec));
    }
    try {
        r.expect_end();
        return build_index(std::move(records), cfg);
    } catch (const DataError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

} // namespace rbc
