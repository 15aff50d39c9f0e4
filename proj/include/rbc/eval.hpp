// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rbc/error.hpp"

namespace rbc {

inline constexpr std::size_t kIrmaCodeLength = 13;

// 13-character annotation (TTTT-DDD-AAA-BBB with dashes stripped); alphabet
// is alphanumeric plus the wildcard '*'.
struct IrmaCode {
    std::string value;

    bool operator==(const IrmaCode&) const = default;
};

// Validates and canonicalizes (strips dashes). Throws DataError on malformed
// input.
IrmaCode parse_irma_code(std::string_view text);

// Per-position counts of distinct non-wildcard characters, minimum 1.
struct AxisAlphabets {
    std::array<int, kIrmaCodeLength> counts{};
};

AxisAlphabets compute_alphabets(const std::vector<IrmaCode>& corpus);

// Position-weighted mismatch score: sum over positions i = 1..13 of
// (1/b_i)(1/i) when the characters differ. A wildcard in the truth code
// matches anything.
double irma_error(const IrmaCode& truth, const IrmaCode& predicted, const AxisAlphabets& alphabets);

// 100 * |matches| / |total|. Throws on empty or mismatched lists.
double classification_accuracy(const std::vector<std::string>& predicted,
                               const std::vector<std::string>& truth);

struct ReportRow {
    std::string query_id;
    std::optional<std::string> true_code;
    std::string true_class;
    std::string predicted_class;
    std::optional<std::string> top1_id;
    std::optional<std::string> top1_code;
    std::optional<double> error; // present when both codes are known
};

struct RetrievalReport {
    std::vector<ReportRow> rows;
    double total_error = 0.0;
    double accuracy = 0.0; // percent
};

// Sum of per-query errors over the scored rows.
double total_error(const std::vector<ReportRow>& rows);

// CSV with header query_id,true_code,predicted_class,top1_id,top1_code,error
// followed by summary lines total_error,<v> and accuracy,<v>. Values keep
// full double precision.
void write_report_csv(const RetrievalReport& report, std::ostream& out);

} // namespace rbc
