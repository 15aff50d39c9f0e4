// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "rbc/eval.hpp"

#include <cctype>
#include <cstdio>
#include <set>

namespace rbc {

namespace {

bool code_char_ok(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '*';
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string full_precision(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

IrmaCode parse_irma_code(std::string_view text) {
    std::string canonical;
    canonical.reserve(kIrmaCodeLength);
    for (char c : text) {
        if (c == '-')
            continue;
        if (!code_char_ok(c))
            throw DataError(std::string("malformed IRMA code '") + std::string(text) +
                            "': invalid character '" + c + "'");
        canonical += c;
    }
    if (canonical.size() != kIrmaCodeLength)
        throw DataError("malformed IRMA code '" + std::string(text) + "': expected 13 characters, got " +
                        std::to_string(canonical.size()));
    return IrmaCode{std::move(canonical)};
}

AxisAlphabets compute_alphabets(const std::vector<IrmaCode>& corpus) {
    if (corpus.empty())
        throw DataError("compute_alphabets: empty corpus");
    AxisAlphabets alphabets;
    for (std::size_t i = 0; i < kIrmaCodeLength; ++i) {
        std::set<char> seen;
        for (const auto& code : corpus) {
            const char c = code.value[i];
            if (c != '*')
                seen.insert(c);
        }
        alphabets.counts[i] = std::max<int>(1, static_cast<int>(seen.size()));
    }
    return alphabets;
}

double irma_error(const IrmaCode& truth, const IrmaCode& predicted, const AxisAlphabets& alphabets) {
    if (truth.value.size() != kIrmaCodeLength || predicted.value.size() != kIrmaCodeLength)
        throw DataError("irma_error: codes must have 13 characters");
    double error = 0.0;
    for (std::size_t i = 0; i < kIrmaCodeLength; ++i) {
        const char t = truth.value[i];
        if (t == '*' || t == predicted.value[i])
            continue;
        error += (1.0 / alphabets.counts[i]) * (1.0 / static_cast<double>(i + 1));
    }
    return error;
}

double classification_accuracy(const std::vector<std::string>& predicted,
                               const std::vector<std::string>& truth) {
    if (predicted.size() != truth.size())
        throw ContractError("classification_accuracy: list lengths differ");
    if (predicted.empty())
        throw ContractError("classification_accuracy: empty input");
    std::size_t matches = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i])
            ++matches;
    return 100.0 * static_cast<double>(matches) / static_cast<double>(predicted.size());
}

double total_error(const std::vector<ReportRow>& rows) {
    double sum = 0.0;
    for (const auto& row : rows)
        if (row.error)
            sum += *row.error;
    return sum;
}

void write_report_csv(const RetrievalReport& report, std::ostream& out) {
    out << "query_id,true_code,predicted_class,top1_id,top1_code,error\n";
    for (const auto& row : report.rows) {
        out << csv_field(row.query_id) << ',' << (row.true_code ? csv_field(*row.true_code) : "") << ','
            << csv_field(row.predicted_class) << ',' << (row.top1_id ? csv_field(*row.top1_id) : "")
            << ',' << (row.top1_code ? csv_field(*row.top1_code) : "") << ','
            << (row.error ? full_precision(*row.error) : "") << '\n';
    }
    out << "total_error," << full_precision(report.total_error) << '\n';
    out << "accuracy," << full_precision(report.accuracy) << '\n';
}

} // namespace rbc
