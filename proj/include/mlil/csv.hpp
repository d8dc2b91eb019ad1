#ifndef MLIL_CSV_HPP
#define MLIL_CSV_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mlil/dataset.hpp"
#include "mlil/error.hpp"
#include "mlil/text.hpp"

namespace mlil {

namespace detail {

// RFC-4180-style field split: double quotes, "" escapes inside quotes.
inline std::vector<std::string> split_csv_line(std::string_view s, std::size_t line) {
    std::vector<std::string> out;
    std::string cur;
    std::size_t i = 0;
    bool quoted = false;
    while (i < s.size()) {
        const char c = s[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < s.size() && s[i + 1] == '"') {
                    cur += '"';
                    i += 2;
                } else {
                    quoted = false;
                    ++i;
                }
            } else {
                cur += c;
                ++i;
            }
        } else if (c == '"') {
            quoted = true;
            ++i;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
            ++i;
        } else {
            cur += c;
            ++i;
        }
    }
    if (quoted) throw parse_error("unterminated quote in CSV", line);
    out.push_back(cur);
    return out;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace detail

/// Parses a CSV with a header row whose last `label_count` columns are binary
/// labels. Feature columns are numeric when every present cell parses as a
/// number, otherwise nominal with categories in first-appearance order.
/// Missing cells ('?' or empty) are imputed like the ARFF parser.
inline MultiLabelDataset parse_csv(std::string_view csv_text, std::size_t label_count,
                                   ParseReport* report = nullptr) {
    if (csv_text.substr(0, 3) == "\xEF\xBB\xBF") csv_text.remove_prefix(3);

    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;
    std::size_t line_no = 0;
    std::size_t cursor = 0;
    while (cursor <= csv_text.size()) {
        const auto nl = csv_text.find('\n', cursor);
        std::string_view raw = csv_text.substr(
            cursor, nl == std::string_view::npos ? csv_text.size() - cursor : nl - cursor);
        cursor = (nl == std::string_view::npos) ? csv_text.size() + 1 : nl + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (trim(raw).empty()) continue;
        rows.push_back(detail::split_csv_line(raw, line_no));
        row_lines.push_back(line_no);
    }
    if (rows.empty()) throw parse_error("CSV is empty (header row required)");

    const std::vector<std::string> header = rows.front();
    const std::size_t total = header.size();
    if (label_count == 0) throw data_error("label_count must be at least 1");
    if (label_count >= total)
        throw data_error("label_count (" + std::to_string(label_count) +
                         ") must be smaller than the column count (" + std::to_string(total) + ")");
    const std::size_t d = total - label_count;
    const std::size_t q = label_count;
    const std::size_t n = rows.size() - 1;
    if (n == 0) throw data_error("CSV has no data rows (n=0 forbidden)");

    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].size() != total)
            throw parse_error("ragged row: expected " + std::to_string(total) + " cells, got " +
                                  std::to_string(rows[i].size()),
                              row_lines[i]);

    constexpr std::size_t kMaxCategories = 100;
    constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
    auto is_missing = [](std::string_view c) {
        const auto t = trim(c);
        return t.empty() || t == "?";
    };

    std::vector<FeatureColumn> columns(d);
    std::vector<double> features(n * d, 0.0);
    std::vector<std::size_t> imputed_per_feature(d, 0);
    std::size_t imputed_numeric = 0, imputed_nominal = 0;

    for (std::size_t j = 0; j < d; ++j) {
        columns[j].name = std::string(trim(header[j]));
        if (columns[j].name.empty())
            throw parse_error("empty column name in header", row_lines[0]);
        bool numeric = true;
        for (std::size_t i = 0; i < n && numeric; ++i) {
            const auto& cell = rows[i + 1][j];
            if (is_missing(cell)) continue;
            double v;
            numeric = parse_double(cell, v) && std::isfinite(v);
        }
        if (numeric) {
            columns[j].kind = FeatureKind::numeric;
            for (std::size_t i = 0; i < n; ++i) {
                const auto& cell = rows[i + 1][j];
                if (is_missing(cell)) {
                    features[i * d + j] = kMissing;
                } else {
                    double v = 0;
                    parse_double(cell, v);
                    features[i * d + j] = v;
                }
            }
        } else {
            columns[j].kind = FeatureKind::nominal;
            for (std::size_t i = 0; i < n; ++i) {
                const auto& cell = rows[i + 1][j];
                if (is_missing(cell)) {
                    features[i * d + j] = kMissing;
                    continue;
                }
                const std::string v(trim(cell));
                auto it = std::find(columns[j].values.begin(), columns[j].values.end(), v);
                std::size_t idx;
                if (it == columns[j].values.end()) {
                    if (columns[j].values.size() >= kMaxCategories)
                        throw parse_error("column '" + columns[j].name + "' has more than " +
                                              std::to_string(kMaxCategories) +
                                              " distinct values; not a nominal column",
                                          row_lines[i + 1]);
                    columns[j].values.push_back(v);
                    idx = columns[j].values.size() - 1;
                } else {
                    idx = static_cast<std::size_t>(it - columns[j].values.begin());
                }
                features[i * d + j] = static_cast<double>(idx);
            }
            if (columns[j].values.empty())
                throw parse_error("column '" + columns[j].name + "' has no present values");
        }
        // imputation
        double fill = 0.0;
        if (columns[j].kind == FeatureKind::nominal) {
            std::size_t best = 0, best_count = 0;
            std::vector<std::size_t> counts(columns[j].values.size(), 0);
            for (std::size_t i = 0; i < n; ++i) {
                const double v = features[i * d + j];
                if (!std::isnan(v)) ++counts[static_cast<std::size_t>(v)];
            }
            for (std::size_t v = 0; v < counts.size(); ++v)
                if (counts[v] > best_count) { best = v; best_count = counts[v]; }
            fill = static_cast<double>(best);
        }
        for (std::size_t i = 0; i < n; ++i) {
            double& cell = features[i * d + j];
            if (std::isnan(cell)) {
                cell = fill;
                ++imputed_per_feature[j];
                ++(columns[j].kind == FeatureKind::numeric ? imputed_numeric : imputed_nominal);
            }
        }
    }

    std::vector<std::string> label_names;
    label_names.reserve(q);
    for (std::size_t j = 0; j < q; ++j)
        label_names.emplace_back(trim(header[d + j]));
    std::vector<std::uint8_t> labels(n * q, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            const auto cell = trim(rows[i + 1][d + j]);
            if (cell == "0") labels[i * q + j] = 0;
            else if (cell == "1") labels[i * q + j] = 1;
            else
                throw parse_error("label '" + label_names[j] + "' has non-binary value '" +
                                      std::string(cell) + "'",
                                  row_lines[i + 1]);
        }
    }

    if (report) {
        report->relation = "csv";
        report->sparse_rows = 0;
        report->imputed_numeric = imputed_numeric;
        report->imputed_nominal = imputed_nominal;
        report->imputed_by_column.clear();
        for (std::size_t j = 0; j < d; ++j)
            if (imputed_per_feature[j] > 0)
                report->imputed_by_column.emplace_back(columns[j].name, imputed_per_feature[j]);
    }

    return MultiLabelDataset(std::move(columns), std::move(label_names), std::move(features),
                             std::move(labels), "csv");
}

/// Serializes to CSV: features then labels, header row first. Nominal cells
/// are written as their category string, so a re-parse canonicalizes the
/// category order to first appearance.
inline std::string write_csv(const MultiLabelDataset& ds) {
    std::ostringstream out;
    bool first = true;
    for (const auto& c : ds.feature_columns()) {
        if (!first) out << ',';
        out << detail::csv_quote(c.name);
        first = false;
    }
    for (const auto& l : ds.label_names()) out << ',' << detail::csv_quote(l);
    out << "\n";
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t j = 0; j < ds.d(); ++j) {
            if (j) out << ',';
            const auto& c = ds.feature_columns()[j];
            if (c.kind == FeatureKind::numeric)
                out << format_double(ds.feature(i, j));
            else
                out << detail::csv_quote(c.values[static_cast<std::size_t>(ds.feature(i, j))]);
        }
        for (std::size_t j = 0; j < ds.q(); ++j)
            out << ',' << static_cast<int>(ds.label(i, j));
        out << "\n";
    }
    return out.str();
}

} // namespace mlil

#endif
