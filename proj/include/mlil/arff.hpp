#ifndef MLIL_ARFF_HPP
#define MLIL_ARFF_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mlil/dataset.hpp"
#include "mlil/error.hpp"
#include "mlil/text.hpp"

namespace mlil {

/// What the parser had to fix up while reading a file. Missing feature values
/// ('?') are imputed — 0 for numeric columns, the most frequent category for
/// nominal ones — and counted here per column.
struct ParseReport {
    std::string relation;
    std::size_t sparse_rows = 0;
    std::size_t imputed_numeric = 0;
    std::size_t imputed_nominal = 0;
    std::vector<std::pair<std::string, std::size_t>> imputed_by_column;
};

namespace detail {

inline std::vector<std::string> split_quoted_list(std::string_view s, std::size_t line,
                                                  char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    bool any = false;
    std::size_t i = 0;
    auto flush = [&] {
        out.emplace_back(std::string(trim(cur)));
        cur.clear();
        any = false;
    };
    while (i < s.size()) {
        const char c = s[i];
        if (c == '\'' || c == '"') {
            const char quote = c;
            ++i;
            std::string piece;
            bool closed = false;
            while (i < s.size()) {
                if (s[i] == '\\' && i + 1 < s.size()) {
                    piece += s[i + 1];
                    i += 2;
                } else if (s[i] == quote) {
                    ++i;
                    closed = true;
                    break;
                } else {
                    piece += s[i++];
                }
            }
            if (!closed) throw parse_error("unterminated quote", line);
            cur += piece;
            any = true;
        } else if (c == sep) {
            flush();
            ++i;
        } else {
            cur += c;
            any = true;
            ++i;
        }
    }
    if (any || !out.empty() || !trim(s).empty()) flush();
    return out;
}

// Reads one possibly-quoted token from s starting at pos; advances pos past it.
inline std::string read_token(std::string_view s, std::size_t& pos, std::size_t line) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos >= s.size()) return {};
    std::string out;
    if (s[pos] == '\'' || s[pos] == '"') {
        const char quote = s[pos++];
        bool closed = false;
        while (pos < s.size()) {
            if (s[pos] == '\\' && pos + 1 < s.size()) {
                out += s[pos + 1];
                pos += 2;
            } else if (s[pos] == quote) {
                ++pos;
                closed = true;
                break;
            } else {
                out += s[pos++];
            }
        }
        if (!closed) throw parse_error("unterminated quote", line);
    } else {
        while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t') out += s[pos++];
    }
    return out;
}

inline bool needs_arff_quote(std::string_view s) {
    if (s.empty()) return true;
    return s.find_first_of(" \t,{}%'\"\\") != std::string_view::npos;
}

inline std::string arff_quote(const std::string& s) {
    if (!needs_arff_quote(s)) return s;
    std::string out = "'";
    for (char c : s) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    out += '\'';
    return out;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string xml_unescape(const std::string& s) {
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '&') {
            const auto semi = s.find(';', i);
            if (semi != std::string::npos && semi - i <= 6) {
                const std::string ent = s.substr(i + 1, semi - i - 1);
                i = semi + 1;
                if (ent == "amp") out += '&';
                else if (ent == "lt") out += '<';
                else if (ent == "gt") out += '>';
                else if (ent == "quot") out += '"';
                else if (ent == "apos") out += '\'';
                else { out += '&' + ent + ';'; }
                continue;
            }
        }
        out += s[i++];
    }
    return out;
}

struct ArffAttribute {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
    std::vector<std::string> values;
    std::size_t line = 0;
};

} // namespace detail

/// Extracts label names, in document order, from a Mulan labels XML file.
inline std::vector<std::string> parse_label_xml(std::string_view xml) {
    std::vector<std::string> names;
    std::size_t pos = 0;
    while (true) {
        const auto tag = xml.find("<label", pos);
        if (tag == std::string_view::npos) break;
        const auto after = tag + 6;
        if (after < xml.size() && xml[after] != ' ' && xml[after] != '\t' &&
            xml[after] != '\n' && xml[after] != '\r' && xml[after] != '>') {
            pos = after; // something like <labels ...>
            continue;
        }
        const auto close = xml.find('>', tag);
        if (close == std::string_view::npos)
            throw parse_error("unterminated <label> tag in labels XML");
        const std::string_view inside = xml.substr(tag, close - tag);
        const auto name_at = inside.find("name");
        if (name_at != std::string_view::npos) {
            auto p = inside.find_first_of("\"'", name_at);
            if (p == std::string_view::npos)
                throw parse_error("label element without quoted name attribute in labels XML");
            const char quote = inside[p];
            const auto end = inside.find(quote, p + 1);
            if (end == std::string_view::npos)
                throw parse_error("unterminated name attribute in labels XML");
            names.push_back(detail::xml_unescape(std::string(inside.substr(p + 1, end - p - 1))));
        }
        pos = close + 1;
    }
    if (names.empty()) throw parse_error("labels XML contains no <label name=...> entries");
    for (std::size_t a = 0; a < names.size(); ++a)
        for (std::size_t b = a + 1; b < names.size(); ++b)
            if (names[a] == names[b])
                throw parse_error("duplicate label '" + names[a] + "' in labels XML");
    return names;
}

inline std::string write_label_xml(const std::vector<std::string>& label_names) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
    out << "<labels xmlns=\"http://mulan.sourceforge.net/labels\">\n";
    for (const auto& name : label_names)
        out << "  <label name=\"" << detail::xml_escape(name) << "\"></label>\n";
    out << "</labels>\n";
    return out.str();
}

/// Parses a Mulan pair: ARFF text (numeric and nominal attributes, dense or
/// sparse data rows, '%' comments) plus the labels XML. Attributes named in
/// the XML become label columns in XML order; the rest become features in
/// ARFF order. Relational and date attributes are rejected.
inline MultiLabelDataset parse_mulan(std::string_view arff_text, std::string_view xml_text,
                                     ParseReport* report = nullptr) {
    using detail::ArffAttribute;
    const std::vector<std::string> xml_labels = parse_label_xml(xml_text);

    if (arff_text.substr(0, 3) == "\xEF\xBB\xBF") arff_text.remove_prefix(3);

    std::vector<ArffAttribute> attrs;
    std::string relation = "unnamed";
    bool in_data = false;

    // one entry per data row: attribute-index -> raw cell (missing = "?")
    struct RawRow {
        std::vector<std::string> cells; // dense
        std::vector<std::pair<std::size_t, std::string>> sparse;
        bool is_sparse = false;
        std::size_t line = 0;
    };
    std::vector<RawRow> rows;
    std::size_t sparse_count = 0;

    std::size_t line_no = 0;
    std::size_t cursor = 0;
    while (cursor <= arff_text.size()) {
        const auto nl = arff_text.find('\n', cursor);
        std::string_view raw = arff_text.substr(
            cursor, nl == std::string_view::npos ? arff_text.size() - cursor : nl - cursor);
        cursor = (nl == std::string_view::npos) ? arff_text.size() + 1 : nl + 1;
        ++line_no;
        std::string_view lv = trim(raw);
        if (lv.empty() || lv.front() == '%') continue;

        if (!in_data && lv.front() == '@') {
            const auto sp = lv.find_first_of(" \t");
            const std::string keyword = to_lower(lv.substr(0, sp));
            std::string_view rest = sp == std::string_view::npos ? std::string_view{} : trim(lv.substr(sp));
            if (keyword == "@relation") {
                std::size_t p = 0;
                relation = detail::read_token(rest, p, line_no);
                if (relation.empty()) relation = "unnamed";
            } else if (keyword == "@attribute") {
                ArffAttribute a;
                a.line = line_no;
                std::size_t p = 0;
                a.name = detail::read_token(rest, p, line_no);
                if (a.name.empty()) throw parse_error("attribute without a name", line_no);
                std::string_view type = trim(rest.substr(std::min(p, rest.size())));
                if (type.empty()) throw parse_error("attribute '" + a.name + "' without a type", line_no);
                if (type.front() == '{') {
                    if (type.back() != '}')
                        throw parse_error("unterminated nominal value list for '" + a.name + "'", line_no);
                    a.kind = FeatureKind::nominal;
                    a.values = detail::split_quoted_list(type.substr(1, type.size() - 2), line_no);
                    if (a.values.empty())
                        throw parse_error("empty nominal value list for '" + a.name + "'", line_no);
                } else {
                    const std::string t = to_lower(trim(type));
                    if (t == "numeric" || t == "real" || t == "integer") {
                        a.kind = FeatureKind::numeric;
                    } else if (t.rfind("string", 0) == 0 || t.rfind("date", 0) == 0 ||
                               t.rfind("relational", 0) == 0) {
                        throw parse_error("unsupported attribute type '" + t + "' for '" + a.name +
                                              "' (supported: numeric, real, integer, nominal)",
                                          line_no);
                    } else {
                        throw parse_error("unknown attribute type '" + std::string(type) +
                                              "' for '" + a.name + "'",
                                          line_no);
                    }
                }
                for (const auto& prev : attrs)
                    if (prev.name == a.name)
                        throw parse_error("duplicate attribute name '" + a.name + "'", line_no);
                attrs.push_back(std::move(a));
            } else if (keyword == "@data") {
                in_data = true;
            } else {
                throw parse_error("unknown ARFF declaration '" + keyword + "'", line_no);
            }
            continue;
        }

        if (!in_data)
            throw parse_error("data row before @data section", line_no);

        RawRow row;
        row.line = line_no;
        if (lv.front() == '{') {
            if (lv.back() != '}') throw parse_error("unterminated sparse row", line_no);
            row.is_sparse = true;
            ++sparse_count;
            const auto entries = detail::split_quoted_list(lv.substr(1, lv.size() - 2), line_no);
            for (const auto& e : entries) {
                if (e.empty()) continue; // "{}" row: all defaults
                const auto sp2 = e.find_first_of(" \t");
                if (sp2 == std::string::npos)
                    throw parse_error("sparse entry '" + e + "' lacks a value", line_no);
                std::size_t idx = 0;
                if (!parse_size(std::string_view(e).substr(0, sp2), idx))
                    throw parse_error("bad sparse index in '" + e + "'", line_no);
                if (idx >= attrs.size())
                    throw parse_error("sparse index " + std::to_string(idx) + " out of range", line_no);
                std::string val(trim(std::string_view(e).substr(sp2)));
                std::size_t p = 0;
                val = detail::read_token(val, p, line_no);
                for (const auto& [pidx, pval] : row.sparse)
                    if (pidx == idx)
                        throw parse_error("duplicate sparse index " + std::to_string(idx), line_no);
                row.sparse.emplace_back(idx, std::move(val));
            }
        } else {
            row.cells = detail::split_quoted_list(lv, line_no);
            if (row.cells.size() != attrs.size())
                throw parse_error("expected " + std::to_string(attrs.size()) + " values, got " +
                                      std::to_string(row.cells.size()),
                                  line_no);
        }
        rows.push_back(std::move(row));
    }

    if (attrs.empty()) throw parse_error("ARFF declares no attributes");
    if (rows.empty()) throw data_error("ARFF contains no data rows (n=0 forbidden)");

    // map labels (XML order) and features (ARFF order)
    std::unordered_map<std::string, std::size_t> attr_index;
    for (std::size_t a = 0; a < attrs.size(); ++a) attr_index[attrs[a].name] = a;
    std::vector<std::size_t> label_attr;       // per label j: attribute index
    std::vector<int> attr_role(attrs.size(), -1); // -1 feature, else label slot
    for (std::size_t j = 0; j < xml_labels.size(); ++j) {
        const auto it = attr_index.find(xml_labels[j]);
        if (it == attr_index.end())
            throw data_error("label '" + xml_labels[j] + "' from XML is missing from the ARFF header");
        const auto& a = attrs[it->second];
        const bool binary = a.kind == FeatureKind::nominal && a.values.size() == 2 &&
                            ((a.values[0] == "0" && a.values[1] == "1") ||
                             (a.values[0] == "1" && a.values[1] == "0"));
        if (!binary)
            throw data_error("label attribute '" + a.name + "' is not nominal over {0,1}");
        label_attr.push_back(it->second);
        attr_role[it->second] = static_cast<int>(j);
    }
    std::vector<std::size_t> feature_attr;
    for (std::size_t a = 0; a < attrs.size(); ++a)
        if (attr_role[a] < 0) feature_attr.push_back(a);
    if (feature_attr.empty())
        throw data_error("every ARFF attribute is a label; a dataset needs at least one feature");

    const std::size_t n = rows.size();
    const std::size_t d = feature_attr.size();
    const std::size_t q = label_attr.size();
    constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

    std::vector<double> features(n * d, 0.0);
    std::vector<std::uint8_t> labels(n * q, 0);
    std::vector<std::size_t> imputed_per_feature(d, 0);
    std::vector<std::vector<std::size_t>> nominal_freq(d);
    for (std::size_t f = 0; f < d; ++f)
        if (attrs[feature_attr[f]].kind == FeatureKind::nominal)
            nominal_freq[f].assign(attrs[feature_attr[f]].values.size(), 0);

    // per-attribute slot: feature column or label column
    std::vector<int> attr_to_feature(attrs.size(), -1);
    for (std::size_t f = 0; f < d; ++f) attr_to_feature[feature_attr[f]] = static_cast<int>(f);

    auto parse_cell = [&](std::size_t attr, const std::string& cell, std::size_t line,
                          std::size_t row_i) {
        const auto& a = attrs[attr];
        const int lbl = attr_role[attr];
        if (cell == "?") {
            if (lbl >= 0)
                throw parse_error("missing value in label column '" + a.name + "'", line);
            features[row_i * d + attr_to_feature[attr]] = kMissing;
            return;
        }
        if (lbl >= 0) {
            if (cell == "0") labels[row_i * q + lbl] = 0;
            else if (cell == "1") labels[row_i * q + lbl] = 1;
            else
                throw parse_error("label '" + a.name + "' has non-binary value '" + cell + "'", line);
            return;
        }
        const std::size_t f = attr_to_feature[attr];
        if (a.kind == FeatureKind::numeric) {
            double v = 0;
            if (!parse_double(cell, v) || !std::isfinite(v))
                throw parse_error("bad numeric value '" + cell + "' in column '" + a.name + "'", line);
            features[row_i * d + f] = v;
        } else {
            const auto it = std::find(a.values.begin(), a.values.end(), cell);
            if (it == a.values.end())
                throw parse_error("value '" + cell + "' not in nominal list of '" + a.name + "'", line);
            const auto idx = static_cast<std::size_t>(it - a.values.begin());
            features[row_i * d + f] = static_cast<double>(idx);
            ++nominal_freq[f][idx];
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i];
        if (!row.is_sparse) {
            for (std::size_t a = 0; a < attrs.size(); ++a)
                parse_cell(a, row.cells[a], row.line, i);
        } else {
            // defaults: numeric 0, nominal value "0" when declared (else first),
            // labels 0
            for (std::size_t f = 0; f < d; ++f) {
                const auto& a = attrs[feature_attr[f]];
                if (a.kind == FeatureKind::nominal) {
                    const auto it = std::find(a.values.begin(), a.values.end(), "0");
                    const auto idx = it == a.values.end()
                                         ? std::size_t{0}
                                         : static_cast<std::size_t>(it - a.values.begin());
                    features[i * d + f] = static_cast<double>(idx);
                    ++nominal_freq[f][idx];
                }
            }
            for (const auto& [attr, cell] : row.sparse) {
                const std::size_t f_slot = attr_role[attr] < 0 ? attr_to_feature[attr] : 0;
                if (attr_role[attr] < 0 && attrs[attr].kind == FeatureKind::nominal) {
                    // the default tally above assumed the default value; undo it
                    const auto prev = static_cast<std::size_t>(features[i * d + f_slot]);
                    if (nominal_freq[f_slot][prev] > 0) --nominal_freq[f_slot][prev];
                }
                parse_cell(attr, cell, row.line, i);
            }
        }
    }

    // impute missing feature cells
    std::size_t imputed_numeric = 0, imputed_nominal = 0;
    for (std::size_t f = 0; f < d; ++f) {
        const auto& a = attrs[feature_attr[f]];
        double fill = 0.0;
        if (a.kind == FeatureKind::nominal) {
            std::size_t best = 0;
            for (std::size_t v = 1; v < nominal_freq[f].size(); ++v)
                if (nominal_freq[f][v] > nominal_freq[f][best]) best = v;
            fill = static_cast<double>(best);
        }
        for (std::size_t i = 0; i < n; ++i) {
            double& cell = features[i * d + f];
            if (std::isnan(cell)) {
                cell = fill;
                ++imputed_per_feature[f];
                ++(a.kind == FeatureKind::numeric ? imputed_numeric : imputed_nominal);
            }
        }
    }

    std::vector<FeatureColumn> columns;
    columns.reserve(d);
    for (std::size_t f = 0; f < d; ++f) {
        const auto& a = attrs[feature_attr[f]];
        columns.push_back({a.name, a.kind, a.values});
    }

    if (report) {
        report->relation = relation;
        report->sparse_rows = sparse_count;
        report->imputed_numeric = imputed_numeric;
        report->imputed_nominal = imputed_nominal;
        report->imputed_by_column.clear();
        for (std::size_t f = 0; f < d; ++f)
            if (imputed_per_feature[f] > 0)
                report->imputed_by_column.emplace_back(columns[f].name, imputed_per_feature[f]);
    }

    return MultiLabelDataset(std::move(columns), xml_labels, std::move(features),
                             std::move(labels), relation);
}

/// Serializes the dataset as Mulan ARFF: features in column order, labels
/// appended as nominal {0,1} attributes. Pair with write_label_xml.
inline std::string write_mulan_arff(const MultiLabelDataset& ds) {
    std::ostringstream out;
    out << "@relation " << detail::arff_quote(ds.relation()) << "\n\n";
    for (const auto& c : ds.feature_columns()) {
        out << "@attribute " << detail::arff_quote(c.name) << ' ';
        if (c.kind == FeatureKind::numeric) {
            out << "numeric";
        } else {
            out << '{';
            for (std::size_t v = 0; v < c.values.size(); ++v) {
                if (v) out << ',';
                out << detail::arff_quote(c.values[v]);
            }
            out << '}';
        }
        out << "\n";
    }
    for (const auto& l : ds.label_names())
        out << "@attribute " << detail::arff_quote(l) << " {0,1}\n";
    out << "\n@data\n";
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t j = 0; j < ds.d(); ++j) {
            if (j) out << ',';
            const auto& c = ds.feature_columns()[j];
            if (c.kind == FeatureKind::numeric)
                out << format_double(ds.feature(i, j));
            else
                out << detail::arff_quote(c.values[static_cast<std::size_t>(ds.feature(i, j))]);
        }
        for (std::size_t j = 0; j < ds.q(); ++j)
            out << ',' << static_cast<int>(ds.label(i, j));
        out << "\n";
    }
    return out.str();
}

} // namespace mlil

#endif
