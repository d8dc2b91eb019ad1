#ifndef MLIL_DATASET_HPP
#define MLIL_DATASET_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mlil/error.hpp"

namespace mlil {

enum class FeatureKind : std::uint8_t { numeric, nominal };

/// Schema of one feature column. Nominal columns carry their category list;
/// cells of a nominal column store the category index as a double.
struct FeatureColumn {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
    std::vector<std::string> values; // nominal categories, empty for numeric

    bool operator==(const FeatureColumn&) const = default;
};

/// Immutable in-memory multi-label dataset: an n x d feature matrix plus an
/// n x q binary label matrix. Construction validates every invariant (shape,
/// unique names, binary labels, nominal indices in range); afterwards any
/// number of readers may share one instance concurrently.
class MultiLabelDataset {
public:
    MultiLabelDataset(std::vector<FeatureColumn> columns,
                      std::vector<std::string> label_names,
                      std::vector<double> features,
                      std::vector<std::uint8_t> labels,
                      std::string relation = "mlil")
        : columns_(std::move(columns)),
          label_names_(std::move(label_names)),
          features_(std::move(features)),
          labels_(std::move(labels)),
          relation_(std::move(relation)) {
        d_ = columns_.size();
        q_ = label_names_.size();
        if (d_ == 0) throw data_error("dataset must have at least one feature column");
        if (q_ == 0) throw data_error("dataset must have at least one label");
        if (features_.size() % d_ != 0)
            throw data_error("feature matrix size is not a multiple of the column count");
        n_ = features_.size() / d_;
        if (n_ == 0) throw data_error("dataset must have at least one instance (n=0 forbidden)");
        if (labels_.size() != n_ * q_)
            throw data_error("label matrix shape does not match n x q");

        std::unordered_set<std::string> names;
        for (const auto& c : columns_) {
            if (!names.insert(c.name).second)
                throw data_error("duplicate attribute name: " + c.name);
            if (c.kind == FeatureKind::nominal) {
                if (c.values.empty())
                    throw data_error("nominal column '" + c.name + "' has an empty value list");
                std::unordered_set<std::string> vals(c.values.begin(), c.values.end());
                if (vals.size() != c.values.size())
                    throw data_error("nominal column '" + c.name + "' has duplicate values");
            } else if (!c.values.empty()) {
                throw data_error("numeric column '" + c.name + "' must not carry a value list");
            }
        }
        for (const auto& l : label_names_)
            if (!names.insert(l).second)
                throw data_error("label name collides with another attribute: " + l);

        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < d_; ++j) {
                const double v = features_[i * d_ + j];
                if (!std::isfinite(v))
                    throw data_error("non-finite feature cell in column '" + columns_[j].name + "'");
                if (columns_[j].kind == FeatureKind::nominal) {
                    const auto idx = static_cast<long long>(v);
                    if (v != static_cast<double>(idx) || idx < 0 ||
                        static_cast<std::size_t>(idx) >= columns_[j].values.size())
                        throw data_error("nominal index out of range in column '" + columns_[j].name + "'");
                }
            }
        }
        for (std::uint8_t b : labels_)
            if (b > 1) throw data_error("label cell outside {0,1}");
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t d() const noexcept { return d_; }
    std::size_t q() const noexcept { return q_; }

    const std::vector<FeatureColumn>& feature_columns() const noexcept { return columns_; }
    const std::vector<std::string>& label_names() const noexcept { return label_names_; }
    const std::string& relation() const noexcept { return relation_; }

    double feature(std::size_t i, std::size_t j) const { return features_[i * d_ + j]; }
    std::uint8_t label(std::size_t i, std::size_t j) const { return labels_[i * q_ + j]; }

    std::span<const double> feature_row(std::size_t i) const {
        return {features_.data() + i * d_, d_};
    }
    std::span<const std::uint8_t> label_row(std::size_t i) const {
        return {labels_.data() + i * q_, q_};
    }

    const std::vector<double>& feature_data() const noexcept { return features_; }
    const std::vector<std::uint8_t>& label_data() const noexcept { return labels_; }

    /// Label cardinality: mean number of active labels per instance.
    double cardinality() const {
        const auto ones = std::accumulate(labels_.begin(), labels_.end(), std::size_t{0});
        return static_cast<double>(ones) / static_cast<double>(n_);
    }

    /// Cardinality normalized by the number of labels.
    double density() const { return cardinality() / static_cast<double>(q_); }

    bool operator==(const MultiLabelDataset& other) const {
        return columns_ == other.columns_ && label_names_ == other.label_names_ &&
               features_ == other.features_ && labels_ == other.labels_;
    }

    /// FNV-1a content hash over schema and cells. Stable across runs; keys the
    /// neighbor-index cache and the canonical instance order in stratification.
    std::uint64_t content_hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto mix_bytes = [&h](const void* p, std::size_t len) {
            const auto* b = static_cast<const unsigned char*>(p);
            for (std::size_t i = 0; i < len; ++i) {
                h ^= b[i];
                h *= 0x100000001b3ULL;
            }
        };
        auto mix_str = [&](const std::string& s) { mix_bytes(s.data(), s.size() + 1); };
        for (const auto& c : columns_) {
            mix_str(c.name);
            const auto k = static_cast<std::uint8_t>(c.kind);
            mix_bytes(&k, 1);
            for (const auto& v : c.values) mix_str(v);
        }
        for (const auto& l : label_names_) mix_str(l);
        for (double v : features_) {
            const auto bits = std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v);
            mix_bytes(&bits, sizeof bits);
        }
        mix_bytes(labels_.data(), labels_.size());
        return h;
    }

    /// Content hash of a single row (features + labels), schema-free. Equal
    /// rows hash equal regardless of their position in the dataset.
    std::uint64_t row_hash(std::size_t i) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto mix = [&h](std::uint64_t v) {
            for (int b = 0; b < 8; ++b) {
                h ^= (v >> (8 * b)) & 0xff;
                h *= 0x100000001b3ULL;
            }
        };
        for (std::size_t j = 0; j < d_; ++j) {
            const double v = feature(i, j);
            mix(std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v));
        }
        for (std::size_t j = 0; j < q_; ++j) mix(label(i, j));
        return h;
    }

    /// New dataset holding the given rows (in the given order).
    MultiLabelDataset select_rows(const std::vector<std::size_t>& rows) const {
        std::vector<double> f;
        f.reserve(rows.size() * d_);
        std::vector<std::uint8_t> l;
        l.reserve(rows.size() * q_);
        for (std::size_t r : rows) {
            auto fr = feature_row(r);
            f.insert(f.end(), fr.begin(), fr.end());
            auto lr = label_row(r);
            l.insert(l.end(), lr.begin(), lr.end());
        }
        return MultiLabelDataset(columns_, label_names_, std::move(f), std::move(l), relation_);
    }

    /// New dataset keeping only the given label columns (in the given order).
    MultiLabelDataset select_labels(const std::vector<std::size_t>& keep) const {
        std::vector<std::string> names;
        names.reserve(keep.size());
        for (std::size_t j : keep) names.push_back(label_names_[j]);
        std::vector<std::uint8_t> l;
        l.reserve(n_ * keep.size());
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j : keep) l.push_back(label(i, j));
        return MultiLabelDataset(columns_, std::move(names), features_, std::move(l), relation_);
    }

    /// New dataset keeping only the given feature columns (in the given order).
    MultiLabelDataset select_features(const std::vector<std::size_t>& keep) const {
        std::vector<FeatureColumn> cols;
        cols.reserve(keep.size());
        for (std::size_t j : keep) cols.push_back(columns_[j]);
        std::vector<double> f;
        f.reserve(n_ * keep.size());
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j : keep) f.push_back(feature(i, j));
        return MultiLabelDataset(std::move(cols), label_names_, std::move(f), labels_, relation_);
    }

    /// Dataset extended by extra rows (same schema). Used by the oversamplers.
    MultiLabelDataset append_rows(const std::vector<double>& extra_features,
                                  const std::vector<std::uint8_t>& extra_labels) const {
        std::vector<double> f = features_;
        f.insert(f.end(), extra_features.begin(), extra_features.end());
        std::vector<std::uint8_t> l = labels_;
        l.insert(l.end(), extra_labels.begin(), extra_labels.end());
        return MultiLabelDataset(columns_, label_names_, std::move(f), std::move(l), relation_);
    }

private:
    std::vector<FeatureColumn> columns_;
    std::vector<std::string> label_names_;
    std::vector<double> features_;
    std::vector<std::uint8_t> labels_;
    std::string relation_;
    std::size_t n_ = 0, d_ = 0, q_ = 0;
};

/// Per-label class bookkeeping: positive/negative counts and the
/// majority/minority assignment. A tie resolves as majority=0, minority=1.
struct LabelClassInfo {
    std::vector<std::size_t> count_pos; // n_j^1
    std::vector<std::size_t> count_neg; // n_j^0
    std::vector<std::uint8_t> majority; // G_j
    std::vector<std::uint8_t> minority; // g_j

    std::size_t minority_count(std::size_t j) const {
        return minority[j] ? count_pos[j] : count_neg[j];
    }
    std::size_t majority_count(std::size_t j) const {
        return majority[j] ? count_pos[j] : count_neg[j];
    }
};

inline LabelClassInfo label_class_info(const MultiLabelDataset& ds) {
    const std::size_t n = ds.n(), q = ds.q();
    LabelClassInfo info;
    info.count_pos.assign(q, 0);
    info.count_neg.assign(q, 0);
    info.majority.assign(q, 0);
    info.minority.assign(q, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < q; ++j)
            ++(ds.label(i, j) ? info.count_pos[j] : info.count_neg[j]);
    for (std::size_t j = 0; j < q; ++j) {
        // tie (n^1 == n^0) resolves as majority=0, minority=1
        const bool pos_major = info.count_pos[j] > info.count_neg[j];
        info.majority[j] = pos_major ? 1 : 0;
        info.minority[j] = pos_major ? 0 : 1;
    }
    return info;
}

/// Keeps the ceil(keep_fraction * d) features with the highest non-zero cell
/// counts; ties keep the earlier column. Labels and n are untouched.
inline MultiLabelDataset filter_features_by_frequency(const MultiLabelDataset& ds,
                                                      double keep_fraction) {
    if (!(keep_fraction > 0.0) || keep_fraction > 1.0)
        throw data_error("keep_fraction must be in (0,1]");
    const std::size_t d = ds.d();
    const auto keep_count = static_cast<std::size_t>(
        std::ceil(keep_fraction * static_cast<double>(d)));
    std::vector<std::size_t> nonzero(d, 0);
    for (std::size_t i = 0; i < ds.n(); ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (ds.feature(i, j) != 0.0) ++nonzero[j];
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return nonzero[a] > nonzero[b]; });
    std::vector<std::size_t> keep(order.begin(), order.begin() + keep_count);
    std::sort(keep.begin(), keep.end()); // preserve original column order
    return ds.select_features(keep);
}

/// Removes labels whose minority-class count is below min_minority.
/// Idempotent; errors if nothing would remain.
inline MultiLabelDataset drop_rare_labels(const MultiLabelDataset& ds,
                                          std::size_t min_minority = 2) {
    const auto info = label_class_info(ds);
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < ds.q(); ++j)
        if (info.minority_count(j) >= min_minority) keep.push_back(j);
    if (keep.empty())
        throw data_error("drop_rare_labels would remove every label (empty label space)");
    if (keep.size() == ds.q()) return ds;
    return ds.select_labels(keep);
}

} // namespace mlil

#endif
