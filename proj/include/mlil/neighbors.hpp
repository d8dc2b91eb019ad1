#ifndef MLIL_NEIGHBORS_HPP
#define MLIL_NEIGHBORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlil/dataset.hpp"
#include "mlil/error.hpp"
#include "mlil/parallel.hpp"

namespace mlil {

enum class DistanceKind : std::uint8_t { euclidean_overlap };

/// Distance over raw cell vectors of one dataset schema: numeric columns are
/// min-max normalized (per-column statistics fixed at construction), nominal
/// columns contribute 0/1 overlap. Symmetric, zero on identical rows.
class DistanceMetric {
public:
    explicit DistanceMetric(const MultiLabelDataset& ds) {
        const std::size_t d = ds.d();
        numeric_.resize(d);
        inv_range_.assign(d, 0.0);
        offset_.assign(d, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            numeric_[j] = ds.feature_columns()[j].kind == FeatureKind::numeric;
            if (!numeric_[j]) continue;
            double lo = ds.feature(0, j), hi = lo;
            for (std::size_t i = 1; i < ds.n(); ++i) {
                const double v = ds.feature(i, j);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            offset_[j] = lo;
            inv_range_[j] = hi > lo ? 1.0 / (hi - lo) : 0.0;
        }
    }

    std::size_t dims() const noexcept { return numeric_.size(); }

    double squared(std::span<const double> a, std::span<const double> b) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < numeric_.size(); ++j) {
            if (numeric_[j]) {
                const double diff = (a[j] - b[j]) * inv_range_[j];
                acc += diff * diff;
            } else {
                acc += a[j] == b[j] ? 0.0 : 1.0;
            }
        }
        return acc;
    }

    double operator()(std::span<const double> a, std::span<const double> b) const {
        return std::sqrt(squared(a, b));
    }

    /// Distance restricted to numeric columns. Used when a synthetic point's
    /// nominal cells are not decided yet.
    double numeric_only(std::span<const double> a, std::span<const double> b) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < numeric_.size(); ++j) {
            if (!numeric_[j]) continue;
            const double diff = (a[j] - b[j]) * inv_range_[j];
            acc += diff * diff;
        }
        return std::sqrt(acc);
    }

private:
    std::vector<bool> numeric_;
    std::vector<double> inv_range_;
    std::vector<double> offset_;
};

/// Exact k-nearest-neighbor lists plus their inverse. knn[i] holds exactly k
/// ids sorted by (distance, id) ascending and never contains i itself;
/// rknn[m] lists, ascending, every i with m in knn[i].
struct NeighborIndex {
    std::size_t k = 0;
    DistanceKind distance_kind = DistanceKind::euclidean_overlap;
    std::vector<std::vector<std::uint32_t>> knn;
    std::vector<std::vector<std::uint32_t>> rknn;
};

/// Brute-force O(n^2 d) index build, optionally parallel over query rows.
/// Ties in distance break by ascending instance id, so the result is
/// deterministic and independent of the worker count.
inline NeighborIndex build_index(const MultiLabelDataset& ds, std::size_t k, int jobs = 1) {
    const std::size_t n = ds.n();
    if (k < 1 || k >= n)
        throw data_error("k must satisfy 1 <= k <= n-1 (k=" + std::to_string(k) +
                         ", n=" + std::to_string(n) + ")");
    const DistanceMetric metric(ds);

    NeighborIndex idx;
    idx.k = k;
    idx.knn.assign(n, {});
    idx.rknn.assign(n, {});

    parallel_for(n, jobs, [&](std::size_t i) {
        std::vector<std::pair<double, std::uint32_t>> cand;
        cand.reserve(n - 1);
        const auto row_i = ds.feature_row(i);
        for (std::size_t m = 0; m < n; ++m) {
            if (m == i) continue;
            cand.emplace_back(metric.squared(row_i, ds.feature_row(m)),
                              static_cast<std::uint32_t>(m));
        }
        // lexicographic pair order makes nth_element break distance ties by id
        std::nth_element(cand.begin(), cand.begin() + (k - 1), cand.end());
        std::sort(cand.begin(), cand.begin() + k);
        auto& out = idx.knn[i];
        out.reserve(k);
        for (std::size_t m = 0; m < k; ++m) out.push_back(cand[m].second);
    });

    for (std::size_t i = 0; i < n; ++i)
        for (std::uint32_t m : idx.knn[i])
            idx.rknn[m].push_back(static_cast<std::uint32_t>(i));
    for (auto& list : idx.rknn) std::sort(list.begin(), list.end());
    return idx;
}

/// kNN of an arbitrary point against the dataset rows under the given metric
/// (no self-exclusion; ties by ascending id). Used by MLkNN scoring.
inline std::vector<std::uint32_t> query_knn(const MultiLabelDataset& ds,
                                            const DistanceMetric& metric,
                                            std::span<const double> point, std::size_t k) {
    const std::size_t n = ds.n();
    if (k < 1 || k > n) throw data_error("query_knn: k out of range");
    std::vector<std::pair<double, std::uint32_t>> cand;
    cand.reserve(n);
    for (std::size_t m = 0; m < n; ++m)
        cand.emplace_back(metric.squared(point, ds.feature_row(m)), static_cast<std::uint32_t>(m));
    std::sort(cand.begin(), cand.end());
    std::vector<std::uint32_t> out;
    out.reserve(k);
    for (std::size_t m = 0; m < k; ++m) out.push_back(cand[m].second);
    return out;
}

// ---------------------------------------------------------------------------
// Binary index cache, keyed by (dataset hash, k, distance kind).
// ---------------------------------------------------------------------------

namespace detail {
constexpr char kIndexMagic[8] = {'M', 'L', 'I', 'L', 'I', 'D', 'X', '1'};

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
bool read_pod(std::istream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return static_cast<bool>(in);
}
} // namespace detail

inline void save_index(const std::string& path, const NeighborIndex& idx,
                       std::uint64_t dataset_hash) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot open index cache file for writing: " + path);
    out.write(detail::kIndexMagic, sizeof detail::kIndexMagic);
    detail::write_pod(out, dataset_hash);
    detail::write_pod(out, static_cast<std::uint64_t>(idx.k));
    detail::write_pod(out, static_cast<std::uint8_t>(idx.distance_kind));
    detail::write_pod(out, static_cast<std::uint64_t>(idx.knn.size()));
    for (const auto& list : idx.knn)
        out.write(reinterpret_cast<const char*>(list.data()),
                  static_cast<std::streamsize>(list.size() * sizeof(std::uint32_t)));
    for (const auto& list : idx.rknn) {
        detail::write_pod(out, static_cast<std::uint64_t>(list.size()));
        out.write(reinterpret_cast<const char*>(list.data()),
                  static_cast<std::streamsize>(list.size() * sizeof(std::uint32_t)));
    }
    if (!out) throw data_error("failed writing index cache file: " + path);
}

/// Loads or rebuilds the index through a cache directory keyed by
/// (dataset hash, k, distance kind). An empty cache_dir bypasses the cache.
inline NeighborIndex build_index_cached(const MultiLabelDataset& ds, std::size_t k, int jobs,
                                        const std::string& cache_dir);

/// Loads a cached index if the file exists and its key matches; nullopt on
/// any mismatch or read failure (the caller then rebuilds).
inline std::optional<NeighborIndex> load_index(const std::string& path,
                                               std::uint64_t dataset_hash, std::size_t k,
                                               DistanceKind kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, detail::kIndexMagic, sizeof magic) != 0) return std::nullopt;
    std::uint64_t hash = 0, file_k = 0, n = 0;
    std::uint8_t kind_byte = 0;
    if (!detail::read_pod(in, hash) || !detail::read_pod(in, file_k) ||
        !detail::read_pod(in, kind_byte) || !detail::read_pod(in, n))
        return std::nullopt;
    if (hash != dataset_hash || file_k != k || kind_byte != static_cast<std::uint8_t>(kind))
        return std::nullopt;
    NeighborIndex idx;
    idx.k = k;
    idx.distance_kind = kind;
    idx.knn.assign(n, std::vector<std::uint32_t>(k));
    for (auto& list : idx.knn) {
        in.read(reinterpret_cast<char*>(list.data()),
                static_cast<std::streamsize>(k * sizeof(std::uint32_t)));
        if (!in) return std::nullopt;
    }
    idx.rknn.assign(n, {});
    for (auto& list : idx.rknn) {
        std::uint64_t len = 0;
        if (!detail::read_pod(in, len)) return std::nullopt;
        list.resize(len);
        in.read(reinterpret_cast<char*>(list.data()),
                static_cast<std::streamsize>(len * sizeof(std::uint32_t)));
        if (!in) return std::nullopt;
    }
    return idx;
}

} // namespace mlil

#endif
