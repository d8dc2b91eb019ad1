#ifndef MLIL_SAMPLING_HPP
#define MLIL_SAMPLING_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mlil/dataset.hpp"
#include "mlil/error.hpp"
#include "mlil/imbalance.hpp"
#include "mlil/neighbors.hpp"
#include "mlil/random.hpp"

namespace mlil {

enum class SamplerMethod : std::uint8_t { mlsol, mlul, mlros, mlrus };

inline const char* sampler_name(SamplerMethod m) {
    switch (m) {
        case SamplerMethod::mlsol: return "mlsol";
        case SamplerMethod::mlul: return "mlul";
        case SamplerMethod::mlros: return "mlros";
        case SamplerMethod::mlrus: return "mlrus";
    }
    return "?";
}

struct SamplerConfig {
    SamplerMethod method = SamplerMethod::mlsol;
    double p = 0.3;        // sampling ratio
    std::size_t k = 5;     // neighborhood size (mlsol/mlul)
    std::uint64_t rng_seed = 0;
};

inline void validate_config(const SamplerConfig& cfg, std::size_t n) {
    const bool under = cfg.method == SamplerMethod::mlul || cfg.method == SamplerMethod::mlrus;
    if (under && !(cfg.p > 0.0 && cfg.p < 1.0))
        throw data_error(std::string(sampler_name(cfg.method)) + ": ratio p must be in (0,1)");
    if (!under && !(cfg.p > 0.0))
        throw data_error(std::string(sampler_name(cfg.method)) + ": ratio p must be positive");
    if (cfg.k < 1) throw data_error("neighbor count k must be at least 1");
    (void)n;
}

/// Where each output instance came from.
struct ProvenanceTag {
    enum class Kind : std::uint8_t { original, synthetic, retained, duplicated };
    Kind kind = Kind::original;
    std::uint32_t id = 0;           // source instance in the input dataset
    std::uint32_t reference_id = 0; // synthetic only: the reference instance
};

struct SampleOutcome {
    MultiLabelDataset dataset;
    std::vector<ProvenanceTag> provenance;
    std::vector<std::string> warnings;
};

/// One synthetic instance interpolated between a seed and one of its
/// neighbors (Algorithm "CreateIns").
///
/// Numeric features draw an independent U(0,1) per column; nominal cells copy
/// the parent nearer to the interpolated point (numeric-columns distance,
/// ties to the seed). cd locates the synthetic point between seed (0) and
/// reference (1); each conflicting label is then resolved by comparing cd
/// against a threshold picked from the minority side's cell type:
/// SF 0.5, BD 0.75, RR just above 1 (seed keeps the minority class),
/// OT just below 0 (the majority side wins).
struct SyntheticInstance {
    std::vector<double> features;
    std::vector<std::uint8_t> labels;
};

inline SyntheticInstance create_instance(const MultiLabelDataset& ds, const DistanceMetric& metric,
                                         std::size_t seed_id, std::size_t ref_id,
                                         const LocalStats& stats, Rng& rng) {
    if (seed_id == ref_id) throw data_error("create_instance: seed and reference must differ");
    const std::size_t d = ds.d(), q = ds.q();
    const auto xs = ds.feature_row(seed_id);
    const auto xr = ds.feature_row(ref_id);

    SyntheticInstance out;
    out.features.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        if (ds.feature_columns()[j].kind == FeatureKind::numeric)
            out.features[j] = xs[j] + rng.uniform01() * (xr[j] - xs[j]);
        else
            out.features[j] = xs[j]; // placeholder until numeric cells settle
    }
    bool has_nominal = false;
    for (const auto& c : ds.feature_columns())
        has_nominal |= c.kind == FeatureKind::nominal;
    if (has_nominal) {
        const double to_seed = metric.numeric_only(out.features, xs);
        const double to_ref = metric.numeric_only(out.features, xr);
        const bool seed_nearer = to_seed <= to_ref;
        for (std::size_t j = 0; j < d; ++j)
            if (ds.feature_columns()[j].kind == FeatureKind::nominal)
                out.features[j] = seed_nearer ? xs[j] : xr[j];
    }

    const double d_s = metric(out.features, xs);
    const double d_r = metric(out.features, xr);
    const double cd = (d_s + d_r) > 0.0 ? d_s / (d_s + d_r) : 0.5;

    out.labels.resize(q);
    for (std::size_t j = 0; j < q; ++j) {
        const std::uint8_t ys = ds.label(seed_id, j);
        const std::uint8_t yr = ds.label(ref_id, j);
        if (ys == yr) {
            out.labels[j] = ys;
            continue;
        }
        // exactly one side holds the minority value; orient so "seed side"
        // is the minority one and cd measures distance from it
        const bool seed_minor = stats.t(seed_id, j) != CellType::MJ;
        assert(seed_minor != (stats.t(ref_id, j) != CellType::MJ));
        const CellType type = seed_minor ? stats.t(seed_id, j) : stats.t(ref_id, j);
        const double cd_j = seed_minor ? cd : 1.0 - cd;
        const std::uint8_t minority_value = seed_minor ? ys : yr;
        const std::uint8_t majority_value = seed_minor ? yr : ys;
        double theta = 0.5;
        switch (type) {
            case CellType::SF: theta = 0.5; break;
            case CellType::BD: theta = 0.75; break;
            case CellType::RR: theta = 1.0 + 1e-5; break;
            case CellType::OT: theta = 0.0 - 1e-5; break;
            case CellType::MJ: break; // unreachable
        }
        out.labels[j] = cd_j <= theta ? minority_value : majority_value;
    }
    return out;
}

/// Multi-Label Synthetic Oversampling based on Local label imbalance.
/// Appends floor(n*p) synthetic instances; seeds are drawn with probability
/// proportional to their difficulty weight (uniformly when all weights are
/// zero), references uniformly from the seed's k nearest neighbors.
inline SampleOutcome mlsol(const MultiLabelDataset& ds, const NeighborIndex& idx,
                           const SamplerConfig& cfg) {
    validate_config(cfg, ds.n());
    if (idx.k != cfg.k)
        throw data_error("mlsol: index was built with k=" + std::to_string(idx.k) +
                         " but config asks for k=" + std::to_string(cfg.k));
    const std::size_t n = ds.n();
    const auto gen_count = static_cast<std::size_t>(std::floor(static_cast<double>(n) * cfg.p));
    if (gen_count == 0)
        throw data_error("mlsol: floor(n*p) is zero; increase the sampling ratio p");

    const LocalStats stats = local_stats(ds, idx);
    const DistanceMetric metric(ds);
    double total_w = 0.0;
    for (double w : stats.w) total_w += w;

    SampleOutcome out{ds, {}, {}};
    out.provenance.reserve(n + gen_count);
    for (std::size_t i = 0; i < n; ++i)
        out.provenance.push_back({ProvenanceTag::Kind::original, static_cast<std::uint32_t>(i), 0});
    if (total_w <= 0.0)
        out.warnings.push_back(
            "mlsol: all instance weights are zero (locally balanced data); "
            "falling back to uniform seed selection");

    Rng rng(cfg.rng_seed);
    std::vector<double> synth_features;
    synth_features.reserve(gen_count * ds.d());
    std::vector<std::uint8_t> synth_labels;
    synth_labels.reserve(gen_count * ds.q());
    for (std::size_t g = 0; g < gen_count; ++g) {
        const std::size_t seed_id = total_w > 0.0 ? rng.weighted_index(stats.w, total_w)
                                                  : rng.uniform_index(n);
        const std::uint32_t ref_id = idx.knn[seed_id][rng.uniform_index(idx.k)];
        SyntheticInstance inst = create_instance(ds, metric, seed_id, ref_id, stats, rng);
        synth_features.insert(synth_features.end(), inst.features.begin(), inst.features.end());
        synth_labels.insert(synth_labels.end(), inst.labels.begin(), inst.labels.end());
        out.provenance.push_back(
            {ProvenanceTag::Kind::synthetic, static_cast<std::uint32_t>(seed_id), ref_id});
    }
    out.dataset = ds.append_rows(synth_features, synth_labels);
    return out;
}

/// Per-instance influence on the reverse neighborhood: the signed sum of the
/// informative S scores of every instance that counts x_i among its
/// neighbors, positive when classes agree, divided by |RkNN|. Zero when the
/// reverse neighborhood is empty.
inline std::vector<double> mlul_influence(const MultiLabelDataset& ds, const NeighborIndex& idx,
                                          const LocalStats& stats) {
    const std::size_t n = ds.n(), q = ds.q();
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& rk = idx.rknn[i];
        if (rk.empty()) continue;
        double acc = 0.0;
        for (std::size_t j = 0; j < q; ++j) {
            for (std::uint32_t m : rk) {
                const double s = stats.s(m, j);
                if (s == -1.0) continue;
                acc += ds.label(i, j) == ds.label(m, j) ? s : -s;
            }
        }
        u[i] = acc / static_cast<double>(rk.size());
    }
    return u;
}

/// Multi-Label Undersampling based on Local label imbalance. Retains
/// floor(n*(1-p)) instances sampled without replacement with probability
/// proportional to importance v = w + u - min(w + u); the rest are discarded.
/// Original row order is preserved among the retained instances.
inline SampleOutcome mlul(const MultiLabelDataset& ds, const NeighborIndex& idx,
                          const SamplerConfig& cfg) {
    validate_config(cfg, ds.n());
    if (idx.k != cfg.k)
        throw data_error("mlul: index was built with k=" + std::to_string(idx.k) +
                         " but config asks for k=" + std::to_string(cfg.k));
    const std::size_t n = ds.n();
    const auto retain_count =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - cfg.p)));
    if (retain_count < 1)
        throw data_error("mlul: floor(n*(1-p)) must be at least 1; decrease p");

    const LocalStats stats = local_stats(ds, idx);
    const std::vector<double> u = mlul_influence(ds, idx, stats);
    std::vector<double> v(n, 0.0);
    double lo = stats.w[0] + u[0];
    for (std::size_t i = 0; i < n; ++i) lo = std::min(lo, stats.w[i] + u[i]);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = stats.w[i] + u[i] - lo;
        total += v[i];
    }

    SampleOutcome out{ds, {}, {}};
    if (total <= 0.0)
        out.warnings.push_back(
            "mlul: all importance values are zero; falling back to uniform retention");

    Rng rng(cfg.rng_seed);
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::size_t> retained;
    retained.reserve(retain_count);
    std::vector<double> pool_w(n);
    for (std::size_t draw = 0; draw < retain_count; ++draw) {
        double pool_total = 0.0;
        for (std::size_t a = 0; a < pool.size(); ++a) {
            pool_w[a] = v[pool[a]];
            pool_total += pool_w[a];
        }
        std::size_t pick;
        if (pool_total > 0.0)
            pick = rng.weighted_index({pool_w.data(), pool.size()}, pool_total);
        else
            pick = rng.uniform_index(pool.size());
        retained.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    std::sort(retained.begin(), retained.end());
    out.dataset = ds.select_rows(retained);
    for (std::size_t r : retained)
        out.provenance.push_back({ProvenanceTag::Kind::retained, static_cast<std::uint32_t>(r), 0});
    return out;
}

namespace detail {
// minority labels in the MLROS/MLRUS sense: IRLbl above the mean
inline std::vector<bool> minority_label_mask(const MultiLabelDataset& ds) {
    const GlobalMeasures gm = global_measures(ds);
    std::vector<bool> mask(ds.q());
    for (std::size_t j = 0; j < ds.q(); ++j) mask[j] = gm.irlbl[j] > gm.mean_ir;
    return mask;
}
} // namespace detail

/// Baseline oversampler: clones floor(n*p) uniformly chosen instances that
/// carry at least one minority label. Empty pool (or a zero clone count) is a
/// warned no-op.
inline SampleOutcome mlros(const MultiLabelDataset& ds, const SamplerConfig& cfg) {
    validate_config(cfg, ds.n());
    const std::size_t n = ds.n();
    const auto clone_count = static_cast<std::size_t>(std::floor(static_cast<double>(n) * cfg.p));
    const std::vector<bool> minority = detail::minority_label_mask(ds);

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < ds.q(); ++j) {
            if (minority[j] && ds.label(i, j)) {
                eligible.push_back(i);
                break;
            }
        }
    }

    SampleOutcome out{ds, {}, {}};
    for (std::size_t i = 0; i < n; ++i)
        out.provenance.push_back({ProvenanceTag::Kind::original, static_cast<std::uint32_t>(i), 0});
    if (eligible.empty()) {
        out.warnings.push_back("mlros: no instance carries a minority label; nothing to do");
        return out;
    }
    if (clone_count == 0) {
        out.warnings.push_back("mlros: floor(n*p) is zero; nothing to do");
        return out;
    }

    Rng rng(cfg.rng_seed);
    std::vector<double> f;
    f.reserve(clone_count * ds.d());
    std::vector<std::uint8_t> l;
    l.reserve(clone_count * ds.q());
    for (std::size_t c = 0; c < clone_count; ++c) {
        const std::size_t src = eligible[rng.uniform_index(eligible.size())];
        const auto fr = ds.feature_row(src);
        f.insert(f.end(), fr.begin(), fr.end());
        const auto lr = ds.label_row(src);
        l.insert(l.end(), lr.begin(), lr.end());
        out.provenance.push_back({ProvenanceTag::Kind::duplicated, static_cast<std::uint32_t>(src), 0});
    }
    out.dataset = ds.append_rows(f, l);
    return out;
}

/// Baseline undersampler: removes floor(n*p) uniformly chosen instances that
/// carry no minority label, removing fewer when the eligible pool is smaller.
/// Empty pool is a warned no-op.
inline SampleOutcome mlrus(const MultiLabelDataset& ds, const SamplerConfig& cfg) {
    validate_config(cfg, ds.n());
    const std::size_t n = ds.n();
    auto remove_count = static_cast<std::size_t>(std::floor(static_cast<double>(n) * cfg.p));
    const std::vector<bool> minority = detail::minority_label_mask(ds);

    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < n; ++i) {
        bool carries_minority = false;
        for (std::size_t j = 0; j < ds.q() && !carries_minority; ++j)
            carries_minority = minority[j] && ds.label(i, j);
        if (!carries_minority) pool.push_back(i);
    }

    SampleOutcome out{ds, {}, {}};
    if (pool.empty() || remove_count == 0) {
        if (pool.empty())
            out.warnings.push_back(
                "mlrus: every instance carries a minority label; nothing to remove");
        else
            out.warnings.push_back("mlrus: floor(n*p) is zero; nothing to do");
        for (std::size_t i = 0; i < n; ++i)
            out.provenance.push_back(
                {ProvenanceTag::Kind::retained, static_cast<std::uint32_t>(i), 0});
        return out;
    }
    if (remove_count > pool.size()) {
        out.warnings.push_back("mlrus: eligible pool (" + std::to_string(pool.size()) +
                               ") smaller than floor(n*p)=" + std::to_string(remove_count) +
                               "; removing fewer");
        remove_count = pool.size();
    }

    Rng rng(cfg.rng_seed);
    std::vector<bool> removed(n, false);
    for (std::size_t r = 0; r < remove_count; ++r) {
        const std::size_t pick = rng.uniform_index(pool.size());
        removed[pool[pick]] = true;
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    std::vector<std::size_t> retained;
    retained.reserve(n - remove_count);
    for (std::size_t i = 0; i < n; ++i)
        if (!removed[i]) retained.push_back(i);
    out.dataset = ds.select_rows(retained);
    for (std::size_t r : retained)
        out.provenance.push_back({ProvenanceTag::Kind::retained, static_cast<std::uint32_t>(r), 0});
    return out;
}

/// Dispatch on the configured method, building the neighbor index when the
/// sampler needs one.
inline SampleOutcome apply_sampler(const MultiLabelDataset& ds, const SamplerConfig& cfg,
                                   int jobs = 1) {
    switch (cfg.method) {
        case SamplerMethod::mlsol: return mlsol(ds, build_index(ds, cfg.k, jobs), cfg);
        case SamplerMethod::mlul: return mlul(ds, build_index(ds, cfg.k, jobs), cfg);
        case SamplerMethod::mlros: return mlros(ds, cfg);
        case SamplerMethod::mlrus: return mlrus(ds, cfg);
    }
    throw data_error("unknown sampler method");
}

} // namespace mlil

#endif
