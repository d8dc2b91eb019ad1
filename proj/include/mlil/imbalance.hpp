#ifndef MLIL_IMBALANCE_HPP
#define MLIL_IMBALANCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mlil/dataset.hpp"
#include "mlil/error.hpp"
#include "mlil/neighbors.hpp"

namespace mlil {

/// Global imbalance measures of a multi-label dataset.
///
/// Per label j (with n_j^b the count of instances whose label j equals b and
/// G_j/g_j the majority/minority class):
///   irlbl_j  = max_k(n_k^1) / n_j^1
///   imr_j    = n_j^{G_j} / n_j^{g_j}
/// mean_ir / mean_imr are the arithmetic means, cvir / cvimr the coefficients
/// of variation with the (q-1) denominator. scuins_i is the per-instance
/// concurrence score (1 - geometric/arithmetic mean of irlbl over the
/// instance's active labels) and scumble its average.
struct GlobalMeasures {
    std::vector<double> irlbl;
    std::vector<double> imr;
    double mean_ir = 0.0;
    double cvir = 0.0;
    double mean_imr = 0.0;
    double cvimr = 0.0;
    double scumble = 0.0;
    std::vector<double> scuins;
};

inline GlobalMeasures global_measures(const MultiLabelDataset& ds) {
    const std::size_t n = ds.n(), q = ds.q();
    const LabelClassInfo info = label_class_info(ds);
    for (std::size_t j = 0; j < q; ++j)
        if (info.count_pos[j] == 0)
            throw data_error("label '" + ds.label_names()[j] +
                             "' has zero positive instances; IRLbl is undefined "
                             "(drop_rare_labels first)");

    GlobalMeasures gm;
    gm.irlbl.resize(q);
    gm.imr.resize(q);
    const double max_pos = static_cast<double>(
        *std::max_element(info.count_pos.begin(), info.count_pos.end()));
    for (std::size_t j = 0; j < q; ++j) {
        gm.irlbl[j] = max_pos / static_cast<double>(info.count_pos[j]);
        gm.imr[j] = static_cast<double>(info.majority_count(j)) /
                    static_cast<double>(info.minority_count(j));
    }

    auto mean_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    auto cv_of = [q](const std::vector<double>& v, double mean) {
        if (q <= 1) return 0.0;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::sqrt(ss / static_cast<double>(q - 1)) / mean;
    };
    gm.mean_ir = mean_of(gm.irlbl);
    gm.cvir = cv_of(gm.irlbl, gm.mean_ir);
    gm.mean_imr = mean_of(gm.imr);
    gm.cvimr = cv_of(gm.imr, gm.mean_imr);

    gm.scuins.assign(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t active = 0;
        double arith = 0.0, log_geo = 0.0;
        for (std::size_t j = 0; j < q; ++j) {
            if (!ds.label(i, j)) continue;
            ++active;
            arith += gm.irlbl[j];
            log_geo += std::log(gm.irlbl[j]);
        }
        // no active labels: 0/0 in the printed formula, defined as 0
        if (active > 0) {
            const double geo = std::exp(log_geo / static_cast<double>(active));
            gm.scuins[i] = 1.0 - geo / (arith / static_cast<double>(active));
            // clamp tiny negative excursions from the log/exp round trip
            if (gm.scuins[i] < 0.0 && gm.scuins[i] > -1e-12) gm.scuins[i] = 0.0;
        }
        total += gm.scuins[i];
    }
    gm.scumble = total / static_cast<double>(n);
    return gm;
}

/// Type of one (instance, label) cell: minority cells by local imbalance —
/// safe, borderline, rare, outlier — and MJ for majority cells.
enum class CellType : std::uint8_t { SF, BD, RR, OT, MJ };

/// Local-imbalance statistics shared by MLSOL and MLUL.
///   C: fraction of the k neighbors holding the opposite value (n x q)
///   S: per-label normalized score of informative cells, -1 elsewhere
///   T: cell types after the rare-cell re-examination
///   w: per-instance difficulty weight, sum of the informative S cells
///   limb: mean of C over minority cells, averaged per label (labels with no
///         minority cell are skipped; see the limb() operation for the strict
///         contract)
struct LocalStats {
    std::size_t n = 0, q = 0;
    std::vector<double> C;
    std::vector<double> S;
    std::vector<CellType> T;
    std::vector<double> w;
    double limb = 0.0;

    double c(std::size_t i, std::size_t j) const { return C[i * q + j]; }
    double s(std::size_t i, std::size_t j) const { return S[i * q + j]; }
    CellType t(std::size_t i, std::size_t j) const { return T[i * q + j]; }
};

inline LocalStats local_stats(const MultiLabelDataset& ds, const NeighborIndex& idx) {
    const std::size_t n = ds.n(), q = ds.q();
    if (idx.knn.size() != n)
        throw data_error("neighbor index size does not match the dataset");
    const std::size_t k = idx.k;
    const LabelClassInfo info = label_class_info(ds);

    LocalStats st;
    st.n = n;
    st.q = q;
    st.C.assign(n * q, 0.0);
    st.S.assign(n * q, -1.0);
    st.T.assign(n * q, CellType::MJ);
    st.w.assign(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            std::size_t opposite = 0;
            for (std::uint32_t m : idx.knn[i])
                if (ds.label(m, j) != ds.label(i, j)) ++opposite;
            st.C[i * q + j] = static_cast<double>(opposite) / static_cast<double>(k);
        }
    }

    // initial types
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            if (ds.label(i, j) == info.majority[j]) {
                st.T[i * q + j] = CellType::MJ;
                continue;
            }
            const double c = st.C[i * q + j];
            if (c < 0.3) st.T[i * q + j] = CellType::SF;
            else if (c < 0.7) st.T[i * q + j] = CellType::BD;
            else if (c < 1.0) st.T[i * q + j] = CellType::RR;
            else st.T[i * q + j] = CellType::OT;
        }
    }

    // re-examine RR cells: a rare cell with a safe or borderline neighbor for
    // that label is actually borderline. Promotions run against the previous
    // pass's snapshot until a fixed point.
    bool changed = true;
    while (changed) {
        changed = false;
        const std::vector<CellType> snapshot = st.T;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < q; ++j) {
                if (snapshot[i * q + j] != CellType::RR) continue;
                for (std::uint32_t m : idx.knn[i]) {
                    const CellType tm = snapshot[m * q + j];
                    if (tm == CellType::SF || tm == CellType::BD) {
                        st.T[i * q + j] = CellType::BD;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    // S: informative cells (minority, C < 1) normalized per label. A label
    // whose informative C values are all zero keeps S = 0 for those cells so
    // that balanced data yields zero weights.
    for (std::size_t j = 0; j < q; ++j) {
        double denom = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (ds.label(i, j) == info.minority[j] && st.C[i * q + j] < 1.0)
                denom += st.C[i * q + j];
        for (std::size_t i = 0; i < n; ++i) {
            if (ds.label(i, j) == info.minority[j] && st.C[i * q + j] < 1.0)
                st.S[i * q + j] = denom > 0.0 ? st.C[i * q + j] / denom : 0.0;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < q; ++j)
            if (st.S[i * q + j] != -1.0) acc += st.S[i * q + j];
        st.w[i] = acc;
    }

    // lenient LImb: average over labels that do have minority cells
    double limb_sum = 0.0;
    std::size_t limb_labels = 0;
    for (std::size_t j = 0; j < q; ++j) {
        double csum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (ds.label(i, j) == info.minority[j]) {
                csum += st.C[i * q + j];
                ++count;
            }
        }
        if (count > 0) {
            limb_sum += csum / static_cast<double>(count);
            ++limb_labels;
        }
    }
    st.limb = limb_labels ? limb_sum / static_cast<double>(limb_labels) : 0.0;
    return st;
}

/// Local imbalance of the dataset: mean of C over minority cells, averaged
/// per label. Errors if any label has no minority instance.
inline double limb(const MultiLabelDataset& ds, const NeighborIndex& idx) {
    const LabelClassInfo info = label_class_info(ds);
    for (std::size_t j = 0; j < ds.q(); ++j)
        if (info.minority_count(j) == 0)
            throw data_error("label '" + ds.label_names()[j] +
                             "' has no minority instances; LImb is undefined");
    return local_stats(ds, idx).limb;
}

/// LImb for each requested neighborhood size, each from a fresh index.
inline std::vector<std::pair<std::size_t, double>> limb_sensitivity(
    const MultiLabelDataset& ds, const std::vector<std::size_t>& k_values, int jobs = 1) {
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(k_values.size());
    for (std::size_t k : k_values)
        out.emplace_back(k, limb(ds, build_index(ds, k, jobs)));
    return out;
}

} // namespace mlil

#endif
