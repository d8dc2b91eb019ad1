#ifndef MLIL_EVALUATION_HPP
#define MLIL_EVALUATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mlil/dataset.hpp"
#include "mlil/error.hpp"
#include "mlil/imbalance.hpp"
#include "mlil/learners.hpp"
#include "mlil/matrix.hpp"
#include "mlil/random.hpp"
#include "mlil/sampling.hpp"

namespace mlil {

// ---------------------------------------------------------------------------
// Per-label metrics
// ---------------------------------------------------------------------------

/// F1 of the positive class under the strict "score > threshold" bipartition;
/// 0 when precision + recall is 0.
inline double f1_score(std::span<const std::uint8_t> truth, std::span<const double> scores,
                       double threshold) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool pred = scores[i] > threshold;
        if (pred && truth[i]) ++tp;
        else if (pred && !truth[i]) ++fp;
        else if (!pred && truth[i]) ++fn;
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
}

/// AUC-ROC by the rank statistic; tied scores count half. Requires both
/// classes present.
inline double auc_roc(std::span<const std::uint8_t> truth, std::span<const double> scores) {
    const std::size_t n = truth.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::size_t pos = 0;
    for (auto t : truth) pos += t;
    const std::size_t neg = n - pos;
    if (pos == 0 || neg == 0) throw data_error("auc_roc: single-class truth column");
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t jd = i;
        while (jd + 1 < n && scores[order[jd + 1]] == scores[order[i]]) ++jd;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(jd + 1)) / 2.0;
        for (std::size_t m = i; m <= jd; ++m)
            if (truth[order[m]]) rank_sum_pos += avg_rank;
        i = jd + 1;
    }
    const double u = rank_sum_pos - static_cast<double>(pos) * (static_cast<double>(pos) + 1.0) / 2.0;
    return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

/// Area under the precision-recall curve, step-interpolated (average
/// precision): scores are swept descending, tied scores as one block.
inline double aucpr(std::span<const std::uint8_t> truth, std::span<const double> scores) {
    const std::size_t n = truth.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::size_t pos = 0;
    for (auto t : truth) pos += t;
    if (pos == 0) throw data_error("aucpr: no positive instances");
    double ap = 0.0, tp = 0.0, fp = 0.0, prev_recall = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t jd = i;
        while (jd + 1 < n && scores[order[jd + 1]] == scores[order[i]]) ++jd;
        for (std::size_t m = i; m <= jd; ++m)
            (truth[order[m]] ? tp : fp) += 1.0;
        const double recall = tp / static_cast<double>(pos);
        const double precision = tp / (tp + fp);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = jd + 1;
    }
    return ap;
}

struct LabelEval {
    double f1 = 0.0, auc_roc = 0.0, aucpr = 0.0;
    double threshold = 0.5;
    bool evaluable = true;
};

struct EvaluationReport {
    std::vector<LabelEval> per_label;
    double macro_f1 = 0.0, macro_auc_roc = 0.0, macro_aucpr = 0.0;
    int repeat = -1, fold = -1; // -1 marks the averaged report
    std::string learner;
    std::string sampler = "none";
    std::uint64_t seed = 0;
    std::vector<std::size_t> excluded_labels; // single-class in this fold
};

/// Per-label F1 / AUC-ROC / AUCPR plus macro averages. Labels whose truth
/// column is single-class are excluded from the macro averages and flagged;
/// if every label is single-class this is an error.
inline EvaluationReport macro_metrics(const BitMatrix& truth, const Matrix& scores,
                                      const std::vector<double>& thresholds) {
    if (truth.rows != scores.rows || truth.cols != scores.cols)
        throw data_error("macro_metrics: truth and score shapes disagree");
    if (thresholds.size() != truth.cols)
        throw data_error("macro_metrics: one threshold per label required");
    const std::size_t n = truth.rows, q = truth.cols;
    EvaluationReport rep;
    rep.per_label.resize(q);
    double sf = 0, sroc = 0, spr = 0;
    std::size_t evaluable = 0;
    std::vector<std::uint8_t> tcol(n);
    std::vector<double> scol(n);
    for (std::size_t j = 0; j < q; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            tcol[i] = truth.at(i, j);
            scol[i] = scores.at(i, j);
        }
        std::size_t pos = 0;
        for (auto t : tcol) pos += t;
        auto& le = rep.per_label[j];
        le.threshold = thresholds[j];
        if (pos == 0 || pos == n) {
            le.evaluable = false;
            rep.excluded_labels.push_back(j);
            continue;
        }
        le.f1 = f1_score(tcol, scol, thresholds[j]);
        le.auc_roc = auc_roc(tcol, scol);
        le.aucpr = aucpr(tcol, scol);
        sf += le.f1;
        sroc += le.auc_roc;
        spr += le.aucpr;
        ++evaluable;
    }
    if (evaluable == 0)
        throw data_error("macro_metrics: every label is single-class in the truth matrix");
    rep.macro_f1 = sf / static_cast<double>(evaluable);
    rep.macro_auc_roc = sroc / static_cast<double>(evaluable);
    rep.macro_aucpr = spr / static_cast<double>(evaluable);
    return rep;
}

// ---------------------------------------------------------------------------
// Threshold tuning
// ---------------------------------------------------------------------------

/// Threshold maximizing F1 on one label column. Candidates are the midpoints
/// of consecutive distinct sorted scores plus {0,1}; ties pick the smallest.
inline double tune_threshold(std::span<const std::uint8_t> truth, std::span<const double> scores) {
    std::vector<double> distinct(scores.begin(), scores.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<double> candidates;
    candidates.reserve(distinct.size() + 1);
    candidates.push_back(0.0);
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i)
        candidates.push_back((distinct[i] + distinct[i + 1]) / 2.0);
    candidates.push_back(1.0);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    double best_t = candidates.front();
    double best_f1 = -1.0;
    for (double t : candidates) {
        const double f = f1_score(truth, scores, t);
        if (f > best_f1) {
            best_f1 = f;
            best_t = t;
        }
    }
    return best_t;
}

/// Per-label thresholds maximizing training F1 of the given model on ds.
inline std::vector<double> tune_thresholds(const TrainedModel& model, const MultiLabelDataset& ds,
                                           int jobs = 1) {
    const Matrix scores = model.score_dataset(ds, jobs);
    const std::size_t n = ds.n(), q = ds.q();
    std::vector<double> out(q, 0.5);
    std::vector<std::uint8_t> tcol(n);
    std::vector<double> scol(n);
    for (std::size_t j = 0; j < q; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            tcol[i] = ds.label(i, j);
            scol[i] = scores.at(i, j);
        }
        out[j] = tune_threshold(tcol, scol);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stratified cross-validation
// ---------------------------------------------------------------------------

/// Greedy approximation of iterative multi-label stratification: labels are
/// processed rarest first, each positive instance goes to the fold that still
/// wants that label most. Instances are visited in a content-hash order, so
/// the partition is invariant to row shuffling (up to fold relabeling);
/// remaining ties use the seeded RNG.
inline std::vector<int> stratified_folds(const MultiLabelDataset& ds, std::size_t folds, Rng& rng) {
    const std::size_t n = ds.n(), q = ds.q();
    if (folds < 2 || folds > n) throw data_error("stratified_folds: need 2 <= folds <= n");

    std::vector<std::size_t> canonical(n);
    std::iota(canonical.begin(), canonical.end(), 0);
    std::vector<std::uint64_t> hashes(n);
    for (std::size_t i = 0; i < n; ++i) hashes[i] = ds.row_hash(i);
    std::sort(canonical.begin(), canonical.end(), [&](std::size_t a, std::size_t b) {
        return hashes[a] != hashes[b] ? hashes[a] < hashes[b] : a < b;
    });

    std::vector<std::size_t> capacity(folds, n / folds);
    for (std::size_t f = 0; f < n % folds; ++f) ++capacity[f];

    std::vector<std::vector<double>> desire(q, std::vector<double>(folds));
    std::vector<std::size_t> remaining_pos(q, 0);
    for (std::size_t j = 0; j < q; ++j) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < n; ++i) c += ds.label(i, j);
        remaining_pos[j] = c;
        for (std::size_t f = 0; f < folds; ++f)
            desire[j][f] = static_cast<double>(c) / static_cast<double>(folds);
    }

    std::vector<int> assignment(n, -1);
    auto assign = [&](std::size_t i, std::size_t f) {
        assignment[i] = static_cast<int>(f);
        --capacity[f];
        for (std::size_t j = 0; j < q; ++j) {
            if (ds.label(i, j)) {
                desire[j][f] -= 1.0;
                --remaining_pos[j];
            }
        }
    };

    while (true) {
        // rarest label still having unassigned positives
        std::size_t lbl = q;
        for (std::size_t j = 0; j < q; ++j)
            if (remaining_pos[j] > 0 && (lbl == q || remaining_pos[j] < remaining_pos[lbl]))
                lbl = j;
        if (lbl == q) break;
        for (std::size_t ci = 0; ci < n; ++ci) {
            const std::size_t i = canonical[ci];
            if (assignment[i] != -1 || !ds.label(i, lbl)) continue;
            std::vector<std::size_t> best;
            double best_desire = -std::numeric_limits<double>::infinity();
            for (std::size_t f = 0; f < folds; ++f) {
                if (capacity[f] == 0) continue;
                if (desire[lbl][f] > best_desire) {
                    best_desire = desire[lbl][f];
                    best = {f};
                } else if (desire[lbl][f] == best_desire) {
                    best.push_back(f);
                }
            }
            if (best.size() > 1) { // prefer the emptier fold, then the RNG
                std::size_t max_cap = 0;
                for (std::size_t f : best) max_cap = std::max(max_cap, capacity[f]);
                std::vector<std::size_t> filtered;
                for (std::size_t f : best)
                    if (capacity[f] == max_cap) filtered.push_back(f);
                best = std::move(filtered);
            }
            assign(i, best.size() == 1 ? best[0] : best[rng.uniform_index(best.size())]);
        }
    }
    for (std::size_t ci = 0; ci < n; ++ci) {
        const std::size_t i = canonical[ci];
        if (assignment[i] != -1) continue;
        std::vector<std::size_t> best;
        std::size_t max_cap = 0;
        for (std::size_t f = 0; f < folds; ++f) {
            if (capacity[f] > max_cap) {
                max_cap = capacity[f];
                best = {f};
            } else if (capacity[f] == max_cap && capacity[f] > 0) {
                best.push_back(f);
            }
        }
        assign(i, best.size() == 1 ? best[0] : best[rng.uniform_index(best.size())]);
    }
    return assignment;
}

struct CvOptions {
    std::size_t folds = 2;
    std::size_t repeats = 5;
    std::uint64_t seed = 0;
    LearnerKind learner = LearnerKind::br_linear;
    Hyperparams hp;
    std::optional<SamplerConfig> sampler;
    int jobs = 1;
};

namespace detail {

inline EvaluationReport average_reports(const std::vector<EvaluationReport>& reports,
                                        std::size_t q) {
    EvaluationReport avg;
    avg.per_label.assign(q, {});
    avg.learner = reports.front().learner;
    avg.sampler = reports.front().sampler;
    avg.seed = reports.front().seed;
    std::vector<std::size_t> counts(q, 0);
    for (const auto& r : reports) {
        avg.macro_f1 += r.macro_f1;
        avg.macro_auc_roc += r.macro_auc_roc;
        avg.macro_aucpr += r.macro_aucpr;
        for (std::size_t j = 0; j < q; ++j) {
            if (!r.per_label[j].evaluable) continue;
            avg.per_label[j].f1 += r.per_label[j].f1;
            avg.per_label[j].auc_roc += r.per_label[j].auc_roc;
            avg.per_label[j].aucpr += r.per_label[j].aucpr;
            avg.per_label[j].threshold += r.per_label[j].threshold;
            ++counts[j];
        }
    }
    const auto m = static_cast<double>(reports.size());
    avg.macro_f1 /= m;
    avg.macro_auc_roc /= m;
    avg.macro_aucpr /= m;
    for (std::size_t j = 0; j < q; ++j) {
        if (counts[j] == 0) {
            avg.per_label[j].evaluable = false;
            avg.excluded_labels.push_back(j);
            continue;
        }
        const auto c = static_cast<double>(counts[j]);
        avg.per_label[j].f1 /= c;
        avg.per_label[j].auc_roc /= c;
        avg.per_label[j].aucpr /= c;
        avg.per_label[j].threshold /= c;
    }
    return avg;
}

} // namespace detail

/// Repeated stratified cross-validation. The sampler (when configured) is
/// applied to the training split only; thresholds are tuned on the (sampled)
/// training split; metrics come from the untouched test split. Labels that
/// are single-class in a fold's training split are dropped from that fold and
/// recorded. The returned list holds one report per (repeat, fold) plus a
/// final averaged report (repeat = fold = -1).
inline std::vector<EvaluationReport> cross_validate(const MultiLabelDataset& ds,
                                                    const CvOptions& opts) {
    if (opts.repeats < 1) throw data_error("cross_validate: repeats must be >= 1");
    const std::size_t q = ds.q();
    std::vector<EvaluationReport> reports;

    for (std::size_t rep = 0; rep < opts.repeats; ++rep) {
        Rng fold_rng(derive_seed(opts.seed, rep));
        const std::vector<int> assignment = stratified_folds(ds, opts.folds, fold_rng);
        for (std::size_t fold = 0; fold < opts.folds; ++fold) {
            std::vector<std::size_t> train_rows, test_rows;
            for (std::size_t i = 0; i < ds.n(); ++i)
                (assignment[i] == static_cast<int>(fold) ? test_rows : train_rows).push_back(i);
            if (train_rows.empty() || test_rows.empty())
                throw data_error("cross_validate: empty split; dataset too small for the protocol");
            MultiLabelDataset train_ds = ds.select_rows(train_rows);
            const MultiLabelDataset test_ds = ds.select_rows(test_rows);

            // rare-label guard: drop labels single-class in this training split
            const LabelClassInfo train_info = label_class_info(train_ds);
            std::vector<std::size_t> keep;
            std::vector<std::size_t> excluded;
            for (std::size_t j = 0; j < q; ++j)
                (train_info.minority_count(j) >= 1 ? keep : excluded).push_back(j);
            if (keep.empty())
                throw data_error("cross_validate: fold infeasible, every label is single-class "
                                 "in the training split");
            MultiLabelDataset train_v = keep.size() == q ? train_ds : train_ds.select_labels(keep);
            const MultiLabelDataset test_v = keep.size() == q ? test_ds : test_ds.select_labels(keep);

            const std::uint64_t fold_seed = derive_seed(opts.seed, rep * opts.folds + fold);
            std::string sampler_id = "none";
            if (opts.sampler) {
                SamplerConfig cfg = *opts.sampler;
                cfg.rng_seed = derive_seed(fold_seed, 1);
                sampler_id = sampler_name(cfg.method);
                train_v = apply_sampler(train_v, cfg, opts.jobs).dataset;
            }

            Hyperparams hp = opts.hp;
            hp.mlknn.k = std::min(hp.mlknn.k, train_v.n() - 1);
            TrainedModel model = train(train_v, opts.learner, hp, opts.jobs);
            model.thresholds = tune_thresholds(model, train_v, opts.jobs);

            const Matrix scores = model.score_dataset(test_v, opts.jobs);
            BitMatrix truth(test_v.n(), test_v.q());
            for (std::size_t i = 0; i < test_v.n(); ++i)
                for (std::size_t j = 0; j < test_v.q(); ++j)
                    truth.at(i, j) = test_v.label(i, j);
            EvaluationReport sub = macro_metrics(truth, scores, model.thresholds);

            // map back to original label slots
            EvaluationReport rep_out;
            rep_out.per_label.assign(q, {});
            for (auto& le : rep_out.per_label) le.evaluable = false;
            for (std::size_t m = 0; m < keep.size(); ++m)
                rep_out.per_label[keep[m]] = sub.per_label[m];
            rep_out.macro_f1 = sub.macro_f1;
            rep_out.macro_auc_roc = sub.macro_auc_roc;
            rep_out.macro_aucpr = sub.macro_aucpr;
            rep_out.repeat = static_cast<int>(rep);
            rep_out.fold = static_cast<int>(fold);
            rep_out.learner = learner_name(opts.learner);
            rep_out.sampler = sampler_id;
            rep_out.seed = opts.seed;
            rep_out.excluded_labels = excluded;
            for (std::size_t m = 0; m < keep.size(); ++m)
                if (!sub.per_label[m].evaluable) rep_out.excluded_labels.push_back(keep[m]);
            std::sort(rep_out.excluded_labels.begin(), rep_out.excluded_labels.end());
            reports.push_back(std::move(rep_out));
        }
    }
    reports.push_back(detail::average_reports(reports, q));
    return reports;
}

// ---------------------------------------------------------------------------
// Correlation of measures with performance
// ---------------------------------------------------------------------------

/// Sample Pearson correlation. Needs length >= 3 and nonzero variance on both
/// sides.
inline double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw data_error("pearson: length mismatch");
    const std::size_t n = xs.size();
    if (n < 3) throw data_error("pearson: need at least 3 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw data_error("pearson: zero variance makes the correlation undefined");
    return sxy / std::sqrt(sxx * syy);
}

struct CorrelationEntry {
    std::string measure;
    std::string learner;
    std::string metric;
    double rho = 0.0;
    double rank = 0.0; // rank of |rho| within the (learner, metric) row
    bool ok = true;
    std::string error;
};

struct CorrelateOptions {
    std::size_t k = 5;           // neighborhood size for LImb
    std::size_t folds = 2;
    std::size_t repeats = 5;
    std::uint64_t seed = 0;
    Hyperparams hp;
    int jobs = 1;
};

/// Pearson correlation of each imbalance measure with each (learner, metric)
/// performance across the given datasets. Performance is the averaged macro
/// metric from repeated stratified CV without sampling. A constant measure
/// column errors only the entries of that measure.
inline std::vector<CorrelationEntry> correlate_measures(
    const std::vector<MultiLabelDataset>& datasets, const std::vector<LearnerKind>& learners,
    const CorrelateOptions& opts) {
    if (datasets.size() < 3)
        throw data_error("correlate_measures: need at least 3 datasets");
    if (learners.empty()) throw data_error("correlate_measures: need at least one learner");

    static const char* kMeasures[] = {"MeanIR", "CVIR", "MeanImR", "CVImR", "SCUMBLE", "LImb"};
    const std::size_t nd = datasets.size();
    std::vector<std::vector<double>> measure_cols(6, std::vector<double>(nd));
    for (std::size_t di = 0; di < nd; ++di) {
        const GlobalMeasures gm = global_measures(datasets[di]);
        measure_cols[0][di] = gm.mean_ir;
        measure_cols[1][di] = gm.cvir;
        measure_cols[2][di] = gm.mean_imr;
        measure_cols[3][di] = gm.cvimr;
        measure_cols[4][di] = gm.scumble;
        measure_cols[5][di] = limb(datasets[di], build_index(datasets[di], opts.k, opts.jobs));
    }

    static const char* kMetrics[] = {"f1", "auc_roc", "aucpr"};
    std::vector<CorrelationEntry> out;
    for (LearnerKind lk : learners) {
        std::vector<std::vector<double>> perf(3, std::vector<double>(nd));
        for (std::size_t di = 0; di < nd; ++di) {
            CvOptions cv;
            cv.folds = opts.folds;
            cv.repeats = opts.repeats;
            cv.seed = derive_seed(opts.seed, di);
            cv.learner = lk;
            cv.hp = opts.hp;
            cv.jobs = opts.jobs;
            const auto reports = cross_validate(datasets[di], cv);
            const auto& avg = reports.back();
            perf[0][di] = avg.macro_f1;
            perf[1][di] = avg.macro_auc_roc;
            perf[2][di] = avg.macro_aucpr;
        }
        for (std::size_t mi = 0; mi < 3; ++mi) {
            std::vector<CorrelationEntry> row;
            for (std::size_t me = 0; me < 6; ++me) {
                CorrelationEntry e;
                e.measure = kMeasures[me];
                e.learner = learner_name(lk);
                e.metric = kMetrics[mi];
                try {
                    e.rho = pearson(measure_cols[me], perf[mi]);
                } catch (const error& ex) {
                    e.ok = false;
                    e.error = ex.what();
                }
                row.push_back(std::move(e));
            }
            // ranks of |rho| among the ok entries, 1 = strongest, ties averaged
            std::vector<std::size_t> ok_idx;
            for (std::size_t me = 0; me < 6; ++me)
                if (row[me].ok) ok_idx.push_back(me);
            std::sort(ok_idx.begin(), ok_idx.end(), [&](std::size_t a, std::size_t b) {
                return std::abs(row[a].rho) > std::abs(row[b].rho);
            });
            std::size_t i = 0;
            while (i < ok_idx.size()) {
                std::size_t jd = i;
                while (jd + 1 < ok_idx.size() &&
                       std::abs(row[ok_idx[jd + 1]].rho) == std::abs(row[ok_idx[i]].rho))
                    ++jd;
                const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(jd + 1)) / 2.0;
                for (std::size_t m = i; m <= jd; ++m) row[ok_idx[m]].rank = avg_rank;
                i = jd + 1;
            }
            for (auto& e : row) out.push_back(std::move(e));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ensemble disagreement
// ---------------------------------------------------------------------------

/// Mean pairwise fraction of differing cells over all unordered pairs of
/// prediction matrices.
inline double disagreement(const std::vector<BitMatrix>& predictions) {
    const std::size_t m = predictions.size();
    if (m < 2) throw data_error("disagreement: need at least two prediction matrices");
    const std::size_t rows = predictions[0].rows, cols = predictions[0].cols;
    for (const auto& p : predictions)
        if (p.rows != rows || p.cols != cols)
            throw data_error("disagreement: prediction matrix shapes disagree");
    const double cells = static_cast<double>(rows * cols);
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            std::size_t diff = 0;
            for (std::size_t c = 0; c < rows * cols; ++c)
                diff += predictions[a].data[c] != predictions[b].data[c];
            total += static_cast<double>(diff) / cells;
            ++pairs;
        }
    }
    return total / static_cast<double>(pairs);
}

} // namespace mlil

#endif
