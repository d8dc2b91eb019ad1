#ifndef MLIL_LEARNERS_HPP
#define MLIL_LEARNERS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mlil/dataset.hpp"
#include "mlil/error.hpp"
#include "mlil/matrix.hpp"
#include "mlil/neighbors.hpp"
#include "mlil/parallel.hpp"

namespace mlil {

enum class LearnerKind : std::uint8_t { br_linear, mlknn };

inline const char* learner_name(LearnerKind k) {
    return k == LearnerKind::br_linear ? "br_linear" : "mlknn";
}

struct BrLinearParams {
    double l2 = 1.0;          // ridge strength on weights (bias unpenalized)
    double grad_tol = 1e-6;   // stop when the gradient max-norm drops below this
    std::size_t max_iter = 100;
};

struct MlknnParams {
    std::size_t k = 10;
    double smoothing = 1.0;
};

struct Hyperparams {
    BrLinearParams br;
    MlknnParams mlknn;
};

namespace detail {

inline double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

// log(1 + e^a) without overflow
inline double softplus(double a) { return a > 0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a)); }

// In-place Cholesky solve of A x = b for symmetric positive definite A
// (row-major, dim x dim). A and b are clobbered; the solution lands in b.
inline void cholesky_solve(std::vector<double>& A, std::vector<double>& b, std::size_t dim) {
    for (std::size_t c = 0; c < dim; ++c) {
        double diag = A[c * dim + c];
        for (std::size_t k = 0; k < c; ++k) diag -= A[c * dim + k] * A[c * dim + k];
        if (diag <= 0.0) throw data_error("cholesky_solve: matrix not positive definite");
        const double root = std::sqrt(diag);
        A[c * dim + c] = root;
        for (std::size_t r = c + 1; r < dim; ++r) {
            double v = A[r * dim + c];
            for (std::size_t k = 0; k < c; ++k) v -= A[r * dim + k] * A[c * dim + k];
            A[r * dim + c] = v / root;
        }
    }
    for (std::size_t r = 0; r < dim; ++r) { // forward: L y = b
        double v = b[r];
        for (std::size_t k = 0; k < r; ++k) v -= A[r * dim + k] * b[k];
        b[r] = v / A[r * dim + r];
    }
    for (std::size_t r = dim; r-- > 0;) { // backward: L^T x = y
        double v = b[r];
        for (std::size_t k = r + 1; k < dim; ++k) v -= A[k * dim + r] * b[k];
        b[r] = v / A[r * dim + r];
    }
}

} // namespace detail

/// A trained multi-label scorer. br_linear keeps one L2-regularized logistic
/// model per label (fit by Newton iterations to the configured gradient
/// tolerance); mlknn keeps the training set plus smoothed prior/conditional
/// count tables. Labels that are single-class at training time get a constant
/// scorer at the add-1 smoothed class rate. Bipartition thresholds default to
/// 0.5 until tuned; predict() uses the strict "score larger than threshold"
/// rule.
class TrainedModel {
public:
    LearnerKind kind = LearnerKind::br_linear;
    std::vector<FeatureColumn> columns;
    std::vector<std::string> label_names;
    std::vector<double> thresholds;

    // br_linear: per label d+1 weights, bias last; empty when constant
    std::vector<std::vector<double>> br_weights;
    std::vector<double> constant_rate; // NaN when the label is not constant
    BrLinearParams br_params;

    // mlknn
    MlknnParams knn_params;
    std::shared_ptr<const MultiLabelDataset> train_data;
    std::shared_ptr<const DistanceMetric> train_metric;
    std::vector<double> prior1;                  // per label
    std::vector<std::vector<double>> cond_pos;   // per label, k+1 entries
    std::vector<std::vector<double>> cond_neg;

    std::size_t q() const { return label_names.size(); }
    std::size_t d() const { return columns.size(); }

    void check_schema(std::span<const double> instance) const {
        if (instance.size() != columns.size())
            throw data_error("score: instance has " + std::to_string(instance.size()) +
                             " features but the model was trained with " +
                             std::to_string(columns.size()));
    }

    void check_schema(const MultiLabelDataset& ds) const {
        if (!(ds.feature_columns() == columns))
            throw data_error("score: dataset feature schema does not match the trained model");
    }

    /// Per-label relevance degrees in [0,1].
    std::vector<double> score(std::span<const double> instance) const {
        check_schema(instance);
        std::vector<double> out(q(), 0.0);
        if (kind == LearnerKind::br_linear) {
            for (std::size_t j = 0; j < q(); ++j) {
                if (!std::isnan(constant_rate[j])) {
                    out[j] = constant_rate[j];
                    continue;
                }
                const auto& w = br_weights[j];
                double a = w.back();
                for (std::size_t f = 0; f < d(); ++f) a += w[f] * instance[f];
                out[j] = detail::sigmoid(a);
            }
        } else {
            const auto nn = query_knn(*train_data, *train_metric, instance, knn_params.k);
            for (std::size_t j = 0; j < q(); ++j) {
                if (!std::isnan(constant_rate[j])) {
                    out[j] = constant_rate[j];
                    continue;
                }
                std::size_t c = 0;
                for (auto m : nn) c += train_data->label(m, j);
                const double p1 = prior1[j] * cond_pos[j][c];
                const double p0 = (1.0 - prior1[j]) * cond_neg[j][c];
                out[j] = p1 / (p1 + p0);
            }
        }
        return out;
    }

    Matrix score_dataset(const MultiLabelDataset& ds, int jobs = 1) const {
        check_schema(ds);
        Matrix m(ds.n(), q());
        parallel_for(ds.n(), jobs, [&](std::size_t i) {
            const auto s = score(ds.feature_row(i));
            for (std::size_t j = 0; j < q(); ++j) m.at(i, j) = s[j];
        });
        return m;
    }

    /// Bipartition: 1 iff score strictly exceeds the label's threshold.
    std::vector<std::uint8_t> predict(std::span<const double> instance) const {
        const auto s = score(instance);
        std::vector<std::uint8_t> out(q());
        for (std::size_t j = 0; j < q(); ++j) out[j] = s[j] > thresholds[j] ? 1 : 0;
        return out;
    }

    BitMatrix predict_dataset(const MultiLabelDataset& ds, int jobs = 1) const {
        const Matrix s = score_dataset(ds, jobs);
        BitMatrix out(s.rows, s.cols);
        for (std::size_t i = 0; i < s.rows; ++i)
            for (std::size_t j = 0; j < s.cols; ++j)
                out.at(i, j) = s.at(i, j) > thresholds[j] ? 1 : 0;
        return out;
    }
};

namespace detail {

inline void fit_br_label(const MultiLabelDataset& ds, std::size_t j, const BrLinearParams& prm,
                         TrainedModel& model) {
    const std::size_t n = ds.n(), d = ds.d(), dim = d + 1;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) pos += ds.label(i, j);
    if (pos == 0 || pos == n) {
        model.constant_rate[j] =
            (static_cast<double>(pos) + 1.0) / (static_cast<double>(n) + 2.0);
        return;
    }

    std::vector<double> w(dim, 0.0);
    std::vector<double> act(n), prob(n), grad(dim), hess(dim * dim), step(dim);
    auto objective = [&](const std::vector<double>& wv) {
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double a = wv.back();
            const auto row = ds.feature_row(i);
            for (std::size_t c = 0; c < d; ++c) a += wv[c] * row[c];
            f += softplus(a) - (ds.label(i, j) ? a : 0.0);
        }
        for (std::size_t c = 0; c < d; ++c) f += 0.5 * prm.l2 * wv[c] * wv[c];
        return f;
    };

    double f_cur = objective(w);
    for (std::size_t iter = 0; iter < prm.max_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double a = w.back();
            const auto row = ds.feature_row(i);
            for (std::size_t c = 0; c < d; ++c) a += w[c] * row[c];
            act[i] = a;
            prob[i] = sigmoid(a);
        }
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = prob[i] - (ds.label(i, j) ? 1.0 : 0.0);
            const auto row = ds.feature_row(i);
            for (std::size_t c = 0; c < d; ++c) grad[c] += r * row[c];
            grad.back() += r;
        }
        for (std::size_t c = 0; c < d; ++c) grad[c] += prm.l2 * w[c];
        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        if (gmax <= prm.grad_tol) break;

        std::fill(hess.begin(), hess.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = prob[i] * (1.0 - prob[i]);
            if (s <= 0.0) continue;
            const auto row = ds.feature_row(i);
            for (std::size_t a = 0; a < d; ++a) {
                const double sa = s * row[a];
                for (std::size_t b = a; b < d; ++b) hess[a * dim + b] += sa * row[b];
                hess[a * dim + d] += sa;
            }
            hess[d * dim + d] += s;
        }
        for (std::size_t c = 0; c < d; ++c) hess[c * dim + c] += prm.l2;
        hess[d * dim + d] += 1e-10; // keep the unpenalized bias row definite
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < a; ++b) hess[a * dim + b] = hess[b * dim + a];

        step = grad;
        cholesky_solve(hess, step, dim);
        // damped Newton: halve until the objective does not increase
        double scale = 1.0;
        std::vector<double> trial(dim);
        for (int half = 0; half < 40; ++half) {
            for (std::size_t c = 0; c < dim; ++c) trial[c] = w[c] - scale * step[c];
            const double f_trial = objective(trial);
            if (f_trial <= f_cur + 1e-12) {
                w = trial;
                f_cur = f_trial;
                break;
            }
            scale *= 0.5;
        }
    }
    model.br_weights[j] = std::move(w);
}

} // namespace detail

/// Trains a model of the given kind. Per-label work runs in parallel when
/// jobs allows. For mlknn the neighborhood statistics use leave-one-out
/// neighbors inside the training set; scoring later searches the whole
/// stored set.
inline TrainedModel train(const MultiLabelDataset& ds, LearnerKind kind, const Hyperparams& hp = {},
                          int jobs = 1) {
    const std::size_t n = ds.n(), q = ds.q();
    TrainedModel model;
    model.kind = kind;
    model.columns = ds.feature_columns();
    model.label_names = ds.label_names();
    model.thresholds.assign(q, 0.5);
    model.constant_rate.assign(q, std::numeric_limits<double>::quiet_NaN());

    if (kind == LearnerKind::br_linear) {
        model.br_params = hp.br;
        model.br_weights.assign(q, {});
        parallel_for(q, jobs, [&](std::size_t j) { detail::fit_br_label(ds, j, hp.br, model); });
        return model;
    }

    // mlknn
    const std::size_t k = hp.mlknn.k;
    if (k + 1 > n)
        throw data_error("mlknn: k (" + std::to_string(k) + ") must be at most n-1 (n=" +
                         std::to_string(n) + ")");
    const double s = hp.mlknn.smoothing;
    model.knn_params = hp.mlknn;
    model.train_data = std::make_shared<MultiLabelDataset>(ds);
    model.train_metric = std::make_shared<DistanceMetric>(*model.train_data);
    model.prior1.assign(q, 0.0);
    model.cond_pos.assign(q, std::vector<double>(k + 1, 0.0));
    model.cond_neg.assign(q, std::vector<double>(k + 1, 0.0));

    const NeighborIndex idx = build_index(ds, k, jobs);
    for (std::size_t j = 0; j < q; ++j) {
        std::size_t pos = 0;
        for (std::size_t i = 0; i < n; ++i) pos += ds.label(i, j);
        model.prior1[j] = (s + static_cast<double>(pos)) / (s * 2.0 + static_cast<double>(n));
        if (pos == 0 || pos == n) {
            model.constant_rate[j] =
                (static_cast<double>(pos) + 1.0) / (static_cast<double>(n) + 2.0);
            continue;
        }
        std::vector<std::size_t> count_pos(k + 1, 0), count_neg(k + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t c = 0;
            for (auto m : idx.knn[i]) c += ds.label(m, j);
            ++(ds.label(i, j) ? count_pos[c] : count_neg[c]);
        }
        double tot_pos = 0, tot_neg = 0;
        for (std::size_t c = 0; c <= k; ++c) {
            tot_pos += static_cast<double>(count_pos[c]);
            tot_neg += static_cast<double>(count_neg[c]);
        }
        for (std::size_t c = 0; c <= k; ++c) {
            model.cond_pos[j][c] =
                (s + static_cast<double>(count_pos[c])) / (s * static_cast<double>(k + 1) + tot_pos);
            model.cond_neg[j][c] =
                (s + static_cast<double>(count_neg[c])) / (s * static_cast<double>(k + 1) + tot_neg);
        }
    }
    return model;
}

} // namespace mlil

#endif
