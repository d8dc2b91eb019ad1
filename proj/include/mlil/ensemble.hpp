#ifndef MLIL_ENSEMBLE_HPP
#define MLIL_ENSEMBLE_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "mlil/dataset.hpp"
#include "mlil/error.hpp"
#include "mlil/evaluation.hpp"
#include "mlil/learners.hpp"
#include "mlil/parallel.hpp"
#include "mlil/random.hpp"
#include "mlil/sampling.hpp"

namespace mlil {

enum class Diversify : std::uint8_t { seed_only, vary_p, vary_k };

inline const char* diversify_name(Diversify d) {
    switch (d) {
        case Diversify::seed_only: return "seed";
        case Diversify::vary_p: return "p";
        case Diversify::vary_k: return "k";
    }
    return "?";
}

/// Ensemble of M sampler+learner pairs: each member trains on an
/// independently re-sampled dataset; prediction averages the member scores
/// and thresholds them per label.
struct EnsembleModel {
    std::vector<TrainedModel> members;
    std::vector<SamplerConfig> member_configs;
    std::vector<double> thresholds;
    LearnerKind learner = LearnerKind::br_linear;

    std::size_t size() const { return members.size(); }

    std::vector<double> score(std::span<const double> instance) const {
        std::vector<double> acc(members.front().q(), 0.0);
        for (const auto& m : members) {
            const auto s = m.score(instance);
            for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += s[j];
        }
        for (double& v : acc) v /= static_cast<double>(members.size());
        return acc;
    }

    Matrix score_dataset(const MultiLabelDataset& ds, int jobs = 1) const {
        Matrix acc = members.front().score_dataset(ds, jobs);
        for (std::size_t m = 1; m < members.size(); ++m) {
            const Matrix s = members[m].score_dataset(ds, jobs);
            for (std::size_t c = 0; c < acc.data.size(); ++c) acc.data[c] += s.data[c];
        }
        for (double& v : acc.data) v /= static_cast<double>(members.size());
        return acc;
    }

    std::vector<std::uint8_t> predict(std::span<const double> instance) const {
        const auto s = score(instance);
        std::vector<std::uint8_t> out(s.size());
        for (std::size_t j = 0; j < s.size(); ++j) out[j] = s[j] > thresholds[j] ? 1 : 0;
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
// section 4.5 grids, assigned cyclically over members
inline double vary_p_value(SamplerMethod method, std::size_t member) {
    static constexpr double kOver[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    static constexpr double kUnder[] = {0.01, 0.05, 0.1, 0.15, 0.2};
    const bool under = method == SamplerMethod::mlul || method == SamplerMethod::mlrus;
    return (under ? kUnder : kOver)[member % 5];
}
inline std::size_t vary_k_value(std::size_t member) { return 5 + member % 5; }
} // namespace detail

/// Trains an EMLS ensemble: member i samples the training set with a seed
/// derived from (master_seed, i) — and, when diversify asks for it, a p or k
/// from the published grids — then trains the base learner on the sampled
/// data. Ensemble thresholds are tuned on the original training set against
/// the averaged member scores.
inline EnsembleModel train_emls(const MultiLabelDataset& ds, const SamplerConfig& base_cfg,
                                LearnerKind learner, const Hyperparams& hp, std::size_t members,
                                Diversify diversify, std::uint64_t master_seed, int jobs = 1) {
    if (members < 2) throw data_error("train_emls: ensemble size M must be at least 2");

    EnsembleModel model;
    model.learner = learner;
    model.member_configs.resize(members);
    for (std::size_t m = 0; m < members; ++m) {
        SamplerConfig cfg = base_cfg;
        cfg.rng_seed = derive_seed(master_seed, m);
        if (diversify == Diversify::vary_p) cfg.p = detail::vary_p_value(cfg.method, m);
        if (diversify == Diversify::vary_k) cfg.k = detail::vary_k_value(m);
        model.member_configs[m] = cfg;
    }
    for (std::size_t a = 0; a < members; ++a)
        for (std::size_t b = a + 1; b < members; ++b)
            if (model.member_configs[a].rng_seed == model.member_configs[b].rng_seed)
                throw data_error("train_emls: derived member seeds collide; change master_seed");

    model.members.resize(members);
    parallel_for(members, jobs, [&](std::size_t m) {
        const SampleOutcome outcome = apply_sampler(ds, model.member_configs[m], 1);
        Hyperparams member_hp = hp;
        member_hp.mlknn.k = std::min(member_hp.mlknn.k, outcome.dataset.n() - 1);
        model.members[m] = train(outcome.dataset, learner, member_hp, 1);
    });

    // averaged-then-tuned thresholds on the original training set
    const Matrix scores = model.score_dataset(ds, jobs);
    model.thresholds.assign(ds.q(), 0.5);
    std::vector<std::uint8_t> tcol(ds.n());
    std::vector<double> scol(ds.n());
    for (std::size_t j = 0; j < ds.q(); ++j) {
        for (std::size_t i = 0; i < ds.n(); ++i) {
            tcol[i] = ds.label(i, j);
            scol[i] = scores.at(i, j);
        }
        model.thresholds[j] = tune_threshold(tcol, scol);
    }
    return model;
}

/// Diversity of the ensemble on a test set: member-wise bit predictions at
/// the untuned 0.5 threshold, fed to the pairwise disagreement measure.
inline double ensemble_disagreement(const EnsembleModel& model, const MultiLabelDataset& test_ds,
                                    int jobs = 1) {
    std::vector<BitMatrix> preds;
    preds.reserve(model.size());
    for (const auto& member : model.members) {
        const Matrix s = member.score_dataset(test_ds, jobs);
        BitMatrix p(s.rows, s.cols);
        for (std::size_t i = 0; i < s.rows; ++i)
            for (std::size_t j = 0; j < s.cols; ++j)
                p.at(i, j) = s.at(i, j) > 0.5 ? 1 : 0;
        preds.push_back(std::move(p));
    }
    return disagreement(preds);
}

} // namespace mlil

#endif
