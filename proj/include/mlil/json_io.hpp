#ifndef MLIL_JSON_IO_HPP
#define MLIL_JSON_IO_HPP

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "mlil/dataset.hpp"
#include "mlil/ensemble.hpp"
#include "mlil/error.hpp"
#include "mlil/evaluation.hpp"
#include "mlil/imbalance.hpp"
#include "mlil/learners.hpp"
#include "mlil/sampling.hpp"

namespace mlil {

using json = nlohmann::json;

inline json dataset_summary_json(const MultiLabelDataset& ds) {
    return json{{"n", ds.n()},
                {"d", ds.d()},
                {"q", ds.q()},
                {"cardinality", ds.cardinality()},
                {"density", ds.density()}};
}

inline json measures_json(const GlobalMeasures& gm, double limb_value, std::size_t k) {
    return json{{"per_label", json{{"irlbl", gm.irlbl}, {"imr", gm.imr}}},
                {"mean_ir", gm.mean_ir},
                {"cvir", gm.cvir},
                {"mean_imr", gm.mean_imr},
                {"cvimr", gm.cvimr},
                {"scumble", gm.scumble},
                {"limb", limb_value},
                {"k", k}};
}

inline json provenance_json(const SampleOutcome& outcome, const SamplerConfig& cfg) {
    json instances = json::array();
    for (const auto& tag : outcome.provenance) {
        json t;
        switch (tag.kind) {
            case ProvenanceTag::Kind::original: t["kind"] = "original"; break;
            case ProvenanceTag::Kind::synthetic: t["kind"] = "synthetic"; break;
            case ProvenanceTag::Kind::retained: t["kind"] = "retained"; break;
            case ProvenanceTag::Kind::duplicated: t["kind"] = "duplicated"; break;
        }
        t["id"] = tag.id;
        if (tag.kind == ProvenanceTag::Kind::synthetic) t["reference_id"] = tag.reference_id;
        instances.push_back(std::move(t));
    }
    return json{{"method", sampler_name(cfg.method)},
                {"ratio", cfg.p},
                {"k", cfg.k},
                {"seed", cfg.rng_seed},
                {"warnings", outcome.warnings},
                {"instances", std::move(instances)}};
}

inline json report_json(const EvaluationReport& rep,
                        const std::vector<std::string>& label_names = {}) {
    json per_label = json::array();
    for (std::size_t j = 0; j < rep.per_label.size(); ++j) {
        const auto& le = rep.per_label[j];
        json e{{"evaluable", le.evaluable}};
        if (j < label_names.size()) e["label"] = label_names[j];
        if (le.evaluable) {
            e["f1"] = le.f1;
            e["auc_roc"] = le.auc_roc;
            e["aucpr"] = le.aucpr;
            e["threshold"] = le.threshold;
        }
        per_label.push_back(std::move(e));
    }
    return json{{"repeat", rep.repeat},
                {"fold", rep.fold},
                {"learner", rep.learner},
                {"sampler", rep.sampler},
                {"seed", rep.seed},
                {"macro", json{{"f1", rep.macro_f1},
                               {"auc_roc", rep.macro_auc_roc},
                               {"aucpr", rep.macro_aucpr}}},
                {"excluded_labels", rep.excluded_labels},
                {"per_label", std::move(per_label)}};
}

inline json reports_json(const std::vector<EvaluationReport>& reports,
                         const std::vector<std::string>& label_names = {}) {
    json folds = json::array();
    for (std::size_t i = 0; i + 1 < reports.size(); ++i)
        folds.push_back(report_json(reports[i], label_names));
    return json{{"folds", std::move(folds)},
                {"average", report_json(reports.back(), label_names)}};
}

inline json correlation_json(const std::vector<CorrelationEntry>& entries) {
    json rows = json::array();
    for (const auto& e : entries) {
        json r{{"measure", e.measure}, {"learner", e.learner}, {"metric", e.metric}, {"ok", e.ok}};
        if (e.ok) {
            r["rho"] = e.rho;
            r["rank"] = e.rank;
        } else {
            r["error"] = e.error;
        }
        rows.push_back(std::move(r));
    }
    return json{{"rows", std::move(rows)}};
}

inline std::string correlation_csv(const std::vector<CorrelationEntry>& entries) {
    std::string out = "measure,learner,metric,rho,rank,error\n";
    for (const auto& e : entries) {
        out += e.measure + ',' + e.learner + ',' + e.metric + ',';
        if (e.ok) {
            out += format_double(e.rho) + ',' + format_double(e.rank) + ',';
        } else {
            out += ",,\"" + e.error + '"';
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Model persistence (versioned JSON)
// ---------------------------------------------------------------------------

namespace detail {

inline json columns_json(const std::vector<FeatureColumn>& cols) {
    json out = json::array();
    for (const auto& c : cols)
        out.push_back(json{{"name", c.name},
                           {"kind", c.kind == FeatureKind::numeric ? "numeric" : "nominal"},
                           {"values", c.values}});
    return out;
}

inline std::vector<FeatureColumn> columns_from_json(const json& j) {
    std::vector<FeatureColumn> cols;
    for (const auto& e : j) {
        FeatureColumn c;
        c.name = e.at("name").get<std::string>();
        c.kind = e.at("kind").get<std::string>() == "numeric" ? FeatureKind::numeric
                                                              : FeatureKind::nominal;
        c.values = e.at("values").get<std::vector<std::string>>();
        cols.push_back(std::move(c));
    }
    return cols;
}

inline json dataset_json(const MultiLabelDataset& ds) {
    return json{{"relation", ds.relation()},
                {"columns", columns_json(ds.feature_columns())},
                {"label_names", ds.label_names()},
                {"features", ds.feature_data()},
                {"labels", ds.label_data()}};
}

inline MultiLabelDataset dataset_from_json(const json& j) {
    return MultiLabelDataset(columns_from_json(j.at("columns")),
                             j.at("label_names").get<std::vector<std::string>>(),
                             j.at("features").get<std::vector<double>>(),
                             j.at("labels").get<std::vector<std::uint8_t>>(),
                             j.at("relation").get<std::string>());
}

} // namespace detail

inline json model_to_json(const TrainedModel& model) {
    json out{{"format", "mlil-model"},
             {"version", 1},
             {"kind", learner_name(model.kind)},
             {"columns", detail::columns_json(model.columns)},
             {"label_names", model.label_names},
             {"thresholds", model.thresholds}};
    json rates = json::array();
    for (double r : model.constant_rate)
        rates.push_back(std::isnan(r) ? json(nullptr) : json(r));
    out["constant_rate"] = std::move(rates);
    if (model.kind == LearnerKind::br_linear) {
        out["br"] = json{{"l2", model.br_params.l2},
                         {"grad_tol", model.br_params.grad_tol},
                         {"max_iter", model.br_params.max_iter},
                         {"weights", model.br_weights}};
    } else {
        out["mlknn"] = json{{"k", model.knn_params.k},
                            {"smoothing", model.knn_params.smoothing},
                            {"prior1", model.prior1},
                            {"cond_pos", model.cond_pos},
                            {"cond_neg", model.cond_neg},
                            {"train", detail::dataset_json(*model.train_data)}};
    }
    return out;
}

inline TrainedModel model_from_json(const json& j) {
    if (j.value("format", "") != "mlil-model")
        throw data_error("model file: missing mlil-model format marker");
    if (j.value("version", 0) != 1)
        throw data_error("model file: unsupported version");
    TrainedModel model;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "br_linear") model.kind = LearnerKind::br_linear;
    else if (kind == "mlknn") model.kind = LearnerKind::mlknn;
    else throw data_error("model file: unknown kind '" + kind + "'");
    model.columns = detail::columns_from_json(j.at("columns"));
    model.label_names = j.at("label_names").get<std::vector<std::string>>();
    model.thresholds = j.at("thresholds").get<std::vector<double>>();
    model.constant_rate.clear();
    for (const auto& r : j.at("constant_rate"))
        model.constant_rate.push_back(r.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                  : r.get<double>());
    if (model.kind == LearnerKind::br_linear) {
        const auto& br = j.at("br");
        model.br_params.l2 = br.at("l2").get<double>();
        model.br_params.grad_tol = br.at("grad_tol").get<double>();
        model.br_params.max_iter = br.at("max_iter").get<std::size_t>();
        model.br_weights = br.at("weights").get<std::vector<std::vector<double>>>();
    } else {
        const auto& kn = j.at("mlknn");
        model.knn_params.k = kn.at("k").get<std::size_t>();
        model.knn_params.smoothing = kn.at("smoothing").get<double>();
        model.prior1 = kn.at("prior1").get<std::vector<double>>();
        model.cond_pos = kn.at("cond_pos").get<std::vector<std::vector<double>>>();
        model.cond_neg = kn.at("cond_neg").get<std::vector<std::vector<double>>>();
        model.train_data =
            std::make_shared<MultiLabelDataset>(detail::dataset_from_json(kn.at("train")));
        model.train_metric = std::make_shared<DistanceMetric>(*model.train_data);
    }
    return model;
}

} // namespace mlil

#endif
