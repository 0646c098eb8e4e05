#pragma once

#include "fwsvm/evaluation.hpp"

#include <nlohmann/json_fwd.hpp>
#include <string>

namespace fwsvm {

inline constexpr const char* kBundleSchema = "fwsvm-model-bundle/1";
inline constexpr const char* kReportSchema = "fwsvm-report/1";

/// Everything cmd_predict needs to score raw 8-feature rows.
struct ModelBundle {
    StandardizationParams standardization;
    PcaModel pca;
    FeatureWeights weights;
    SvmModel model;
    bool weight_raw_features = false;
    double tuned_C = 0.0;
    double tuned_gamma = 0.0;
    double train_accuracy = 0.0;
};

ModelBundle bundle_from_fold(const FoldResult& fold, const PipelineConfig& cfg);

nlohmann::json bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const nlohmann::json& j);

void write_bundle(const ModelBundle& bundle, const std::string& path);
ModelBundle read_bundle(const std::string& path);

/// Standardize -> project -> decide, for one raw feature row.
double bundle_decision(const ModelBundle& bundle, const Vector& raw_features);

nlohmann::json report_to_json(const PipelineReport& report);
nlohmann::json config_to_json(const PipelineConfig& cfg);

/// Aligned text tables mirroring the published confusion-matrix and
/// metrics layouts.
std::string render_confusion(const ConfusionMatrix& cm);
std::string render_metrics(const Metrics& m);
std::string render_report(const PipelineReport& report);
std::string render_stats_table(const std::vector<FeatureStats>& stats);
nlohmann::json stats_to_json(const std::vector<FeatureStats>& stats);
std::string render_weights(const FeatureWeights& w);
nlohmann::json weights_to_json(const FeatureWeights& w);
std::string trace_to_csv(const std::vector<McsTracePoint>& trace);

} // namespace fwsvm
