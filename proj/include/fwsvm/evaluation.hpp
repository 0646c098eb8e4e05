#pragma once

#include "fwsvm/dataset.hpp"
#include "fwsvm/mcs.hpp"
#include "fwsvm/mi_weights.hpp"
#include "fwsvm/pca.hpp"
#include "fwsvm/svm.hpp"

#include <optional>
#include <vector>

namespace fwsvm {

struct ConfusionMatrix {
    long tn = 0; // desired negative, output negative
    long fp = 0; // desired negative, output positive
    long fn = 0; // desired positive, output negative
    long tp = 0; // desired positive, output positive

    long total() const { return tn + fp + fn + tp; }
    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        tn += o.tn; fp += o.fp; fn += o.fn; tp += o.tp;
        return *this;
    }
};

ConfusionMatrix confusion(const std::vector<int>& predictions, const std::vector<int>& truth);

struct Metrics {
    // empty optionals mark undefined ratios (empty class), never silent zeros
    std::optional<double> accuracy;
    std::optional<double> sensitivity; // tp / (tp + fn)
    std::optional<double> specificity; // tn / (tn + fp)
};

Metrics compute_metrics(const ConfusionMatrix& cm);

struct PipelineConfig {
    int n_components = 4;
    double c_lo = 1e-3, c_hi = 200.0;
    double gamma_lo = 1e-3, gamma_hi = 2.0;
    KernelVariant kernel_variant = KernelVariant::Sqrt;
    int folds = 10;
    McsConfig mcs;          // bounds are filled in from the (C, gamma) box
    ParzenConfig parzen;
    SvmParams svm;          // C is overwritten by the tuner
    std::uint64_t seed = 0;
    bool log_space = false;        // tune in log10(C), log10(gamma) instead
    bool inner_validation = false; // tuning fitness on an inner 5-fold split
                                   // instead of training accuracy (which
                                   // overfits the (C, gamma) box)
    bool weight_raw_features = false; // MI weights (and the SVM) on the
                                      // standardized raw features, PCA bypassed
    int threads = 1;

    void check() const;
};

/// Trains an FWSVM at (C, gamma) and returns training-set accuracy
/// (classified / total). Solver failure yields fitness 0.
double fitness(double C, double gamma, const SampleMatrix& train, const FeatureWeights& weights,
               KernelVariant variant, const SvmParams& params = {});

/// The exact criterion the tuner maximizes for a given config (training
/// accuracy, or inner 5-fold validation accuracy when enabled). `train` must
/// already be in feature space (standardized / projected).
double tuning_fitness(double C, double gamma, const SampleMatrix& train,
                      const FeatureWeights& weights, const PipelineConfig& cfg,
                      std::uint64_t fold_seed);

struct FoldResult {
    ConfusionMatrix cm;
    Metrics metrics;
    double tuned_C = 0.0;
    double tuned_gamma = 0.0;
    double tuned_fitness = 0.0;
    double train_accuracy = 0.0;
    FeatureWeights weights;
    StandardizationParams standardization;
    PcaModel pca;
    SvmModel model;
    std::vector<McsTracePoint> trace;
    long tuning_evaluations = 0;
};

/// One leakage-free pipeline pass: standardize (fit on train) -> PCA -> MI
/// weights -> MCS over (C, gamma) -> final FWSVM -> evaluation on test.
FoldResult run_fold(const SampleMatrix& train, const SampleMatrix& test,
                    const PipelineConfig& cfg, std::uint64_t fold_seed);

struct MetricAggregate {
    std::optional<double> mean;
    std::optional<double> stddev;
};

struct PipelineReport {
    std::vector<FoldResult> folds;
    ConfusionMatrix pooled;
    MetricAggregate accuracy, sensitivity, specificity;
    PipelineConfig config;
};

PipelineReport cross_validate(const SampleMatrix& data, const PipelineConfig& cfg);

/// Single stratified 90/10 holdout (the 768-sample set gives a 78-sample test
/// slice, the size the published confusion matrices sum to).
PipelineReport single_split(const SampleMatrix& data, const PipelineConfig& cfg);

} // namespace fwsvm
