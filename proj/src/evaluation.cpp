#include "fwsvm/evaluation.hpp"
#include "fwsvm/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace fwsvm {

ConfusionMatrix confusion(const std::vector<int>& predictions, const std::vector<int>& truth) {
    if (predictions.size() != truth.size())
        throw std::invalid_argument("confusion: prediction/truth length mismatch");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] > 0)
            (predictions[i] > 0 ? cm.tp : cm.fn) += 1;
        else
            (predictions[i] > 0 ? cm.fp : cm.tn) += 1;
    }
    return cm;
}

Metrics compute_metrics(const ConfusionMatrix& cm) {
    Metrics m;
    if (cm.total() > 0)
        m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    if (cm.tp + cm.fn > 0)
        m.sensitivity = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    if (cm.tn + cm.fp > 0)
        m.specificity = static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
    return m;
}

void PipelineConfig::check() const {
    if (n_components < 1 || n_components > 8)
        throw std::invalid_argument("PipelineConfig: n_components must lie in [1, 8]");
    if (!(c_lo > 0.0 && c_lo < c_hi))
        throw std::invalid_argument("PipelineConfig: C bounds must be positive and ordered");
    if (!(gamma_lo > 0.0 && gamma_lo < gamma_hi))
        throw std::invalid_argument("PipelineConfig: gamma bounds must be positive and ordered");
    if (folds < 2)
        throw std::invalid_argument("PipelineConfig: folds >= 2 required");
    if (threads < 1)
        throw std::invalid_argument("PipelineConfig: threads >= 1 required");
}

namespace {

double training_accuracy(const Matrix& gram, const Vector& y, const DualSolution& sol) {
    const Vector coef = sol.multipliers.cwiseProduct(y);
    const Vector f = gram * coef + Vector::Constant(y.size(), sol.bias);
    long correct = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const int pred = f[i] >= 0.0 ? 1 : -1;
        if (pred == static_cast<int>(y[i]))
            ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(y.size());
}

} // namespace

double fitness(double C, double gamma, const SampleMatrix& train, const FeatureWeights& weights,
               KernelVariant variant, const SvmParams& params) {
    try {
        KernelSpec spec{gamma, weights.alpha, variant};
        SvmParams p = params;
        p.C = C;
        const Matrix gram = gram_matrix(train.X, spec);
        const DualSolution sol = solve_dual(gram, train.y, p);
        return training_accuracy(gram, train.y, sol);
    } catch (const std::exception&) {
        return 0.0; // keeps the tuner's total order over candidates
    }
}

namespace {

// Cached tuning objective: the weighted distance matrix depends only on the
// feature weights, so each (C, gamma) candidate costs one elementwise exp
// plus a dual solve.
class TuningObjective {
public:
    TuningObjective(const SampleMatrix& train, const FeatureWeights& weights,
                    const PipelineConfig& cfg, std::uint64_t seed)
        : train_(train), cfg_(cfg) {
        dist_ = weighted_distance_matrix(train.X, weights.alpha, cfg.kernel_variant);
        if (cfg.inner_validation) {
            inner_plan_ = stratified_kfold(train.y, 5, derive_seed(seed, "inner_validation"));
        }
    }

    double operator()(double C, double gamma) const {
        SvmParams p = cfg_.svm;
        p.C = C;
        const Matrix gram = (-gamma * dist_.array()).exp();
        try {
            if (!cfg_.inner_validation) {
                const DualSolution sol = solve_dual(gram, train_.y, p);
                return training_accuracy(gram, train_.y, sol);
            }
            return inner_validation_accuracy(gram, p);
        } catch (const std::exception&) {
            return 0.0;
        }
    }

private:
    double inner_validation_accuracy(const Matrix& gram, const SvmParams& p) const {
        long correct = 0, total = 0;
        for (int fold = 0; fold < inner_plan_.k; ++fold) {
            std::vector<Eigen::Index> tr, te;
            for (Eigen::Index i = 0; i < train_.n(); ++i)
                (inner_plan_.assignments[static_cast<std::size_t>(i)] == fold ? te : tr)
                    .push_back(i);
            Matrix g(tr.size(), tr.size());
            Vector ytr(tr.size());
            for (std::size_t a = 0; a < tr.size(); ++a) {
                ytr[static_cast<Eigen::Index>(a)] = train_.y[tr[a]];
                for (std::size_t b = 0; b < tr.size(); ++b)
                    g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                        gram(tr[a], tr[b]);
            }
            const DualSolution sol = solve_dual(g, ytr, p);
            const Vector coef = sol.multipliers.cwiseProduct(ytr);
            for (Eigen::Index t : te) {
                double f = sol.bias;
                for (std::size_t a = 0; a < tr.size(); ++a)
                    f += coef[static_cast<Eigen::Index>(a)] * gram(t, tr[a]);
                if ((f >= 0.0 ? 1 : -1) == static_cast<int>(train_.y[t]))
                    ++correct;
                ++total;
            }
        }
        return total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
    }

    const SampleMatrix& train_;
    const PipelineConfig& cfg_;
    Matrix dist_;
    FoldPlan inner_plan_;
};

} // namespace

double tuning_fitness(double C, double gamma, const SampleMatrix& train,
                      const FeatureWeights& weights, const PipelineConfig& cfg,
                      std::uint64_t fold_seed) {
    const TuningObjective objective(train, weights, cfg, fold_seed);
    return objective(C, gamma);
}

FoldResult run_fold(const SampleMatrix& train, const SampleMatrix& test,
                    const PipelineConfig& cfg, std::uint64_t fold_seed) {
    cfg.check();
    FoldResult result;

    // stage 0: standardization, fit on the training rows only
    result.standardization = standardize_fit(train);
    const SampleMatrix train_std = standardize_apply(result.standardization, train);
    const SampleMatrix test_std = standardize_apply(result.standardization, test);

    // stage 1: PCA
    result.pca = pca_fit(train_std, cfg.n_components);
    SampleMatrix train_feat, test_feat;
    if (cfg.weight_raw_features) {
        train_feat = train_std;
        test_feat = test_std;
    } else {
        train_feat = {pca_transform_rows(result.pca, train_std.X), train_std.y};
        test_feat = {pca_transform_rows(result.pca, test_std.X), test_std.y};
    }

    // stage 2: MI feature weights
    result.weights = compute_weights(train_feat, cfg.parzen);

    // stage 3: MCS over the (C, gamma) box
    const TuningObjective tuning(train_feat, result.weights, cfg, fold_seed);
    McsConfig mcs_cfg = cfg.mcs;
    mcs_cfg.seed = derive_seed(fold_seed, "mcs_tuning");
    mcs_cfg.bounds.resize(2, 2);
    if (cfg.log_space) {
        mcs_cfg.bounds << std::log10(cfg.c_lo), std::log10(cfg.c_hi),
                          std::log10(cfg.gamma_lo), std::log10(cfg.gamma_hi);
    } else {
        mcs_cfg.bounds << cfg.c_lo, cfg.c_hi, cfg.gamma_lo, cfg.gamma_hi;
    }
    auto decode = [&](const Vector& x) {
        return cfg.log_space ? std::pair{std::pow(10.0, x[0]), std::pow(10.0, x[1])}
                             : std::pair{x[0], x[1]};
    };
    Objective obj;
    obj.dimension = 2;
    obj.evaluate = [&](const Vector& x) {
        const auto [C, gamma] = decode(x);
        return tuning(C, gamma);
    };
    const McsResult tuned = optimize(obj, mcs_cfg);
    std::tie(result.tuned_C, result.tuned_gamma) = decode(tuned.best_position);
    result.tuned_fitness = tuned.best_fitness;
    result.trace = tuned.trace;
    result.tuning_evaluations = tuned.evaluations_used;

    // final model on the full training fold at the tuned point
    KernelSpec spec{result.tuned_gamma, result.weights.alpha, cfg.kernel_variant};
    SvmParams svm_params = cfg.svm;
    svm_params.C = result.tuned_C;
    const Matrix gram = gram_matrix(train_feat.X, spec);
    const DualSolution sol = solve_dual(gram, train_feat.y, svm_params);
    result.model = make_model(train_feat.X, train_feat.y, sol, spec);
    result.train_accuracy = training_accuracy(gram, train_feat.y, sol);

    // test evaluation is the only stage that reads test rows
    std::vector<int> predictions, truth;
    predictions.reserve(static_cast<std::size_t>(test_feat.n()));
    truth.reserve(static_cast<std::size_t>(test_feat.n()));
    for (Eigen::Index i = 0; i < test_feat.n(); ++i) {
        predictions.push_back(predict(result.model, test_feat.X.row(i).transpose()));
        truth.push_back(static_cast<int>(test_feat.y[i]));
    }
    result.cm = confusion(predictions, truth);
    result.metrics = compute_metrics(result.cm);
    return result;
}

namespace {

MetricAggregate aggregate_metric(const std::vector<FoldResult>& folds,
                                 std::optional<double> Metrics::*field) {
    std::vector<double> values;
    for (const auto& f : folds)
        if ((f.metrics.*field).has_value())
            values.push_back(*(f.metrics.*field));
    MetricAggregate agg;
    if (values.empty())
        return agg;
    const double mean =
        std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values)
        var += (v - mean) * (v - mean);
    agg.mean = mean;
    agg.stddev = std::sqrt(var / static_cast<double>(values.size()));
    return agg;
}

PipelineReport finalize_report(std::vector<FoldResult> folds, const PipelineConfig& cfg) {
    PipelineReport report;
    report.folds = std::move(folds);
    report.config = cfg;
    for (const auto& f : report.folds)
        report.pooled += f.cm;
    report.accuracy = aggregate_metric(report.folds, &Metrics::accuracy);
    report.sensitivity = aggregate_metric(report.folds, &Metrics::sensitivity);
    report.specificity = aggregate_metric(report.folds, &Metrics::specificity);
    return report;
}

} // namespace

PipelineReport cross_validate(const SampleMatrix& data, const PipelineConfig& cfg) {
    cfg.check();
    const FoldPlan plan = stratified_kfold(data.y, cfg.folds, derive_seed(cfg.seed, "cv_folds"));

    std::vector<FoldResult> folds(static_cast<std::size_t>(cfg.folds));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.folds));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int f = next.fetch_add(1); f < cfg.folds; f = next.fetch_add(1)) {
            try {
                const SampleMatrix train = fold_subset(data, plan, f, false);
                const SampleMatrix test = fold_subset(data, plan, f, true);
                folds[static_cast<std::size_t>(f)] =
                    run_fold(train, test, cfg, derive_seed(cfg.seed, "fold", static_cast<std::uint64_t>(f)));
            } catch (...) {
                errors[static_cast<std::size_t>(f)] = std::current_exception();
            }
        }
    };
    const int n_threads = std::min(cfg.threads, cfg.folds);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    for (int f = 0; f < cfg.folds; ++f) {
        if (errors[static_cast<std::size_t>(f)]) {
            try {
                std::rethrow_exception(errors[static_cast<std::size_t>(f)]);
            } catch (const std::exception& e) {
                throw std::runtime_error("fold " + std::to_string(f) + " failed: " + e.what());
            }
        }
    }
    return finalize_report(std::move(folds), cfg);
}

PipelineReport single_split(const SampleMatrix& data, const PipelineConfig& cfg) {
    cfg.check();
    const FoldPlan plan = stratified_kfold(data.y, 10, derive_seed(cfg.seed, "single_split"));
    const SampleMatrix train = fold_subset(data, plan, 0, false);
    const SampleMatrix test = fold_subset(data, plan, 0, true);
    std::vector<FoldResult> folds;
    folds.push_back(run_fold(train, test, cfg, derive_seed(cfg.seed, "fold", 0)));
    return finalize_report(std::move(folds), cfg);
}

} // namespace fwsvm
