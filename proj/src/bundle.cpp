#include "fwsvm/bundle.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace fwsvm {

using nlohmann::json;

namespace {

json vec_to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v[i]);
    return a;
}

Vector vec_from_json(const json& a) {
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v[i] = a[static_cast<std::size_t>(i)].get<double>();
    return v;
}

json mat_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        rows.push_back(vec_to_json(m.row(i).transpose()));
    return rows;
}

Matrix mat_from_json(const json& rows) {
    if (rows.empty())
        return Matrix(0, 0);
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows[0].size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        m.row(i) = vec_from_json(rows[static_cast<std::size_t>(i)]).transpose();
    return m;
}

json metrics_to_json(const Metrics& m) {
    auto field = [](const std::optional<double>& v) {
        return v.has_value() ? json(*v) : json("undefined");
    };
    return {{"accuracy", field(m.accuracy)},
            {"sensitivity", field(m.sensitivity)},
            {"specificity", field(m.specificity)}};
}

json cm_to_json(const ConfusionMatrix& cm) {
    return {{"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}, {"tp", cm.tp}};
}

} // namespace

ModelBundle bundle_from_fold(const FoldResult& fold, const PipelineConfig& cfg) {
    ModelBundle b;
    b.standardization = fold.standardization;
    b.pca = fold.pca;
    b.weights = fold.weights;
    b.model = fold.model;
    b.weight_raw_features = cfg.weight_raw_features;
    b.tuned_C = fold.tuned_C;
    b.tuned_gamma = fold.tuned_gamma;
    b.train_accuracy = fold.train_accuracy;
    return b;
}

json bundle_to_json(const ModelBundle& b) {
    json j;
    j["schema"] = kBundleSchema;
    j["standardization"] = {{"means", vec_to_json(b.standardization.means)},
                            {"stds", vec_to_json(b.standardization.stds)}};
    j["pca"] = {{"mean", vec_to_json(b.pca.mean)},
                {"eigenvalues", vec_to_json(b.pca.eigenvalues)},
                {"components", mat_to_json(b.pca.components)},
                {"total_variance", b.pca.total_variance},
                {"explained_variance_ratio", b.pca.explained_variance_ratio()}};
    j["weights"] = {{"mi_bits", vec_to_json(b.weights.mi_values)},
                    {"alpha", vec_to_json(b.weights.alpha)}};
    j["kernel"] = {{"gamma", b.model.kernel.gamma},
                   {"variant", to_string(b.model.kernel.variant)},
                   {"alpha", vec_to_json(b.model.kernel.alpha)}};
    j["svm"] = {{"support_vectors", mat_to_json(b.model.support_vectors)},
                {"multipliers", vec_to_json(b.model.multipliers)},
                {"labels", vec_to_json(b.model.sv_labels)},
                {"bias", b.model.bias},
                {"converged", b.model.converged}};
    j["tuning"] = {{"C", b.tuned_C},
                   {"gamma", b.tuned_gamma},
                   {"train_accuracy", b.train_accuracy}};
    j["weight_raw_features"] = b.weight_raw_features;
    return j;
}

ModelBundle bundle_from_json(const json& j) {
    if (!j.contains("schema") || j["schema"].get<std::string>() != kBundleSchema)
        throw std::runtime_error("model bundle: unsupported schema");
    ModelBundle b;
    b.standardization.means = vec_from_json(j["standardization"]["means"]);
    b.standardization.stds = vec_from_json(j["standardization"]["stds"]);
    b.pca.mean = vec_from_json(j["pca"]["mean"]);
    b.pca.eigenvalues = vec_from_json(j["pca"]["eigenvalues"]);
    b.pca.components = mat_from_json(j["pca"]["components"]);
    b.pca.total_variance = j["pca"]["total_variance"].get<double>();
    b.weights.mi_values = vec_from_json(j["weights"]["mi_bits"]);
    b.weights.alpha = vec_from_json(j["weights"]["alpha"]);
    b.model.kernel.gamma = j["kernel"]["gamma"].get<double>();
    b.model.kernel.variant = kernel_variant_from_string(j["kernel"]["variant"].get<std::string>());
    b.model.kernel.alpha = vec_from_json(j["kernel"]["alpha"]);
    b.model.support_vectors = mat_from_json(j["svm"]["support_vectors"]);
    b.model.multipliers = vec_from_json(j["svm"]["multipliers"]);
    b.model.sv_labels = vec_from_json(j["svm"]["labels"]);
    b.model.bias = j["svm"]["bias"].get<double>();
    b.model.converged = j["svm"]["converged"].get<bool>();
    b.weight_raw_features = j.value("weight_raw_features", false);
    b.tuned_C = j["tuning"]["C"].get<double>();
    b.tuned_gamma = j["tuning"]["gamma"].get<double>();
    b.train_accuracy = j["tuning"]["train_accuracy"].get<double>();
    return b;
}

void write_bundle(const ModelBundle& bundle, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write bundle: " + path);
    out << bundle_to_json(bundle).dump(2) << '\n';
}

ModelBundle read_bundle(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read bundle: " + path);
    json j;
    in >> j;
    return bundle_from_json(j);
}

double bundle_decision(const ModelBundle& b, const Vector& raw_features) {
    if (raw_features.size() != b.standardization.means.size())
        throw std::invalid_argument("bundle_decision: feature row has wrong arity");
    const Vector std_row = (raw_features - b.standardization.means)
                               .cwiseQuotient(b.standardization.stds);
    const Vector feat =
        b.weight_raw_features ? std_row : pca_transform(b.pca, std_row);
    return decision_value(b.model, feat);
}

json config_to_json(const PipelineConfig& cfg) {
    return {{"n_components", cfg.n_components},
            {"c_lo", cfg.c_lo},
            {"c_hi", cfg.c_hi},
            {"gamma_lo", cfg.gamma_lo},
            {"gamma_hi", cfg.gamma_hi},
            {"kernel_variant", to_string(cfg.kernel_variant)},
            {"folds", cfg.folds},
            {"seed", cfg.seed},
            {"log_space", cfg.log_space},
            {"inner_validation", cfg.inner_validation},
            {"weight_raw_features", cfg.weight_raw_features},
            {"mcs_n_nests", cfg.mcs.n_nests},
            {"mcs_frac_abandon", cfg.mcs.frac_abandon},
            {"mcs_frac_top", cfg.mcs.frac_top},
            {"mcs_max_levy_step", cfg.mcs.max_levy_step},
            {"mcs_max_evaluations", cfg.mcs.max_evaluations},
            {"mcs_levy_exponent", cfg.mcs.levy_exponent},
            {"parzen_bandwidth",
             cfg.parzen.bandwidth_rule == ParzenConfig::Bandwidth::Silverman
                 ? json("silverman")
                 : json(cfg.parzen.fixed_h)},
            {"parzen_leave_one_out", cfg.parzen.leave_one_out},
            {"svm_kkt_tolerance", cfg.svm.kkt_tolerance},
            {"svm_max_iterations", cfg.svm.max_iterations}};
}

json report_to_json(const PipelineReport& report) {
    json folds = json::array();
    for (const auto& f : report.folds) {
        folds.push_back({{"confusion", cm_to_json(f.cm)},
                         {"metrics", metrics_to_json(f.metrics)},
                         {"tuned_C", f.tuned_C},
                         {"tuned_gamma", f.tuned_gamma},
                         {"tuned_fitness", f.tuned_fitness},
                         {"train_accuracy", f.train_accuracy},
                         {"alpha", vec_to_json(f.weights.alpha)},
                         {"mi_bits", vec_to_json(f.weights.mi_values)},
                         {"explained_variance_ratio", f.pca.explained_variance_ratio()},
                         {"tuning_evaluations", f.tuning_evaluations}});
    }
    auto agg = [](const MetricAggregate& a) {
        json j;
        j["mean"] = a.mean.has_value() ? json(*a.mean) : json("undefined");
        j["stddev"] = a.stddev.has_value() ? json(*a.stddev) : json("undefined");
        return j;
    };
    return {{"schema", kReportSchema},
            {"config", config_to_json(report.config)},
            {"folds", folds},
            {"pooled_confusion", cm_to_json(report.pooled)},
            {"pooled_metrics", metrics_to_json(compute_metrics(report.pooled))},
            {"accuracy", agg(report.accuracy)},
            {"sensitivity", agg(report.sensitivity)},
            {"specificity", agg(report.specificity)}};
}

std::string render_confusion(const ConfusionMatrix& cm) {
    std::ostringstream os;
    os << "Output/desired      Non-diabetics  Diabetics\n";
    os << "Non-diabetics       " << std::setw(13) << cm.tn << "  " << std::setw(9) << cm.fn << "\n";
    os << "Diabetics           " << std::setw(13) << cm.fp << "  " << std::setw(9) << cm.tp << "\n";
    return os.str();
}

namespace {
std::string pct(const std::optional<double>& v) {
    if (!v.has_value())
        return "undefined";
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << (*v * 100.0);
    return os.str();
}
} // namespace

std::string render_metrics(const Metrics& m) {
    std::ostringstream os;
    os << "Sensitivity (%)  Specificity (%)  Accuracy (%)\n";
    os << std::setw(15) << pct(m.sensitivity) << "  " << std::setw(15) << pct(m.specificity)
       << "  " << std::setw(12) << pct(m.accuracy) << "\n";
    return os.str();
}

std::string render_report(const PipelineReport& report) {
    std::ostringstream os;
    for (std::size_t f = 0; f < report.folds.size(); ++f) {
        const auto& fold = report.folds[f];
        os << "--- fold " << f << " (C=" << fold.tuned_C << ", gamma=" << fold.tuned_gamma
           << ", alpha=[";
        for (Eigen::Index k = 0; k < fold.weights.alpha.size(); ++k)
            os << (k ? ", " : "") << std::fixed << std::setprecision(4) << fold.weights.alpha[k];
        os.unsetf(std::ios::fixed);
        os << "]) ---\n";
        os << render_confusion(fold.cm);
        os << render_metrics(fold.metrics);
    }
    os << "=== pooled over " << report.folds.size() << " fold(s) ===\n";
    os << render_confusion(report.pooled);
    os << render_metrics(compute_metrics(report.pooled));
    auto line = [&](const char* name, const MetricAggregate& a) {
        os << name << ": ";
        if (a.mean.has_value())
            os << std::fixed << std::setprecision(2) << *a.mean * 100.0 << " +/- "
               << *a.stddev * 100.0 << " %\n";
        else
            os << "undefined\n";
        os.unsetf(std::ios::fixed);
    };
    line("mean accuracy   ", report.accuracy);
    line("mean sensitivity", report.sensitivity);
    line("mean specificity", report.specificity);
    return os.str();
}

std::string render_stats_table(const std::vector<FeatureStats>& stats) {
    std::ostringstream os;
    os << "Features  Mean   Standard deviation  Min/max\n";
    for (std::size_t j = 0; j < stats.size(); ++j) {
        const auto& s = stats[j];
        os << std::left << std::setw(8) << (j + 1) << "  " << std::right;
        os << std::fixed << std::setprecision(1) << std::setw(5) << s.mean << "  " << std::setw(18)
           << s.stddev << "  ";
        os.unsetf(std::ios::fixed);
        os << s.min << "/" << s.max << "\n";
    }
    return os.str();
}

json stats_to_json(const std::vector<FeatureStats>& stats) {
    json a = json::array();
    for (std::size_t j = 0; j < stats.size(); ++j)
        a.push_back({{"feature", j + 1},
                     {"mean", stats[j].mean},
                     {"std", stats[j].stddev},
                     {"min", stats[j].min},
                     {"max", stats[j].max}});
    return a;
}

std::string render_weights(const FeatureWeights& w) {
    std::ostringstream os;
    os << "Feature  MI (bits)  alpha\n";
    for (Eigen::Index k = 0; k < w.alpha.size(); ++k)
        os << std::left << std::setw(7) << (k + 1) << "  " << std::right << std::fixed
           << std::setprecision(6) << std::setw(9) << w.mi_values[k] << "  " << std::setw(8)
           << w.alpha[k] << "\n";
    return os.str();
}

json weights_to_json(const FeatureWeights& w) {
    json a = json::array();
    for (Eigen::Index k = 0; k < w.alpha.size(); ++k)
        a.push_back({{"feature", k + 1}, {"mi_bits", w.mi_values[k]}, {"alpha", w.alpha[k]}});
    return a;
}

std::string trace_to_csv(const std::vector<McsTracePoint>& trace) {
    std::ostringstream os;
    os << "generation,evaluations,best_fitness,best_position\n";
    os << std::setprecision(17);
    for (const auto& t : trace) {
        os << t.generation << ',' << t.evaluations << ',' << t.best_fitness << ',';
        for (Eigen::Index k = 0; k < t.best_position.size(); ++k)
            os << (k ? ";" : "") << t.best_position[k];
        os << '\n';
    }
    return os.str();
}

} // namespace fwsvm
