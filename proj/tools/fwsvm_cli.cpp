#include "fwsvm/bundle.hpp"
#include "fwsvm/dataset.hpp"
#include "fwsvm/evaluation.hpp"
#include "fwsvm/rng.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fwsvm;

namespace {

// exit codes are part of the CLI contract
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kInputError = 2;
constexpr int kStageError = 3;
constexpr int kBundleError = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    auto as_double = [&] { return std::stod(value); };
    auto as_long = [&] { return std::stol(value); };
    auto as_bool = [&] {
        if (value == "true" || value == "1") return true;
        if (value == "false" || value == "0") return false;
        throw ConfigError("config key '" + key + "': expected boolean, got '" + value + "'");
    };
    try {
        if (key == "n_components") cfg.n_components = static_cast<int>(as_long());
        else if (key == "c_lo") cfg.c_lo = as_double();
        else if (key == "c_hi") cfg.c_hi = as_double();
        else if (key == "gamma_lo") cfg.gamma_lo = as_double();
        else if (key == "gamma_hi") cfg.gamma_hi = as_double();
        else if (key == "kernel_variant") cfg.kernel_variant = kernel_variant_from_string(value);
        else if (key == "folds") cfg.folds = static_cast<int>(as_long());
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
        else if (key == "log_space") cfg.log_space = as_bool();
        else if (key == "inner_validation") cfg.inner_validation = as_bool();
        else if (key == "weight_raw_features") cfg.weight_raw_features = as_bool();
        else if (key == "threads") cfg.threads = static_cast<int>(as_long());
        else if (key == "mcs_n_nests") cfg.mcs.n_nests = static_cast<int>(as_long());
        else if (key == "mcs_frac_abandon") cfg.mcs.frac_abandon = as_double();
        else if (key == "mcs_frac_top") cfg.mcs.frac_top = as_double();
        else if (key == "mcs_max_levy_step") cfg.mcs.max_levy_step = as_double();
        else if (key == "mcs_max_evaluations") cfg.mcs.max_evaluations = as_long();
        else if (key == "mcs_levy_exponent") cfg.mcs.levy_exponent = as_double();
        else if (key == "parzen_bandwidth") {
            if (value == "silverman") {
                cfg.parzen.bandwidth_rule = ParzenConfig::Bandwidth::Silverman;
            } else {
                cfg.parzen.bandwidth_rule = ParzenConfig::Bandwidth::Fixed;
                cfg.parzen.fixed_h = as_double();
            }
        }
        else if (key == "parzen_leave_one_out") cfg.parzen.leave_one_out = as_bool();
        else if (key == "svm_kkt_tolerance") cfg.svm.kkt_tolerance = as_double();
        else if (key == "svm_max_iterations") cfg.svm.max_iterations = as_long();
        else throw ConfigError("unknown config key: " + key);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse value '" + value + "'");
    }
}

void load_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

std::string config_to_flat_text(const PipelineConfig& cfg) {
    std::ostringstream os;
    os << std::setprecision(17);
    const json j = config_to_json(cfg);
    for (const auto& [key, value] : j.items()) {
        os << key << " = ";
        if (value.is_string())
            os << value.get<std::string>();
        else
            os << value.dump();
        os << '\n';
    }
    os << "threads = " << cfg.threads << '\n';
    return os.str();
}

SampleMatrix load_samples(const std::string& path) {
    const auto records = parse_csv_file(path);
    if (records.empty())
        throw ParseError("input file contains no data rows: " + path);
    return to_matrix(records);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write: " + path.string());
    out << text;
}

int cmd_stats(const std::string& input, const std::string& out_dir) {
    SampleMatrix m;
    try {
        m = load_samples(input);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    }
    const auto stats = summary_stats(m);
    std::cout << render_stats_table(stats);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "stats.json", stats_to_json(stats).dump(2) + "\n");
    }
    return kOk;
}

int cmd_pca(const std::string& input, const PipelineConfig& cfg, const std::string& out_dir) {
    SampleMatrix m;
    try {
        m = load_samples(input);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    }
    try {
        const auto params = standardize_fit(m);
        const auto standardized = standardize_apply(params, m);
        const auto model = pca_fit(standardized, cfg.n_components);
        std::cout << "components: " << model.eigenvalues.size() << '\n';
        std::cout << "eigenvalues:";
        for (Eigen::Index k = 0; k < model.eigenvalues.size(); ++k)
            std::cout << ' ' << model.eigenvalues[k];
        std::cout << '\n';
        std::cout << "explained variance ratio: " << model.explained_variance_ratio() << '\n';
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            json j = {{"eigenvalues", json::array()},
                      {"explained_variance_ratio", model.explained_variance_ratio()},
                      {"total_variance", model.total_variance}};
            for (Eigen::Index k = 0; k < model.eigenvalues.size(); ++k)
                j["eigenvalues"].push_back(model.eigenvalues[k]);
            write_text(fs::path(out_dir) / "pca.json", j.dump(2) + "\n");
        }
        return kOk;
    } catch (const std::exception& e) {
        std::cerr << "stage failure (pca): " << e.what() << '\n';
        return kStageError;
    }
}

int cmd_weights(const std::string& input, const PipelineConfig& cfg, const std::string& out_dir) {
    SampleMatrix m;
    try {
        m = load_samples(input);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    }
    try {
        const auto params = standardize_fit(m);
        SampleMatrix feat = standardize_apply(params, m);
        if (!cfg.weight_raw_features) {
            const auto model = pca_fit(feat, cfg.n_components);
            feat = {pca_transform_rows(model, feat.X), feat.y};
        }
        const auto w = compute_weights(feat, cfg.parzen);
        std::cout << render_weights(w);
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            write_text(fs::path(out_dir) / "weights.json", weights_to_json(w).dump(2) + "\n");
        }
        return kOk;
    } catch (const std::exception& e) {
        std::cerr << "stage failure (weights): " << e.what() << '\n';
        return kStageError;
    }
}

int cmd_tune(const std::string& input, const PipelineConfig& cfg, const std::string& out_dir) {
    SampleMatrix m;
    try {
        m = load_samples(input);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    }
    try {
        const auto report = single_split(m, cfg);
        const auto& fold = report.folds.front();
        std::cout << "tuned C:     " << fold.tuned_C << '\n';
        std::cout << "tuned gamma: " << fold.tuned_gamma << '\n';
        std::cout << "tuning fitness: " << fold.tuned_fitness << '\n';
        std::cout << render_weights(fold.weights);
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            write_text(fs::path(out_dir) / "mcs_trace.csv", trace_to_csv(fold.trace));
            json j = {{"C", fold.tuned_C},
                      {"gamma", fold.tuned_gamma},
                      {"fitness", fold.tuned_fitness},
                      {"alpha", weights_to_json(fold.weights)},
                      {"config", config_to_json(cfg)}};
            write_text(fs::path(out_dir) / "tune.json", j.dump(2) + "\n");
        }
        return kOk;
    } catch (const std::exception& e) {
        std::cerr << "stage failure (tune): " << e.what() << '\n';
        return kStageError;
    }
}

int cmd_train(const std::string& input, const PipelineConfig& cfg, const std::string& out_dir) {
    SampleMatrix m;
    try {
        m = load_samples(input);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    }
    try {
        const auto fold = run_fold(m, m, cfg, derive_seed(cfg.seed, "train"));
        const auto bundle = bundle_from_fold(fold, cfg);
        fs::create_directories(out_dir.empty() ? "." : out_dir);
        const fs::path path = fs::path(out_dir.empty() ? "." : out_dir) / "model.json";
        write_bundle(bundle, path.string());
        std::cout << "tuned C: " << fold.tuned_C << ", gamma: " << fold.tuned_gamma << '\n';
        std::cout << "training accuracy: " << fold.train_accuracy << '\n';
        std::cout << "bundle written to " << path.string() << '\n';
        return kOk;
    } catch (const std::exception& e) {
        std::cerr << "stage failure (train): " << e.what() << '\n';
        return kStageError;
    }
}

int cmd_predict(const std::string& bundle_path, const std::string& input) {
    ModelBundle bundle;
    try {
        bundle = read_bundle(bundle_path);
    } catch (const std::exception& e) {
        std::cerr << "bundle error: " << e.what() << '\n';
        return kBundleError;
    }
    std::ifstream in(input);
    if (!in) {
        std::cerr << "input error: cannot open " << input << '\n';
        return kInputError;
    }
    std::string line;
    int line_no = 0;
    const Eigen::Index d = bundle.standardization.means.size();
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::vector<double> fields;
        std::stringstream ss(line);
        std::string field;
        bool bad = false;
        while (std::getline(ss, field, ',')) {
            try {
                fields.push_back(std::stod(field));
            } catch (const std::exception&) {
                bad = true;
                break;
            }
        }
        // a trailing label column is accepted and ignored
        if (bad || (static_cast<Eigen::Index>(fields.size()) != d &&
                    static_cast<Eigen::Index>(fields.size()) != d + 1)) {
            std::cerr << "input error: line " << line_no << " has wrong arity\n";
            return kInputError;
        }
        Vector row(d);
        for (Eigen::Index j = 0; j < d; ++j)
            row[j] = fields[static_cast<std::size_t>(j)];
        const double value = bundle_decision(bundle, row);
        std::cout << (value >= 0.0 ? "+1" : "-1") << ',' << std::setprecision(17) << value << '\n';
    }
    return kOk;
}

int cmd_cv(const std::string& input, const PipelineConfig& cfg, const std::string& out_dir,
           bool use_single_split) {
    SampleMatrix m;
    try {
        m = load_samples(input);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    }
    try {
        const PipelineReport report =
            use_single_split ? single_split(m, cfg) : cross_validate(m, cfg);
        std::cout << render_report(report);
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            write_text(fs::path(out_dir) / "report.json", report_to_json(report).dump(2) + "\n");
            for (std::size_t f = 0; f < report.folds.size(); ++f) {
                const auto bundle = bundle_from_fold(report.folds[f], cfg);
                write_bundle(bundle, (fs::path(out_dir) /
                                      ("model_fold" + std::to_string(f) + ".json")).string());
                write_text(fs::path(out_dir) / ("mcs_trace_fold" + std::to_string(f) + ".csv"),
                           trace_to_csv(report.folds[f].trace));
            }
        }
        return kOk;
    } catch (const std::exception& e) {
        std::cerr << "stage failure (cv): " << e.what() << '\n';
        return kStageError;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feature-weighted SVM diabetes-classification pipeline with "
                 "mutual-information feature weights and modified-cuckoo-search tuning"};
    app.require_subcommand(1);

    std::string input, config_path, out_dir, bundle_path, kernel_variant;
    std::uint64_t seed = 0;
    int folds = -1, components = -1, threads = -1;
    long budget = -1;
    bool use_single_split = false;

    app.add_option("--input", input, "input CSV path")->group("common");
    app.add_option("--config", config_path, "flat key=value config file");
    app.add_option("--out", out_dir, "output directory for machine-readable artifacts");
    app.add_option("--seed", seed, "top-level RNG seed");
    app.add_option("--folds", folds, "cross-validation fold count");
    app.add_option("--components", components, "PCA component count");
    app.add_option("--kernel-variant", kernel_variant, "sqrt | squared");
    app.add_option("--threads", threads, "fold-level worker cap");
    app.add_option("--budget", budget, "MCS objective-evaluation budget");

    auto* stats = app.add_subcommand("stats", "per-feature summary statistics");
    auto* pca_cmd = app.add_subcommand("pca", "fit PCA on the standardized input");
    auto* weights = app.add_subcommand("weights", "mutual-information feature weights");
    auto* tune = app.add_subcommand("tune", "tune (C, gamma) on a training split");
    auto* train = app.add_subcommand("train", "train on the full input, write a model bundle");
    auto* predict_cmd = app.add_subcommand("predict", "score rows with a model bundle");
    auto* cv = app.add_subcommand("cv", "stratified k-fold cross-validation");
    auto* print_config = app.add_subcommand("print-config", "print the effective configuration");
    predict_cmd->add_option("--bundle", bundle_path, "model bundle path")->required();
    cv->add_flag("--single-split", use_single_split,
                 "single stratified 90/10 holdout instead of k folds");

    // global flags are accepted after the subcommand as well
    for (auto* sub : {stats, pca_cmd, weights, tune, train, predict_cmd, cv, print_config})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    PipelineConfig cfg;
    try {
        if (!config_path.empty())
            load_config_file(cfg, config_path);
        if (folds >= 0) cfg.folds = folds;
        if (components >= 0) cfg.n_components = components;
        if (threads >= 0) cfg.threads = threads;
        if (budget >= 0) cfg.mcs.max_evaluations = budget;
        if (!kernel_variant.empty())
            cfg.kernel_variant = kernel_variant_from_string(kernel_variant);
        if (app.count("--seed") > 0) cfg.seed = seed;
        if (!print_config->parsed() && !stats->parsed() && !predict_cmd->parsed())
            cfg.check();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    auto need_input = [&]() -> bool {
        if (input.empty()) {
            std::cerr << "config error: --input is required for this command\n";
            return false;
        }
        return true;
    };

    if (print_config->parsed()) {
        std::cout << config_to_flat_text(cfg);
        return kOk;
    }
    if (stats->parsed())
        return need_input() ? cmd_stats(input, out_dir) : kConfigError;
    if (pca_cmd->parsed())
        return need_input() ? cmd_pca(input, cfg, out_dir) : kConfigError;
    if (weights->parsed())
        return need_input() ? cmd_weights(input, cfg, out_dir) : kConfigError;
    if (tune->parsed())
        return need_input() ? cmd_tune(input, cfg, out_dir) : kConfigError;
    if (train->parsed())
        return need_input() ? cmd_train(input, cfg, out_dir) : kConfigError;
    if (predict_cmd->parsed())
        return need_input() ? cmd_predict(bundle_path, input) : kConfigError;
    if (cv->parsed())
        return need_input() ? cmd_cv(input, cfg, out_dir, use_single_split) : kConfigError;
    return kConfigError;
}
