#include "fwsvm/mi_weights.hpp"

#include <cmath>
#include <stdexcept>

namespace fwsvm {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310002;

double gaussian_window(double u, double h) {
    return std::exp(-u * u / (2.0 * h * h)) / (h * kSqrt2Pi);
}
} // namespace

ClassPrior class_prior(const Vector& y) {
    if (y.size() == 0)
        throw std::invalid_argument("class_prior: empty label vector");
    ClassPrior prior;
    prior.total = static_cast<long>(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i)
        ++prior.counts[static_cast<int>(y[i])];
    for (const auto& [label, count] : prior.counts)
        prior.probabilities[label] = static_cast<double>(count) / static_cast<double>(prior.total);
    return prior;
}

double entropy_bits(const ClassPrior& prior) {
    double h = 0.0;
    for (const auto& [label, p] : prior.probabilities)
        if (p > 0.0)
            h -= p * std::log2(p);
    return h;
}

double resolve_bandwidth(const Vector& f, const ParzenConfig& cfg) {
    if (cfg.bandwidth_rule == ParzenConfig::Bandwidth::Fixed) {
        if (cfg.fixed_h <= 0.0)
            throw std::invalid_argument("ParzenConfig: fixed bandwidth must be > 0");
        return cfg.fixed_h;
    }
    const double l = static_cast<double>(f.size());
    const double mean = f.mean();
    const double sigma = std::sqrt((f.array() - mean).square().sum() / std::max(1.0, l - 1.0));
    if (sigma <= 0.0)
        return 1.0;
    return 1.06 * sigma * std::pow(l, -0.2);
}

std::map<int, double> parzen_posterior(const Vector& f, const Vector& y, double x,
                                       const ParzenConfig& cfg) {
    if (f.size() != y.size() || f.size() < 2)
        throw std::invalid_argument("parzen_posterior: need matching columns with l >= 2");
    const double h = resolve_bandwidth(f, cfg);
    std::map<int, double> numer;
    double denom = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        const double w = gaussian_window(x - f[i], h);
        numer[static_cast<int>(y[i])] += w;
        denom += w;
    }
    if (denom <= 0.0)
        throw std::runtime_error("parzen_posterior: zero window mass at query point");
    for (auto& [label, v] : numer)
        v /= denom;
    return numer;
}

double conditional_entropy_bits(const Vector& f, const Vector& y, const ParzenConfig& cfg) {
    if (f.size() != y.size() || f.size() < 2)
        throw std::invalid_argument("conditional_entropy: need matching columns with l >= 2");
    const Eigen::Index l = f.size();
    const double h = resolve_bandwidth(f, cfg);

    double total = 0.0;
    for (Eigen::Index i = 0; i < l; ++i) {
        std::map<int, double> numer;
        double denom = 0.0;
        for (Eigen::Index j = 0; j < l; ++j) {
            if (cfg.leave_one_out && j == i)
                continue;
            const double w = gaussian_window(f[i] - f[j], h);
            numer[static_cast<int>(y[j])] += w;
            denom += w;
        }
        if (denom <= 0.0)
            throw std::runtime_error("conditional_entropy: zero window mass at sample " +
                                     std::to_string(i));
        for (const auto& [label, num] : numer) {
            const double p = num / denom;
            if (p > 0.0)
                total -= p * std::log2(p);
        }
    }
    return total / static_cast<double>(l);
}

double mutual_info_bits(const Vector& f, const Vector& y, const ParzenConfig& cfg) {
    const double mi = entropy_bits(class_prior(y)) - conditional_entropy_bits(f, y, cfg);
    return std::max(0.0, mi);
}

FeatureWeights compute_weights(const SampleMatrix& m, const ParzenConfig& cfg) {
    if (m.d() < 1)
        throw std::invalid_argument("compute_weights: d >= 1 required");
    FeatureWeights w;
    w.mi_values.resize(m.d());
    for (Eigen::Index k = 0; k < m.d(); ++k)
        w.mi_values[k] = mutual_info_bits(m.X.col(k), m.y, cfg);
    const double total = w.mi_values.sum();
    // rounding in the entropy difference can leave ~1e-16 on constant columns
    if (total <= 1e-12)
        throw std::runtime_error("compute_weights: all features have zero mutual information");
    w.alpha = w.mi_values / total;
    return w;
}

} // namespace fwsvm
