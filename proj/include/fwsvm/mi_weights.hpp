#pragma once

#include "fwsvm/types.hpp"

#include <map>

namespace fwsvm {

struct ClassPrior {
    std::map<int, double> probabilities; // P(y) = |y| / l, exact
    std::map<int, long> counts;
    long total = 0;
};

struct ParzenConfig {
    enum class Bandwidth { Silverman, Fixed };
    Bandwidth bandwidth_rule = Bandwidth::Silverman;
    double fixed_h = 1.0;
    bool leave_one_out = false; // default is resubstitution
};

ClassPrior class_prior(const Vector& y);

/// H(Y) = -sum P(y) log2 P(y), zero-probability terms contribute 0.
double entropy_bits(const ClassPrior& prior);

/// Silverman's rule h = 1.06 * sigma * l^(-1/5); falls back to 1 when the
/// column is constant (the posterior is then the prior for any h).
double resolve_bandwidth(const Vector& f, const ParzenConfig& cfg);

/// Gaussian-window class posterior at a single query value:
/// p(y|x) = sum_{i: y_i = y} k_h(x - f_i) / sum_i k_h(x - f_i).
std::map<int, double> parzen_posterior(const Vector& f, const Vector& y, double x,
                                       const ParzenConfig& cfg);

/// H(Y|f) = -(1/l) sum_i sum_y p(y|x_i) log2 p(y|x_i).
double conditional_entropy_bits(const Vector& f, const Vector& y, const ParzenConfig& cfg);

/// I(Y, f) = H(Y) - H(Y|f), clamped at 0 from below.
double mutual_info_bits(const Vector& f, const Vector& y, const ParzenConfig& cfg);

struct FeatureWeights {
    Vector alpha;     // sums to 1, nonnegative
    Vector mi_values; // I(Y, f_k) in bits
};

/// alpha_k = I(Y, f_k) / sum_i I(Y, f_i). Throws when all MI values are zero.
FeatureWeights compute_weights(const SampleMatrix& m, const ParzenConfig& cfg);

} // namespace fwsvm
