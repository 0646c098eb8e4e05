#pragma once

#include "fwsvm/types.hpp"

#include <string>

namespace fwsvm {

enum class KernelVariant {
    Sqrt,   // exp(-gamma * sqrt(sum_k alpha_k (x_ik - x_jk)^2))
    Squared // exp(-gamma * sum_k alpha_k (x_ik - x_jk)^2)
};

std::string to_string(KernelVariant v);
KernelVariant kernel_variant_from_string(const std::string& s);

struct KernelSpec {
    double gamma = 1.0;
    Vector alpha; // feature weights, sum to 1, nonnegative
    KernelVariant variant = KernelVariant::Sqrt;
};

double kernel_eval(const Vector& xi, const Vector& xj, const KernelSpec& spec);

/// Weighted distance matrix: the variant-specific exponent argument without
/// the -gamma factor. gram = exp(-gamma * dist) elementwise; cached by the
/// tuning loop so candidate gammas reuse one O(n^2 d) pass.
Matrix weighted_distance_matrix(const Matrix& X, const Vector& alpha, KernelVariant variant);

Matrix gram_matrix(const Matrix& X, const KernelSpec& spec);

struct SvmParams {
    double C = 1.0;
    double kkt_tolerance = 1e-3;
    long max_iterations = 100000; // working-set iteration cap
};

/// Solution of the dual QP over a precomputed Gram matrix.
struct DualSolution {
    Vector multipliers; // full length-n vector, box [0, C]
    double bias = 0.0;
    bool converged = true;
    double objective = 0.0; // dual objective sum(a) - 0.5 a'Qa
    long iterations = 0;
};

/// Two-variable working-set solver (maximal-KKT-violating pair selection).
DualSolution solve_dual(const Matrix& gram, const Vector& y, const SvmParams& params);

struct SvmModel {
    Matrix support_vectors;
    Vector multipliers; // L_i > 0 per support vector
    Vector sv_labels;
    double bias = 0.0;
    KernelSpec kernel;
    bool converged = true;
};

SvmModel train(const Matrix& X, const Vector& y, const SvmParams& params, const KernelSpec& spec);

/// Builds the sparse support-vector model from a dual solution.
SvmModel make_model(const Matrix& X, const Vector& y, const DualSolution& sol,
                    const KernelSpec& spec);

/// Pre-sign decision value sum_i L_i y_i K'(x_i, x) + b.
double decision_value(const SvmModel& model, const Vector& x);

/// sign(decision_value); the tie decision_value == 0 returns +1.
int predict(const SvmModel& model, const Vector& x);

} // namespace fwsvm
