#include "fwsvm/svm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fwsvm {

std::string to_string(KernelVariant v) {
    return v == KernelVariant::Sqrt ? "sqrt" : "squared";
}

KernelVariant kernel_variant_from_string(const std::string& s) {
    if (s == "sqrt") return KernelVariant::Sqrt;
    if (s == "squared") return KernelVariant::Squared;
    throw std::invalid_argument("unknown kernel variant: " + s);
}

double kernel_eval(const Vector& xi, const Vector& xj, const KernelSpec& spec) {
    if (xi.size() != xj.size() || xi.size() != spec.alpha.size())
        throw std::invalid_argument("kernel_eval: dimension mismatch");
    const double wsq = (spec.alpha.array() * (xi - xj).array().square()).sum();
    const double dist = spec.variant == KernelVariant::Sqrt ? std::sqrt(wsq) : wsq;
    return std::exp(-spec.gamma * dist);
}

Matrix weighted_distance_matrix(const Matrix& X, const Vector& alpha, KernelVariant variant) {
    if (X.cols() != alpha.size())
        throw std::invalid_argument("weighted_distance_matrix: dimension mismatch");
    const Eigen::Index n = X.rows();
    Matrix D(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        D(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double wsq = (alpha.array() * (X.row(i) - X.row(j)).array().square().transpose()).sum();
            if (variant == KernelVariant::Sqrt)
                wsq = std::sqrt(wsq);
            D(i, j) = wsq;
            D(j, i) = wsq;
        }
    }
    return D;
}

Matrix gram_matrix(const Matrix& X, const KernelSpec& spec) {
    return (-spec.gamma * weighted_distance_matrix(X, spec.alpha, spec.variant).array()).exp();
}

DualSolution solve_dual(const Matrix& gram, const Vector& y, const SvmParams& params) {
    const Eigen::Index n = gram.rows();
    if (gram.cols() != n || y.size() != n)
        throw std::invalid_argument("solve_dual: gram/label size mismatch");
    if (params.C <= 0.0 || params.kkt_tolerance <= 0.0)
        throw std::invalid_argument("solve_dual: C and tolerance must be > 0");
    bool has_pos = false, has_neg = false;
    for (Eigen::Index i = 0; i < n; ++i)
        (y[i] > 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw std::invalid_argument("solve_dual: both classes must be present");

    const double C = params.C;
    const double tol = params.kkt_tolerance;
    constexpr double kTau = 1e-12;

    Vector a = Vector::Zero(n);
    Vector grad = Vector::Constant(n, -1.0); // grad of 0.5 a'Qa - e'a at a = 0

    DualSolution sol;
    sol.converged = false;
    long it = 0;
    double m_up = 0.0, m_low = 0.0;
    for (; it < params.max_iterations; ++it) {
        // maximal-violating pair: i maximizes -y*grad over the up set,
        // j minimizes it over the low set
        Eigen::Index i = -1, j = -1;
        m_up = -std::numeric_limits<double>::infinity();
        m_low = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            const bool in_up = (y[t] > 0 && a[t] < C) || (y[t] < 0 && a[t] > 0);
            const bool in_low = (y[t] > 0 && a[t] > 0) || (y[t] < 0 && a[t] < C);
            if (in_up && v > m_up) { m_up = v; i = t; }
            if (in_low && v < m_low) { m_low = v; j = t; }
        }
        if (i < 0 || j < 0 || m_up - m_low <= tol) {
            sol.converged = true;
            break;
        }

        const double s = y[i] * y[j];
        double lo, hi;
        if (s < 0) {
            lo = std::max(0.0, a[j] - a[i]);
            hi = std::min(C, C + a[j] - a[i]);
        } else {
            lo = std::max(0.0, a[i] + a[j] - C);
            hi = std::min(C, a[i] + a[j]);
        }
        double eta = gram(i, i) + gram(j, j) - 2.0 * gram(i, j);
        if (eta <= 0.0)
            eta = kTau;
        // E_t = y_t * grad_t is the prediction error without bias
        double aj_new = a[j] + y[j] * (y[i] * grad[i] - y[j] * grad[j]) / eta;
        aj_new = std::min(hi, std::max(lo, aj_new));
        // snap to exact bounds so the up/low sets never contain a multiplier
        // that is movable only by a rounding residue
        const double snap = kTau * std::max(1.0, C);
        if (aj_new < snap)
            aj_new = std::max(lo, 0.0);
        else if (aj_new > C - snap)
            aj_new = std::min(hi, C);
        const double daj = aj_new - a[j];
        if (std::abs(daj) < kTau)
            break; // numerically stuck pair; keep best-so-far
        double dai = -s * daj;
        double ai_new = a[i] + dai;
        if (ai_new < snap)
            ai_new = 0.0;
        else if (ai_new > C - snap)
            ai_new = C;
        dai = ai_new - a[i];
        a[i] = ai_new;
        a[j] = aj_new;

        const double gi = y[i] * dai;
        const double gj = y[j] * daj;
        grad.array() += y.array() * (gi * gram.col(i).array() + gj * gram.col(j).array());
    }

    sol.iterations = it;
    sol.multipliers = a;
    sol.objective = 0.5 * (a.sum() - a.dot(grad));

    // bias: mean over free support vectors, else midpoint of the feasible interval
    double sum_b = 0.0;
    long free_count = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (a[t] > 1e-8 && a[t] < C - 1e-8) {
            sum_b += -y[t] * grad[t];
            ++free_count;
        }
    }
    if (free_count > 0) {
        sol.bias = sum_b / static_cast<double>(free_count);
    } else {
        sol.bias = 0.5 * (m_up + m_low);
        if (!std::isfinite(sol.bias))
            sol.bias = 0.0;
    }
    return sol;
}

SvmModel make_model(const Matrix& X, const Vector& y, const DualSolution& sol,
                    const KernelSpec& spec) {
    constexpr double kFloor = 1e-8;
    std::vector<Eigen::Index> sv;
    for (Eigen::Index i = 0; i < sol.multipliers.size(); ++i)
        if (sol.multipliers[i] > kFloor)
            sv.push_back(i);

    SvmModel model;
    model.kernel = spec;
    model.bias = sol.bias;
    model.converged = sol.converged;
    model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), X.cols());
    model.multipliers.resize(static_cast<Eigen::Index>(sv.size()));
    model.sv_labels.resize(static_cast<Eigen::Index>(sv.size()));
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(sv.size()); ++r) {
        const Eigen::Index i = sv[static_cast<std::size_t>(r)];
        model.support_vectors.row(r) = X.row(i);
        model.multipliers[r] = sol.multipliers[i];
        model.sv_labels[r] = y[i];
    }
    return model;
}

SvmModel train(const Matrix& X, const Vector& y, const SvmParams& params, const KernelSpec& spec) {
    if (X.rows() < 2)
        throw std::invalid_argument("train: n >= 2 required");
    const Matrix gram = gram_matrix(X, spec);
    const DualSolution sol = solve_dual(gram, y, params);
    return make_model(X, y, sol, spec);
}

double decision_value(const SvmModel& model, const Vector& x) {
    if (x.size() != model.kernel.alpha.size())
        throw std::invalid_argument("decision_value: dimension mismatch");
    double sum = model.bias;
    for (Eigen::Index i = 0; i < model.support_vectors.rows(); ++i)
        sum += model.multipliers[i] * model.sv_labels[i] *
               kernel_eval(model.support_vectors.row(i).transpose(), x, model.kernel);
    return sum;
}

int predict(const SvmModel& model, const Vector& x) {
    return decision_value(model, x) >= 0.0 ? 1 : -1;
}

} // namespace fwsvm
