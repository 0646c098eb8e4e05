#include "fwsvm/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fwsvm {

CovarianceMatrix covariance(const SampleMatrix& m) {
    if (m.n() < 2)
        throw std::invalid_argument("covariance: n >= 2 required");
    const Vector mean = m.X.colwise().mean();
    Matrix centered = m.X.rowwise() - mean.transpose();
    Matrix S = centered.transpose() * centered / static_cast<double>(m.n());
    S = ((S + S.transpose()) * 0.5).eval(); // exact symmetry
    return {std::move(S), m.n()};
}

namespace {

double offdiag_norm(const Matrix& A) {
    double s = 0.0;
    for (Eigen::Index p = 0; p < A.rows(); ++p)
        for (Eigen::Index q = 0; q < A.cols(); ++q)
            if (p != q) s += A(p, q) * A(p, q);
    return std::sqrt(s);
}

void normalize_sign(Matrix& V) {
    for (Eigen::Index k = 0; k < V.cols(); ++k) {
        Eigen::Index imax;
        V.col(k).cwiseAbs().maxCoeff(&imax);
        if (V(imax, k) < 0.0)
            V.col(k) = -V.col(k);
    }
}

bool lex_less(const Vector& a, const Vector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

} // namespace

EigResult eig_sym(const Matrix& S) {
    if (S.rows() != S.cols())
        throw std::invalid_argument("eig_sym: matrix must be square");
    if (!S.isApprox(S.transpose(), 1e-12))
        throw std::invalid_argument("eig_sym: matrix must be symmetric");

    const Eigen::Index d = S.rows();
    Matrix A = S;
    Matrix V = Matrix::Identity(d, d);
    const double scale = std::max(1.0, A.norm());
    const double threshold = 1e-12 * scale;
    constexpr int kMaxSweeps = 100;

    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_norm(A) <= threshold)
            break;
        for (Eigen::Index p = 0; p < d - 1; ++p) {
            for (Eigen::Index q = p + 1; q < d; ++q) {
                const double apq = A(p, q);
                if (std::abs(apq) <= threshold / static_cast<double>(d * d))
                    continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // A <- J^T A J with the Jacobi rotation J in the (p, q) plane
                for (Eigen::Index i = 0; i < d; ++i) {
                    const double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip - s * aiq;
                    A(i, q) = s * aip + c * aiq;
                }
                for (Eigen::Index i = 0; i < d; ++i) {
                    const double api = A(p, i), aqi = A(q, i);
                    A(p, i) = c * api - s * aqi;
                    A(q, i) = s * api + c * aqi;
                }
                for (Eigen::Index i = 0; i < d; ++i) {
                    const double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    if (sweep == kMaxSweeps && offdiag_norm(A) > threshold)
        throw std::runtime_error("eig_sym: Jacobi did not converge, off-diagonal norm " +
                                 std::to_string(offdiag_norm(A)));

    normalize_sign(V);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (A(a, a) != A(b, b)) return A(a, a) > A(b, b);
        return lex_less(V.col(a), V.col(b));
    });

    EigResult res;
    res.values.resize(d);
    res.vectors.resize(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        res.values[k] = A(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
        res.vectors.col(k) = V.col(order[static_cast<std::size_t>(k)]);
    }
    return res;
}

PcaModel pca_fit(const SampleMatrix& m, Eigen::Index n_components) {
    if (n_components < 1 || n_components > m.d())
        throw std::invalid_argument("pca_fit: n_components out of range [1, d]");
    const CovarianceMatrix cov = covariance(m);
    const EigResult eig = eig_sym(cov.S);

    PcaModel model;
    model.mean = m.X.colwise().mean();
    model.components = eig.vectors.leftCols(n_components);
    model.eigenvalues = eig.values.head(n_components);
    model.total_variance = eig.values.sum();
    return model;
}

Vector pca_transform(const PcaModel& model, const Vector& x) {
    if (x.size() != model.mean.size())
        throw std::invalid_argument("pca_transform: dimension mismatch");
    return model.components.transpose() * (x - model.mean);
}

Matrix pca_transform_rows(const PcaModel& model, const Matrix& X) {
    if (X.cols() != model.mean.size())
        throw std::invalid_argument("pca_transform: dimension mismatch");
    return (X.rowwise() - model.mean.transpose()) * model.components;
}

} // namespace fwsvm
