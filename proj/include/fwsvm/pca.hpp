#pragma once

#include "fwsvm/types.hpp"

namespace fwsvm {

struct CovarianceMatrix {
    Matrix S;             // d x d, symmetric by construction
    Eigen::Index sample_count;
};

/// S = (1/L) sum_k (x_k - m)^T (x_k - m).
CovarianceMatrix covariance(const SampleMatrix& m);

struct EigResult {
    Vector values;  // sorted descending
    Matrix vectors; // orthonormal columns, sign-normalized
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations
/// (off-diagonal threshold 1e-12, 100-sweep cap).
EigResult eig_sym(const Matrix& S);

struct PcaModel {
    Vector mean;
    Matrix components;   // d x n, columns are principal axes
    Vector eigenvalues;  // length n, descending
    double total_variance; // sum of all d eigenvalues = trace(S)

    double explained_variance_ratio() const {
        return total_variance > 0.0 ? eigenvalues.sum() / total_variance : 1.0;
    }
};

PcaModel pca_fit(const SampleMatrix& m, Eigen::Index n_components);

/// q = V^T (x - mean). Projection is centered; the covariance is centered, so
/// an uncentered projection would be inconsistent with it.
Vector pca_transform(const PcaModel& model, const Vector& x);
Matrix pca_transform_rows(const PcaModel& model, const Matrix& X);

} // namespace fwsvm
