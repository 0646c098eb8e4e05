#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

namespace fwsvm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// n x d feature matrix with labels in {+1, -1}.
struct SampleMatrix {
    Matrix X;
    Vector y;

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index d() const { return X.cols(); }

    void check() const {
        if (X.rows() != y.size())
            throw std::invalid_argument("SampleMatrix: rows(X) != len(y)");
        if (X.cols() < 1)
            throw std::invalid_argument("SampleMatrix: d >= 1 required");
        for (Eigen::Index i = 0; i < y.size(); ++i)
            if (y[i] != 1.0 && y[i] != -1.0)
                throw std::invalid_argument("SampleMatrix: labels must be +1/-1");
    }
};

} // namespace fwsvm
