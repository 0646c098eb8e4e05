#include <doctest.h>

#include "fwsvm/dataset.hpp"
#include "fwsvm/pca.hpp"

#include <Eigen/Eigenvalues>
#include <random>

using namespace fwsvm;

namespace {

Matrix random_symmetric(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix A(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            A(i, j) = gauss(rng);
    return 0.5 * (A + A.transpose());
}

SampleMatrix random_samples(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    SampleMatrix m;
    m.X.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            m.X(i, j) = gauss(rng);
    m.y = Vector::Ones(n);
    return m;
}

} // namespace

TEST_CASE("covariance basics") {
    SampleMatrix m;
    m.X.resize(2, 2);
    m.X << 1, 0, -1, 0;
    m.y = Vector::Ones(2);
    const auto cov = covariance(m);
    CHECK(cov.S(0, 0) == doctest::Approx(1.0));
    CHECK(cov.S(1, 1) == doctest::Approx(0.0));
    CHECK(cov.S(0, 1) == doctest::Approx(0.0));
    CHECK(cov.S == cov.S.transpose());

    SampleMatrix one;
    one.X = Matrix::Ones(1, 2);
    one.y = Vector::Ones(1);
    CHECK_THROWS(covariance(one));
}

TEST_CASE("covariance of rank-1 data is rank 1") {
    SampleMatrix m;
    m.X.resize(4, 2);
    m.X << 1, 1, 2, 2, 3, 3, 4, 4;
    m.y = Vector::Ones(4);
    const auto cov = covariance(m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov.S);
    CHECK(es.eigenvalues()[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(es.eigenvalues()[1] > 0.0);
}

TEST_CASE("covariance of standardized data has unit diagonal") {
    const auto pima = to_matrix(parse_csv_file(PIMA_CSV_PATH));
    const auto z = standardize_apply(standardize_fit(pima), pima);
    const auto cov = covariance(z);
    for (Eigen::Index j = 0; j < cov.S.rows(); ++j)
        CHECK(std::abs(cov.S(j, j) - 1.0) < 1e-10);
}

TEST_CASE("eig_sym on known matrices") {
    const auto ident = eig_sym(Matrix::Identity(3, 3));
    for (int k = 0; k < 3; ++k)
        CHECK(ident.values[k] == doctest::Approx(1.0));
    CHECK((ident.vectors.transpose() * ident.vectors - Matrix::Identity(3, 3))
              .cwiseAbs().maxCoeff() < 1e-8);

    Matrix diag(2, 2);
    diag << 2, 0, 0, 1;
    const auto d = eig_sym(diag);
    CHECK(d.values[0] == doctest::Approx(2.0));
    CHECK(d.values[1] == doctest::Approx(1.0));
    CHECK(std::abs(d.vectors(0, 0)) == doctest::Approx(1.0));

    // hand solution of the 2x2 characteristic polynomial
    Matrix s(2, 2);
    s << 2, 1, 1, 2;
    const auto e = eig_sym(s);
    CHECK(e.values[0] == doctest::Approx(3.0));
    CHECK(e.values[1] == doctest::Approx(1.0));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(inv_sqrt2));
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(inv_sqrt2));
}

TEST_CASE("eig_sym matches an independent solver on random symmetric matrices") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix S = random_symmetric(5, rng);
        const auto mine = eig_sym(S);
        Eigen::SelfAdjointEigenSolver<Matrix> oracle(S);
        for (int k = 0; k < 5; ++k) {
            // oracle sorts ascending
            CHECK(mine.values[k] == doctest::Approx(oracle.eigenvalues()[4 - k]).epsilon(1e-6));
        }
        // residual and orthonormality
        const double scale = std::max(1.0, std::abs(mine.values[0]));
        for (int k = 0; k < 5; ++k)
            CHECK((S * mine.vectors.col(k) - mine.values[k] * mine.vectors.col(k)).norm() <
                  1e-8 * scale);
        CHECK((mine.vectors.transpose() * mine.vectors - Matrix::Identity(5, 5))
                  .cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("eig_sym sign normalization makes repeated fits identical") {
    std::mt19937_64 rng(5);
    const Matrix S = random_symmetric(6, rng);
    const auto a = eig_sym(S);
    const auto b = eig_sym(S);
    CHECK(a.vectors == b.vectors);
    for (Eigen::Index k = 0; k < 6; ++k) {
        Eigen::Index imax;
        a.vectors.col(k).cwiseAbs().maxCoeff(&imax);
        CHECK(a.vectors(imax, k) > 0.0);
    }
}

TEST_CASE("pca_fit basics") {
    std::mt19937_64 rng(77);
    auto m = random_samples(40, 5, rng);
    CHECK_THROWS(pca_fit(m, 0));
    CHECK_THROWS(pca_fit(m, 6));

    const auto full = pca_fit(m, 5);
    CHECK(full.eigenvalues.size() == 5);
    CHECK(full.explained_variance_ratio() == doctest::Approx(1.0));

    // data on the line y = x
    SampleMatrix line;
    line.X.resize(5, 2);
    line.X << 0, 0, 1, 1, 2, 2, 3, 3, 4, 4;
    line.y = Vector::Ones(5);
    const auto lm = pca_fit(line, 2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(lm.components(0, 0)) == doctest::Approx(inv_sqrt2));
    CHECK(std::abs(lm.components(1, 0)) == doctest::Approx(inv_sqrt2));
    CHECK(lm.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pca_transform identities") {
    std::mt19937_64 rng(9);
    const auto m = random_samples(30, 4, rng);
    const auto model = pca_fit(m, 4);

    // mean maps to the origin
    CHECK(pca_transform(model, model.mean).norm() < 1e-12);

    // mean + v1 maps to e1
    const Vector q = pca_transform(model, model.mean + model.components.col(0));
    CHECK(q[0] == doctest::Approx(1.0));
    CHECK(q.tail(3).norm() < 1e-10);

    // full-basis reconstruction
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector x(4);
    for (int j = 0; j < 4; ++j)
        x[j] = gauss(rng);
    const Vector recon = model.components * pca_transform(model, x) + model.mean;
    CHECK((recon - x).norm() < 1e-8);

    CHECK_THROWS(pca_transform(model, Vector::Zero(3)));
}

TEST_CASE("pca invariants on random matrices up to 8x8") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dim(2, 8);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index d = dim(rng);
        const auto m = random_samples(20 + trial % 30, d, rng);
        const auto cov = covariance(m);
        const auto model = pca_fit(m, d);

        // orthonormality
        CHECK((model.components.transpose() * model.components - Matrix::Identity(d, d))
                  .cwiseAbs().maxCoeff() < 1e-8);
        // trace conservation
        CHECK(model.eigenvalues.sum() == doctest::Approx(cov.S.trace()).epsilon(1e-8));
        // eigen residual
        const double scale = std::max(1.0, model.eigenvalues[0]);
        for (Eigen::Index k = 0; k < d; ++k)
            CHECK((cov.S * model.components.col(k) -
                   model.eigenvalues[k] * model.components.col(k)).norm() < 1e-8 * scale);
        // projected variance of component k equals lambda_k
        const Matrix Q = pca_transform_rows(model, m.X);
        for (Eigen::Index k = 0; k < d; ++k) {
            const double var = (Q.col(k).array() - Q.col(k).mean()).square().mean();
            CHECK(var == doctest::Approx(model.eigenvalues[k]).epsilon(1e-6));
        }
    }
}
