#include <doctest.h>

#include "fwsvm/mcs.hpp"

#include <cmath>

using namespace fwsvm;

namespace {

Matrix box(double lo, double hi, int p) {
    Matrix b(p, 2);
    for (int k = 0; k < p; ++k) {
        b(k, 0) = lo;
        b(k, 1) = hi;
    }
    return b;
}

McsConfig base_config(int p, std::uint64_t seed, long budget) {
    McsConfig cfg;
    cfg.bounds = box(-5.0, 5.0, p);
    cfg.seed = seed;
    cfg.max_evaluations = budget;
    return cfg;
}

} // namespace

TEST_CASE("step_schedule") {
    CHECK(step_schedule(1, 1.0, StepContext::Abandon) == doctest::Approx(1.0));
    CHECK(step_schedule(4, 1.0, StepContext::Abandon) == doctest::Approx(0.5));
    CHECK(step_schedule(4, 1.0, StepContext::TopDuplicate) == doctest::Approx(1.0 / 16.0));
    CHECK(step_schedule(1, 2.0, StepContext::TopDuplicate) == doctest::Approx(2.0));
    CHECK_THROWS(step_schedule(0, 1.0, StepContext::Abandon));
}

TEST_CASE("crossover_position") {
    Vector worse = Vector::Zero(2);
    const double phi = 1.6180339887498949;
    Vector better = Vector::Constant(2, phi);
    const Vector moved = crossover_position(worse, better, false);
    CHECK(moved[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(moved[1] == doctest::Approx(1.0).epsilon(1e-12));

    // equal fitness: midpoint
    const Vector mid = crossover_position(worse, better, true);
    CHECK(mid[0] == doctest::Approx(phi / 2.0));

    // 1-D: fraction of the gap is 1/phi
    Vector a = Vector::Zero(1), b = Vector::Ones(1);
    CHECK(crossover_position(a, b, false)[0] == doctest::Approx(1.0 / phi).epsilon(1e-12));
    // moving from b toward a lands at 1 - 1/phi
    CHECK(crossover_position(b, a, false)[0] == doctest::Approx(1.0 - 1.0 / phi).epsilon(1e-12));
}

TEST_CASE("levy_step heavy tail has the configured exponent") {
    auto rng = std::mt19937_64(12345);
    const int n = 100000;
    long over1 = 0, over10 = 0;
    for (int i = 0; i < n; ++i) {
        const double s = std::abs(levy_step(1, 1.0, 1.5, rng)[0]);
        if (s > 1.0) ++over1;
        if (s > 10.0) ++over10;
    }
    // P(|S| > t) ~ t^(-1.5): a decade in t thins the tail by ~10^1.5 = 31.6
    REQUIRE(over10 > 50);
    const double ratio = static_cast<double>(over1) / static_cast<double>(over10);
    CHECK(ratio > 15.0);
    CHECK(ratio < 65.0);

    // step_size scales the draw linearly
    auto rng_a = std::mt19937_64(7), rng_b = std::mt19937_64(7);
    const Vector s1 = levy_step(3, 1.0, 1.5, rng_a);
    const Vector s2 = levy_step(3, 2.5, 1.5, rng_b);
    CHECK((s2 - 2.5 * s1).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("config validation") {
    McsConfig cfg = base_config(2, 0, 500);
    CHECK_NOTHROW(cfg.check());

    McsConfig bad = cfg;
    bad.n_nests = 3;
    CHECK_THROWS(bad.check());
    bad = cfg;
    bad.frac_abandon = 1.0;
    CHECK_THROWS(bad.check());
    bad = cfg;
    bad.bounds = Matrix::Zero(2, 2); // lo == hi
    CHECK_THROWS(bad.check());
    bad = cfg;
    bad.max_levy_step = 0.0;
    CHECK_THROWS(bad.check());

    // budget below the initial population is rejected at optimize time
    McsConfig tiny = base_config(1, 0, 10);
    Objective sphere;
    sphere.dimension = 1;
    sphere.evaluate = [](const Vector& x) { return -x.squaredNorm(); };
    CHECK_THROWS(optimize(sphere, tiny));
    // as is a dimension mismatch
    McsConfig wrong = base_config(3, 0, 500);
    CHECK_THROWS(optimize(sphere, wrong));
}

TEST_CASE("optimize finds the sphere optimum") {
    Objective sphere;
    sphere.dimension = 2;
    Vector target(2);
    target << 1.7, -2.3;
    sphere.evaluate = [target](const Vector& x) { return -(x - target).squaredNorm(); };
    const auto res = optimize(sphere, base_config(2, 42, 2000));
    CHECK(res.best_fitness > -1e-2);
    CHECK((res.best_position - target).norm() < 0.15);
}

TEST_CASE("optimize makes progress on the Rosenbrock valley") {
    Objective rosen;
    rosen.dimension = 2;
    rosen.evaluate = [](const Vector& x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return -(a * a + 100.0 * b * b);
    };
    McsConfig cfg = base_config(2, 7, 4000);
    cfg.bounds = box(-2.0, 2.0, 2);
    const auto res = optimize(rosen, cfg);
    CHECK(res.best_fitness > -1.0);
}

TEST_CASE("optimize invariants: elitism, budget, bounds, trace") {
    Objective obj;
    obj.dimension = 2;
    bool in_box = true;
    obj.evaluate = [&in_box](const Vector& x) {
        in_box = in_box && x.minCoeff() >= -5.0 && x.maxCoeff() <= 5.0;
        return -std::abs(std::sin(3.0 * x[0])) - 0.1 * x.squaredNorm();
    };
    McsConfig cfg = base_config(2, 3, 777); // budget not a multiple of anything
    const auto res = optimize(obj, cfg);

    CHECK(in_box);
    CHECK(res.evaluations_used == cfg.max_evaluations);
    CHECK(res.best_position.minCoeff() >= -5.0);
    CHECK(res.best_position.maxCoeff() <= 5.0);

    REQUIRE(!res.trace.empty());
    CHECK(res.trace.front().generation == 1);
    CHECK(res.trace.front().evaluations == cfg.n_nests);
    for (std::size_t i = 1; i < res.trace.size(); ++i) {
        CHECK(res.trace[i].best_fitness >= res.trace[i - 1].best_fitness);
        CHECK(res.trace[i].evaluations > res.trace[i - 1].evaluations);
        CHECK(res.trace[i].generation == res.trace[i - 1].generation + 1);
    }
    CHECK(res.trace.back().evaluations == cfg.max_evaluations);
    CHECK(res.trace.back().best_fitness == res.best_fitness);
}

TEST_CASE("optimize evaluates the box midpoint first") {
    Objective obj;
    obj.dimension = 2;
    Vector first;
    bool captured = false;
    obj.evaluate = [&](const Vector& x) {
        if (!captured) {
            first = x;
            captured = true;
        }
        return 0.0;
    };
    McsConfig cfg = base_config(2, 91, 200);
    cfg.bounds.row(0) << 0.0, 10.0;
    cfg.bounds.row(1) << -4.0, 0.0;
    optimize(obj, cfg);
    REQUIRE(captured);
    CHECK(first[0] == doctest::Approx(5.0));
    CHECK(first[1] == doctest::Approx(-2.0));
}

TEST_CASE("optimize is deterministic in the seed") {
    Objective obj;
    obj.dimension = 2;
    obj.evaluate = [](const Vector& x) { return -(x.array() - 0.5).matrix().squaredNorm(); };
    const auto a = optimize(obj, base_config(2, 17, 600));
    const auto b = optimize(obj, base_config(2, 17, 600));
    CHECK(a.best_fitness == b.best_fitness);
    CHECK(a.best_position == b.best_position);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i)
        CHECK(a.trace[i].best_fitness == b.trace[i].best_fitness);

    const auto c = optimize(obj, base_config(2, 18, 600));
    CHECK((a.best_position != c.best_position || a.best_fitness != c.best_fitness));
}
