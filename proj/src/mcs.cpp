#include "fwsvm/mcs.hpp"
#include "fwsvm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fwsvm {

void McsConfig::check() const {
    if (n_nests < 4)
        throw std::invalid_argument("McsConfig: n_nests >= 4 required");
    if (frac_abandon <= 0.0 || frac_abandon >= 1.0 || frac_top <= 0.0 || frac_top >= 1.0)
        throw std::invalid_argument("McsConfig: fractions must lie in (0, 1)");
    if (bounds.cols() != 2 || bounds.rows() < 1)
        throw std::invalid_argument("McsConfig: bounds must be p x 2");
    for (Eigen::Index k = 0; k < bounds.rows(); ++k)
        if (!(bounds(k, 0) < bounds(k, 1)))
            throw std::invalid_argument("McsConfig: lo < hi required per dimension");
    if (max_levy_step <= 0.0)
        throw std::invalid_argument("McsConfig: max_levy_step > 0 required");
}

double step_schedule(int generation, double max_step, StepContext context) {
    if (generation < 1)
        throw std::invalid_argument("step_schedule: G >= 1 required");
    const double g = static_cast<double>(generation);
    return context == StepContext::Abandon ? max_step / std::sqrt(g) : max_step / (g * g);
}

Vector levy_step(int p, double step_size, double beta, std::mt19937_64& rng) {
    // Mantegna: step = u / |v|^(1/beta), u ~ N(0, sigma_u^2), v ~ N(0, 1)
    const double num = std::tgamma(1.0 + beta) * std::sin(M_PI * beta / 2.0);
    const double den = std::tgamma((1.0 + beta) / 2.0) * beta * std::pow(2.0, (beta - 1.0) / 2.0);
    const double sigma_u = std::pow(num / den, 1.0 / beta);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector step(p);
    for (int k = 0; k < p; ++k) {
        const double u = gauss(rng) * sigma_u;
        const double v = gauss(rng);
        step[k] = step_size * u / std::pow(std::abs(v), 1.0 / beta);
    }
    return step;
}

Vector crossover_position(const Vector& worse, const Vector& better, bool equal_fitness) {
    if (equal_fitness)
        return 0.5 * (worse + better);
    constexpr double kGoldenRatio = 1.6180339887498949;
    return worse + (better - worse) / kGoldenRatio;
}

namespace {

Vector clamp_to_box(Vector x, const Matrix& bounds) {
    for (Eigen::Index k = 0; k < x.size(); ++k)
        x[k] = std::min(bounds(k, 1), std::max(bounds(k, 0), x[k]));
    return x;
}

} // namespace

McsResult optimize(const Objective& obj, const McsConfig& cfg) {
    cfg.check();
    const int p = obj.dimension;
    if (p != cfg.bounds.rows())
        throw std::invalid_argument("optimize: objective/bounds dimension mismatch");
    if (cfg.max_evaluations < cfg.n_nests)
        throw std::invalid_argument("optimize: budget must cover the initial population");

    auto rng = make_rng(derive_seed(cfg.seed, "mcs"));
    const Vector width = cfg.bounds.col(1) - cfg.bounds.col(0);

    McsResult res;
    res.best_fitness = -std::numeric_limits<double>::infinity();
    long evals = 0;

    auto evaluate = [&](const Vector& x) {
        const double f = obj.evaluate(x);
        ++evals;
        if (f > res.best_fitness) {
            res.best_fitness = f;
            res.best_position = x;
        }
        return f;
    };

    std::vector<Nest> nests(static_cast<std::size_t>(cfg.n_nests));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // nest 0 anchors the box midpoint; the rest are uniform
    nests[0].position = clamp_to_box(cfg.bounds.col(0) + 0.5 * width, cfg.bounds);
    for (int i = 1; i < cfg.n_nests; ++i) {
        Vector x(p);
        for (int k = 0; k < p; ++k)
            x[k] = cfg.bounds(k, 0) + unit(rng) * width[k];
        nests[static_cast<std::size_t>(i)].position = x;
    }
    for (auto& nest : nests)
        nest.fitness = evaluate(nest.position);

    int generation = 1;
    res.trace.push_back({generation, evals, res.best_fitness, res.best_position});

    const int n_abandon = static_cast<int>(std::floor(cfg.frac_abandon * cfg.n_nests));
    const int n_top = std::max(2, static_cast<int>(std::floor(cfg.frac_top * cfg.n_nests)));

    bool budget_left = evals < cfg.max_evaluations;
    while (budget_left) {
        ++generation;
        std::stable_sort(nests.begin(), nests.end(),
                         [](const Nest& a, const Nest& b) { return a.fitness > b.fitness; });

        // bottom fraction: unconditional Levy-flight replacement
        const double alpha_abandon =
            step_schedule(generation, cfg.max_levy_step, StepContext::Abandon);
        for (int i = cfg.n_nests - n_abandon; i < cfg.n_nests; ++i) {
            if (evals >= cfg.max_evaluations) { budget_left = false; break; }
            auto& nest = nests[static_cast<std::size_t>(i)];
            const Vector step =
                levy_step(p, alpha_abandon, cfg.levy_exponent, rng).cwiseProduct(width);
            nest.position = clamp_to_box(nest.position + step, cfg.bounds);
            nest.fitness = evaluate(nest.position);
        }

        // top fraction: golden-section crossover, or a small Levy flight when
        // a top egg is paired with itself; replacement of a random nest on
        // strict improvement only
        if (budget_left) {
            std::uniform_int_distribution<int> pick_top(0, n_top - 1);
            std::uniform_int_distribution<int> pick_any(0, cfg.n_nests - 1);
            const double alpha_dup =
                step_schedule(generation, cfg.max_levy_step, StepContext::TopDuplicate);
            for (int i = 0; i < n_top; ++i) {
                if (evals >= cfg.max_evaluations) { budget_left = false; break; }
                const int j = pick_top(rng);
                Vector candidate;
                if (j == i) {
                    const Vector step =
                        levy_step(p, alpha_dup, cfg.levy_exponent, rng).cwiseProduct(width);
                    candidate = clamp_to_box(nests[static_cast<std::size_t>(i)].position + step,
                                             cfg.bounds);
                } else {
                    const Nest& a = nests[static_cast<std::size_t>(i)];
                    const Nest& b = nests[static_cast<std::size_t>(j)];
                    const bool equal = a.fitness == b.fitness;
                    const Nest& worse = a.fitness <= b.fitness ? a : b;
                    const Nest& better = a.fitness <= b.fitness ? b : a;
                    candidate =
                        clamp_to_box(crossover_position(worse.position, better.position, equal),
                                     cfg.bounds);
                }
                const double fk = evaluate(candidate);
                const int l = pick_any(rng);
                auto& target = nests[static_cast<std::size_t>(l)];
                if (fk > target.fitness) {
                    target.position = candidate;
                    target.fitness = fk;
                }
            }
        }

        res.trace.push_back({generation, evals, res.best_fitness, res.best_position});
        if (evals >= cfg.max_evaluations)
            budget_left = false;
    }

    res.evaluations_used = evals;
    return res;
}

} // namespace fwsvm
