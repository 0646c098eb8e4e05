#pragma once

#include "fwsvm/types.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace fwsvm {

struct Nest {
    Vector position;
    double fitness;
};

struct McsConfig {
    int n_nests = 25;
    double frac_abandon = 0.75;
    double frac_top = 0.25;
    double max_levy_step = 1.0; // A, in units of the per-dimension box width
    long max_evaluations = 2000;
    Matrix bounds; // p x 2, column 0 = lo, column 1 = hi
    double levy_exponent = 1.5;
    std::uint64_t seed = 0;

    void check() const;
};

struct Objective {
    std::function<double(const Vector&)> evaluate; // maximized
    int dimension = 0;
};

enum class StepContext { Abandon, TopDuplicate };

/// Abandon phase: A / sqrt(G). Same-top-egg phase: A / G^2.
double step_schedule(int generation, double max_step, StepContext context);

/// Heavy-tailed step via the Mantegna stable-ratio method, scaled by step_size.
Vector levy_step(int p, double step_size, double beta, std::mt19937_64& rng);

/// Golden-section move from the worse position toward the better one;
/// midpoint when fitnesses are equal.
Vector crossover_position(const Vector& worse, const Vector& better, bool equal_fitness);

struct McsTracePoint {
    int generation;
    long evaluations;
    double best_fitness;
    Vector best_position;
};

struct McsResult {
    Vector best_position;
    double best_fitness;
    std::vector<McsTracePoint> trace;
    long evaluations_used = 0;
};

McsResult optimize(const Objective& obj, const McsConfig& cfg);

} // namespace fwsvm
