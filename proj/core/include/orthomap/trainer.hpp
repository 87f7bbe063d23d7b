#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "orthomap/dataset.hpp"
#include "orthomap/linear_map.hpp"

namespace orthomap {

enum class Schedule { constant, one_cycle };

std::string_view to_string(Schedule s) noexcept;
/// Accepts "constant", "one-cycle" and "one_cycle". Throws ValidationError.
Schedule parse_schedule(std::string_view text);

struct TrainConfig {
    double lambda = kDefaultLambda;
    std::size_t max_iters = 50'000;
    double tol = 1e-10;  ///< relative change of the total loss
    Schedule schedule = Schedule::constant;
    double lr_max = 0.05;
    double div = 25.0;       ///< starting LR is lr_max / div
    double pct_warm = 0.3;   ///< fraction of steps spent warming up
    std::uint64_t seed = 42;
    double init_scale = 0.01;
    /// Nesterov momentum coefficient in [0, 1); 0 is plain gradient descent.
    double momentum = 0.995;

    void validate() const;
};

struct FitReport {
    std::size_t iterations_run = 0;
    bool converged = false;
    /// Entry 0 is the initialization; entry t is after t updates.
    std::vector<LossBreakdown> loss_trajectory;
    double wall_time = 0.0;  ///< seconds
};

struct FitResult {
    LinearMap map;
    FitReport report;
};

/**
 * Warm-up-then-anneal learning rate.
 *
 * Linear ramp from lr_max / div at step 0 to lr_max at floor(pct_warm * total),
 * then a cosine anneal down to lr_max / (div * 100) at step total - 1.
 */
double one_cycle(std::size_t step, std::size_t total, double lr_max, double div, double pct_warm);

/**
 * Full-batch gradient descent with Nesterov momentum on the regularized
 * objective.
 *
 * M starts as N(0, init_scale / sqrt(D)) draws, b as the label column means.
 * Stops after max_iters updates or once the relative change in total loss
 * stays below tol for ceil(1 / (1 - momentum)) consecutive updates (a single
 * update for plain descent). Throws DivergenceError if the loss becomes non-finite.
 *
 * The unit-norm columns favoured by the penalty leave the objective badly
 * conditioned, so plain descent (momentum = 0) needs orders of magnitude more
 * iterations at D = 512 than the default momentum.
 */
FitResult fit(const PairedDataset& ds, const TrainConfig& cfg);

/**
 * Largest relative discrepancy between gradient() and central finite
 * differences of loss().total, over every entry of M and b.
 */
double grad_check(const PairedDataset& ds, const LinearMap& map, double lambda, double fd_step);

}  // namespace orthomap
