#pragma once

#include <string>
#include <vector>

#include "bayesdl/cli/config.hpp"
#include "bayesdl/optim/newton.hpp"
#include "bayesdl/optim/optimizer.hpp"

namespace bayesdl::cli {

/// name is one of ball, partition, dropout-ridge, vi-toy, identities, optzoo.
void run_experiment(const std::string& name, const Json& cfg, RunDir& dir);

/// Descent battery on f(x) = ½ xᵀ diag(λ) x with λ evenly spaced in
/// [1, condition], from x = 1. Step sizes are fixed per method.
struct DescentRun {
  optim::Method method;
  std::vector<Real> objective;  // f(x_0), f(x_1), ...
  bool monotone = true;
};
std::vector<DescentRun> quadratic_battery(Index dim, Real condition, int steps);

/// Distance to the minimizer after one Newton step on the battery quadratic.
Real newton_quadratic_error(Index dim, Real condition);

/// Damped Newton on the Rosenbrock function from (-1.2, 1).
optim::NewtonResult newton_rosenbrock(int max_iterations);

/// Max abs difference between the mean of the mini-batch gradients over one
/// full cycle and the full-data gradient of objective/T, on a random
/// regression network.
Real minibatch_cycle_error(std::uint64_t seed);

}  // namespace bayesdl::cli
