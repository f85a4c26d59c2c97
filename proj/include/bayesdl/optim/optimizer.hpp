#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "bayesdl/core/types.hpp"

namespace bayesdl::optim {

/// Step size t_k = a * exp(-decay * k).
struct ScheduleParams {
  Real a = 0.01;
  Real decay = 0.0;

  Real rate(long k) const;
};

enum class Method { sgd, momentum, nesterov, adagrad, rmsprop, adam, newton };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);
const std::vector<Method>& all_methods();

struct OptimizerParams {
  Real mu = 0.9;       // momentum / first-moment decay, in [0, 1)
  Real d = 0.9;        // squared-gradient decay for rmsprop/adam, in [0, 1)
  Real eps = 1e-8;     // added to sqrt(c) in adaptive denominators
  Real damping = 0.0;  // Newton damping lambda
};

using GradientFn = std::function<Vector(const Vector&)>;
using ObjectiveFn = std::function<Real(const Vector&)>;

/// One optimizer instance per parameter vector. Keeps the velocity v and
/// squared-gradient accumulator c between steps.
///
///   sgd       x -= t g
///   momentum  v = mu v - t g;  x += v
///   nesterov  v = mu v - t g(x + mu v);  x += v
///   adagrad   c += g^2;  x -= t g / (sqrt(c) + eps)
///   rmsprop   c = d c + (1-d) g^2;  x -= t g / (sqrt(c) + eps)
///   adam      v = mu v + (1-mu) g;  c = d c + (1-d) g^2;  x -= t v / (sqrt(c) + eps)
///   newton    x += solve(H + lambda I, -g), H by finite differences of g
class Optimizer {
 public:
  Optimizer(Method method, Index parameter_count, OptimizerParams params = {});

  /// Updates `x` in place. Throws DivergenceError (carrying k) on a non-finite gradient.
  void step(Vector& x, const GradientFn& grad, long k, const ScheduleParams& schedule);

  Method method() const { return method_; }
  const OptimizerParams& params() const { return params_; }
  const Vector& velocity() const { return v_; }
  const Vector& accumulator() const { return c_; }
  void reset();

 private:
  Method method_;
  OptimizerParams params_;
  Vector v_;
  Vector c_;
};

/// 0-based indices of mini-batch k: the consecutive cyclic block of
/// `batch_size` records starting at (k * batch_size) mod T.
std::vector<Index> minibatch_indices(Index T, Index batch_size, long k);

}  // namespace bayesdl::optim
