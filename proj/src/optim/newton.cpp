#include "bayesdl/optim/newton.hpp"

#include <algorithm>
#include <cmath>

#include "bayesdl/core/errors.hpp"

namespace bayesdl::optim {

Matrix finite_difference_hessian(const GradientFn& grad, const Vector& x) {
  const Index n = x.size();
  Matrix H(n, n);
  for (Index j = 0; j < n; ++j) {
    const Real h = 1e-5 * std::max(Real(1), std::abs(x[j]));
    Vector up = x, down = x;
    up[j] += h;
    down[j] -= h;
    H.col(j) = (grad(up) - grad(down)) / (up[j] - down[j]);
  }
  return (H + H.transpose()) / 2;
}

Vector newton_step(const GradientFn& grad, const Vector& x, Real damping) {
  if (x.size() > 500) throw DomainError("newton_step is limited to 500 parameters");
  if (!(damping >= 0)) throw DomainError("newton damping must be nonnegative");
  const Vector g = grad(x);
  const Matrix H = finite_difference_hessian(grad, x);
  const Index n = x.size();
  const Real scale = std::max(Real(1), H.cwiseAbs().maxCoeff());
  Real lambda = damping;
  for (int attempt = 0; attempt < 40; ++attempt) {
    const Matrix A = H + lambda * Matrix::Identity(n, n);
    Eigen::LLT<Matrix> llt(A);
    if (llt.info() == Eigen::Success) {
      const Vector diag = llt.matrixL().toDenseMatrix().diagonal();
      if (diag.minCoeff() > 1e-12 * std::sqrt(scale)) return x - llt.solve(g);
    }
    lambda = std::max(lambda * 10, 1e-8 * scale);
  }
  throw ConditioningError("Hessian not positive definite after damping escalation");
}

NewtonResult newton_minimize(const ObjectiveFn& f, const GradientFn& grad, Vector x0,
                             const NewtonOptions& options) {
  NewtonResult result;
  result.x = std::move(x0);
  Real fx = f(result.x);
  result.objective_trace.push_back(fx);
  Real lambda = options.initial_damping;
  for (int it = 0; it < options.max_iterations; ++it) {
    const Vector g = grad(result.x);
    if (!g.allFinite()) throw DivergenceError("non-finite gradient", it);
    if (g.norm() <= options.gradient_tolerance) {
      result.converged = true;
      break;
    }
    result.iterations = it + 1;
    bool accepted = false;
    for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
      const Vector candidate = newton_step(grad, result.x, lambda);
      const Real fc = f(candidate);
      if (std::isfinite(fc) && fc <= fx) {
        const bool stalled = (candidate - result.x).norm() <= 1e-15 * (1 + result.x.norm());
        result.x = candidate;
        fx = fc;
        lambda /= 10;
        accepted = true;
        if (stalled) result.converged = true;
      } else {
        lambda = std::max(lambda * 10, 1e-8);
      }
    }
    result.objective_trace.push_back(fx);
    if (!accepted) {
      // no decrease is possible at working precision
      result.converged = g.norm() <= 1e-6;
      break;
    }
    if (result.converged) break;
  }
  return result;
}

}  // namespace bayesdl::optim
