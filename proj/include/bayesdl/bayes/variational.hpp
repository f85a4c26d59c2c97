#pragma once

#include <functional>
#include <vector>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/rng.hpp"
#include "bayesdl/core/types.hpp"
#include "bayesdl/optim/optimizer.hpp"

namespace bayesdl::bayes {

/// Fully factorized Gaussian q(θ | φ), φ = (mu, log_sigma).
struct VariationalGaussian {
  Vector mu;
  Vector log_sigma;

  Index size() const { return mu.size(); }
  Vector sigma() const { return log_sigma.array().exp().matrix(); }
  static VariationalGaussian standard(Index dim);
};

/// KL(q || p) for diagonal Gaussians:
/// Σ log(σ₂/σ₁) + (σ₁² + (μ₁-μ₂)²) / (2σ₂²) - ½.
Real kl_gaussians(const VariationalGaussian& q, const VariationalGaussian& p);

/// Gradient of kl_gaussians w.r.t. q's (mu, log_sigma), stacked.
Vector kl_gradient(const VariationalGaussian& q, const VariationalGaussian& p);

enum class EstimatorKind { score, reparam };

/// log p(Y | X, θ) as a function of the parameter vector θ; the data live
/// inside the model.
class LikelihoodModel {
 public:
  virtual ~LikelihoodModel() = default;
  virtual Index dim() const = 0;
  virtual Real log_likelihood(const Vector& theta) const = 0;
  virtual Vector grad_log_likelihood(const Vector& theta) const = 0;
};

/// Scalar θ with observations y_i ~ N(θ, 1).
class ConjugateGaussianModel final : public LikelihoodModel {
 public:
  explicit ConjugateGaussianModel(Vector y) : y_(std::move(y)) {}

  Index dim() const override { return 1; }
  Real log_likelihood(const Vector& theta) const override;
  Vector grad_log_likelihood(const Vector& theta) const override;

  const Vector& observations() const { return y_; }
  /// Exact posterior under a scalar Gaussian prior.
  VariationalGaussian posterior(const VariationalGaussian& prior) const;
  /// log p(y) with θ integrated out under the prior.
  Real log_evidence(const VariationalGaussian& prior) const;
  /// E_q[log p(y | θ)] in closed form.
  Real expected_log_likelihood(const VariationalGaussian& q) const;

 private:
  Vector y_;
};

/// Wraps a plain function and its gradient (e.g. the θ² toy).
class FunctionModel final : public LikelihoodModel {
 public:
  FunctionModel(Index dim, std::function<Real(const Vector&)> f,
                std::function<Vector(const Vector&)> grad)
      : dim_(dim), f_(std::move(f)), grad_(std::move(grad)) {}

  Index dim() const override { return dim_; }
  Real log_likelihood(const Vector& theta) const override { return f_(theta); }
  Vector grad_log_likelihood(const Vector& theta) const override { return grad_(theta); }

 private:
  Index dim_;
  std::function<Real(const Vector&)> f_;
  std::function<Vector(const Vector&)> grad_;
};

/// Monte Carlo gradient of E_q[f(θ)] w.r.t. (mu, log_sigma), with the
/// per-coordinate standard error of the mean over draws.
struct GradientEstimate {
  Vector mean;
  Vector std_error;
};

/// score:   mean of f(θ_s) ∇_φ log q(θ_s)
/// reparam: mean of ∇_θ f(μ + σ ε_s) ∂θ/∂φ with ε_s ~ N(0, I)
GradientEstimate expectation_gradient(const LikelihoodModel& model, const VariationalGaussian& q,
                                      int draws, Rng& rng, EstimatorKind kind);

struct ElboEstimate {
  Real value = 0;
  Real std_error = 0;
  Vector grad;  // w.r.t. (mu, log_sigma), stacked
  Vector grad_std_error;
};

/// ELBO(q) = E_q[log p(Y|X,θ)] - KL(q || prior); the expectation by
/// `draws` Monte Carlo samples, the KL term in closed form.
ElboEstimate elbo(const VariationalGaussian& q, const LikelihoodModel& model,
                  const VariationalGaussian& prior, int draws, Rng& rng, EstimatorKind kind);

/// Exact ELBO for the conjugate model.
Real elbo_exact(const VariationalGaussian& q, const ConjugateGaussianModel& model,
                const VariationalGaussian& prior);

struct ViConfig {
  int steps = 2000;
  int draws = 32;
  EstimatorKind kind = EstimatorKind::reparam;
  optim::Method method = optim::Method::adam;
  optim::ScheduleParams schedule{0.05, 0.0};
  optim::OptimizerParams params{};
};

struct ViResult {
  VariationalGaussian q;
  std::vector<Real> elbo_trace;
};

class ViDiverged : public DivergenceError {
 public:
  ViDiverged(const std::string& what, long iteration, std::vector<Real> trace)
      : DivergenceError(what, iteration), trace_(std::move(trace)) {}
  const std::vector<Real>& trace() const { return trace_; }

 private:
  std::vector<Real> trace_;
};

/// Stochastic gradient ascent on the ELBO.
ViResult vi_fit(const LikelihoodModel& model, const VariationalGaussian& prior,
                VariationalGaussian init, const ViConfig& config, Rng& rng);

}  // namespace bayesdl::bayes
