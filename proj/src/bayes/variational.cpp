#include "bayesdl/bayes/variational.hpp"

#include <cmath>
#include <numbers>

namespace bayesdl::bayes {

namespace {

void check_same_size(const VariationalGaussian& a, const VariationalGaussian& b) {
  if (a.mu.size() != a.log_sigma.size() || b.mu.size() != b.log_sigma.size())
    throw ShapeError("variational Gaussian: mu and log_sigma lengths differ");
  if (a.size() != b.size()) throw ShapeError("variational Gaussians have different dimensions");
}

VariationalGaussian unpack(const Vector& phi) {
  const Index n = phi.size() / 2;
  return {phi.head(n), phi.tail(n)};
}

Vector pack(const VariationalGaussian& q) {
  Vector phi(2 * q.size());
  phi << q.mu, q.log_sigma;
  return phi;
}

}  // namespace

VariationalGaussian VariationalGaussian::standard(Index dim) {
  return {Vector::Zero(dim), Vector::Zero(dim)};
}

Real kl_gaussians(const VariationalGaussian& q, const VariationalGaussian& p) {
  check_same_size(q, p);
  Real kl = 0;
  for (Index i = 0; i < q.size(); ++i) {
    const Real s1sq = std::exp(2 * q.log_sigma[i]);
    const Real s2sq = std::exp(2 * p.log_sigma[i]);
    const Real dm = q.mu[i] - p.mu[i];
    kl += (p.log_sigma[i] - q.log_sigma[i]) + (s1sq + dm * dm) / (2 * s2sq) - 0.5;
  }
  return kl;
}

Vector kl_gradient(const VariationalGaussian& q, const VariationalGaussian& p) {
  check_same_size(q, p);
  const Index n = q.size();
  Vector g(2 * n);
  for (Index i = 0; i < n; ++i) {
    const Real s2sq = std::exp(2 * p.log_sigma[i]);
    g[i] = (q.mu[i] - p.mu[i]) / s2sq;
    g[n + i] = -1 + std::exp(2 * q.log_sigma[i]) / s2sq;
  }
  return g;
}

Real ConjugateGaussianModel::log_likelihood(const Vector& theta) const {
  const Real n = static_cast<Real>(y_.size());
  return -0.5 * (y_.array() - theta[0]).square().sum() - 0.5 * n * std::log(2 * std::numbers::pi);
}

Vector ConjugateGaussianModel::grad_log_likelihood(const Vector& theta) const {
  Vector g(1);
  g[0] = (y_.array() - theta[0]).sum();
  return g;
}

VariationalGaussian ConjugateGaussianModel::posterior(const VariationalGaussian& prior) const {
  if (prior.size() != 1) throw ShapeError("conjugate model expects a scalar prior");
  const Real s0sq = std::exp(2 * prior.log_sigma[0]);
  const Real precision = 1 / s0sq + static_cast<Real>(y_.size());
  const Real mean = (prior.mu[0] / s0sq + y_.sum()) / precision;
  VariationalGaussian post{Vector::Constant(1, mean), Vector::Constant(1, -0.5 * std::log(precision))};
  return post;
}

Real ConjugateGaussianModel::log_evidence(const VariationalGaussian& prior) const {
  if (prior.size() != 1) throw ShapeError("conjugate model expects a scalar prior");
  const Real n = static_cast<Real>(y_.size());
  const Real s0sq = std::exp(2 * prior.log_sigma[0]);
  const Vector r = y_.array() - prior.mu[0];
  // y ~ N(m0 1, I + s0² 11ᵀ)
  const Real quad = r.squaredNorm() - s0sq * r.sum() * r.sum() / (1 + n * s0sq);
  return -0.5 * n * std::log(2 * std::numbers::pi) - 0.5 * std::log1p(n * s0sq) - 0.5 * quad;
}

Real ConjugateGaussianModel::expected_log_likelihood(const VariationalGaussian& q) const {
  const Real n = static_cast<Real>(y_.size());
  const Real ssq = std::exp(2 * q.log_sigma[0]);
  return -0.5 * ((y_.array() - q.mu[0]).square().sum() + n * ssq) -
         0.5 * n * std::log(2 * std::numbers::pi);
}

GradientEstimate expectation_gradient(const LikelihoodModel& model, const VariationalGaussian& q,
                                      int draws, Rng& rng, EstimatorKind kind) {
  if (draws < 1) throw DomainError("need at least one Monte Carlo draw");
  if (q.size() != model.dim()) throw ShapeError("variational dimension differs from the model");
  const Index n = q.size();
  const Vector sigma = q.sigma();
  Vector mean = Vector::Zero(2 * n), m2 = Vector::Zero(2 * n);
  Vector eps(n), sample(2 * n);
  for (int s = 0; s < draws; ++s) {
    for (Index i = 0; i < n; ++i) eps[i] = rng.std_normal();
    const Vector theta = q.mu + sigma.cwiseProduct(eps);
    if (kind == EstimatorKind::reparam) {
      const Vector g = model.grad_log_likelihood(theta);
      if (!g.allFinite()) throw ModelError("non-finite likelihood gradient");
      sample.head(n) = g;
      sample.tail(n) = g.cwiseProduct(eps).cwiseProduct(sigma);
    } else {
      const Real f = model.log_likelihood(theta);
      if (!std::isfinite(f)) throw ModelError("non-finite log-likelihood");
      // ∇_μ log q = ε/σ, ∇_{log σ} log q = ε² - 1
      sample.head(n) = f * eps.cwiseQuotient(sigma);
      sample.tail(n) = f * (eps.array().square() - 1).matrix();
    }
    const Vector delta = sample - mean;
    mean += delta / (s + 1);
    m2.array() += delta.array() * (sample - mean).array();
  }
  Vector se = Vector::Zero(2 * n);
  if (draws > 1) se = (m2 / (draws - 1) / draws).cwiseSqrt();
  return {mean, se};
}

ElboEstimate elbo(const VariationalGaussian& q, const LikelihoodModel& model,
                  const VariationalGaussian& prior, int draws, Rng& rng, EstimatorKind kind) {
  if (draws < 1) throw DomainError("need at least one Monte Carlo draw");
  check_same_size(q, prior);
  // Separate child streams keep the value and the gradient draws independent.
  Rng value_rng = rng.split(rng.next());
  const Vector sigma = q.sigma();
  Real mean = 0, m2 = 0;
  Vector theta(q.size());
  for (int s = 0; s < draws; ++s) {
    for (Index i = 0; i < q.size(); ++i) theta[i] = q.mu[i] + sigma[i] * value_rng.std_normal();
    const Real f = model.log_likelihood(theta);
    if (!std::isfinite(f)) throw ModelError("non-finite log-likelihood");
    const Real delta = f - mean;
    mean += delta / (s + 1);
    m2 += delta * (f - mean);
  }
  const GradientEstimate g = expectation_gradient(model, q, draws, rng, kind);
  ElboEstimate out;
  out.value = mean - kl_gaussians(q, prior);
  out.std_error = draws > 1 ? std::sqrt(m2 / (draws - 1) / draws) : 0.0;
  out.grad = g.mean - kl_gradient(q, prior);
  out.grad_std_error = g.std_error;
  return out;
}

Real elbo_exact(const VariationalGaussian& q, const ConjugateGaussianModel& model,
                const VariationalGaussian& prior) {
  return model.expected_log_likelihood(q) - kl_gaussians(q, prior);
}

ViResult vi_fit(const LikelihoodModel& model, const VariationalGaussian& prior,
                VariationalGaussian init, const ViConfig& config, Rng& rng) {
  if (config.steps < 1) throw DomainError("vi_fit: steps must be positive");
  check_same_size(init, prior);
  if (init.size() != model.dim()) throw ShapeError("vi_fit: variational dimension differs from the model");
  ViResult result{std::move(init), {}};
  Vector phi = pack(result.q);
  optim::Optimizer opt(config.method, phi.size(), config.params);
  for (long k = 0; k < config.steps; ++k) {
    Real last_value = 0;
    const optim::GradientFn neg_grad = [&](const Vector& p) {
      const ElboEstimate e = elbo(unpack(p), model, prior, config.draws, rng, config.kind);
      last_value = e.value;
      return Vector(-e.grad);
    };
    try {
      opt.step(phi, neg_grad, k, config.schedule);
    } catch (const DivergenceError& e) {
      throw ViDiverged(e.what(), k, result.elbo_trace);
    } catch (const ModelError& e) {
      throw ViDiverged(e.what(), k, result.elbo_trace);
    }
    if (!phi.allFinite() || !std::isfinite(last_value))
      throw ViDiverged("variational parameters diverged", k, result.elbo_trace);
    const Vector sd = unpack(phi).sigma();
    if (!sd.allFinite() || sd.minCoeff() <= 0)
      throw ViDiverged("variational scale collapsed or overflowed", k, result.elbo_trace);
    result.elbo_trace.push_back(last_value);
  }
  result.q = unpack(phi);
  return result;
}

}  // namespace bayesdl::bayes
