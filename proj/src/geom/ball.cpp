#include "bayesdl/geom/ball.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bayesdl/core/errors.hpp"

namespace bayesdl::geom {

Matrix ball_sample(const BallSpec& spec, Index n, Rng& rng) {
  if (spec.dim < 1) throw DomainError("ball dimension must be at least 1");
  if (!(spec.radius > 0)) throw DomainError("ball radius must be positive");
  if (n < 1) throw DomainError("need at least one sample");
  const Index p = spec.dim;
  Matrix out(p, n);
  for (Index j = 0; j < n; ++j) {
    Real norm = 0;
    do {
      for (Index i = 0; i < p; ++i) out(i, j) = rng.std_normal();
      norm = out.col(j).norm();
    } while (norm == 0);
    const Real r = spec.radius * std::pow(rng.uniform01(), 1.0 / static_cast<Real>(p));
    out.col(j) *= r / norm;
  }
  return out;
}

Vector project(const Matrix& samples, const Vector& w) {
  if (w.size() != samples.rows()) throw ShapeError("project: dimension mismatch");
  if (w.squaredNorm() == 0) throw DomainError("project: zero direction");
  return samples.transpose() * w;
}

Real normal_cdf(Real x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

Real disk_marginal_cdf(Real t) {
  if (t <= -1) return 0;
  if (t >= 1) return 1;
  return 0.5 + (t * std::sqrt(1 - t * t) + std::asin(t)) / std::numbers::pi;
}

Real ks_statistic(Vector sample, const std::function<Real(Real)>& cdf) {
  const Index n = sample.size();
  if (n == 0) throw DomainError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  Real d = 0;
  for (Index i = 0; i < n; ++i) {
    const Real f = cdf(sample[i]);
    d = std::max({d, static_cast<Real>(i + 1) / static_cast<Real>(n) - f,
                  f - static_cast<Real>(i) / static_cast<Real>(n)});
  }
  return d;
}

Real maxwell_check(Index p, Index n, Rng& rng) {
  if (p < 2) throw DomainError("maxwell_check: dimension must be at least 2");
  const Matrix y = ball_sample({p, std::sqrt(static_cast<Real>(p + 2))}, n, rng);
  return ks_statistic(y.row(0).transpose(), normal_cdf);
}

}  // namespace bayesdl::geom
