#include "bayesdl/bayes/dropout.hpp"

#include <cmath>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/linalg.hpp"

namespace bayesdl::bayes {

namespace {

void check_keep(Real p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("keep probability must lie in [0, 1]");
}

}  // namespace

Real DropoutSpec::keep_for(std::size_t layer) const {
  if (keep.empty()) return 1.0;
  const Real p = keep.size() == 1 ? keep.front() : keep.at(layer);
  check_keep(p);
  return p;
}

Matrix apply_dropout(const Matrix& X, Real p, Rng& rng) {
  check_keep(p);
  Matrix out(X.rows(), X.cols());
  for (Index j = 0; j < X.cols(); ++j)
    for (Index i = 0; i < X.rows(); ++i) out(i, j) = rng.bernoulli(p) ? X(i, j) : 0.0;
  return out;
}

Matrix gprior_scale(const Matrix& X) {
  return X.rowwise().norm().asDiagonal();
}

Real dropout_marginal_objective(const Matrix& W, const Matrix& X, const Matrix& Y, Real p) {
  check_keep(p);
  if (W.cols() != X.rows() || Y.rows() != W.rows() || Y.cols() != X.cols())
    throw ShapeError("dropout objective: shapes are not conformable");
  const Matrix gamma = gprior_scale(X);
  return (Y - p * W * X).squaredNorm() + p * (1 - p) * (W * gamma).squaredNorm();
}

MonteCarloEstimate dropout_mc_objective(const Matrix& W, const Matrix& X, const Matrix& Y, Real p,
                                        int draws, Rng& rng) {
  check_keep(p);
  if (draws < 2) throw DomainError("need at least two Monte Carlo draws");
  if (W.cols() != X.rows() || Y.rows() != W.rows() || Y.cols() != X.cols())
    throw ShapeError("dropout objective: shapes are not conformable");
  Real mean = 0, m2 = 0;
  for (int s = 0; s < draws; ++s) {
    const Real v = (Y - W * apply_dropout(X, p, rng)).squaredNorm();
    const Real delta = v - mean;
    mean += delta / (s + 1);
    m2 += delta * (v - mean);
  }
  const Real var = m2 / (draws - 1);
  return {mean, std::sqrt(var / draws)};
}

Vector gprior_ridge_solve(const Matrix& X, const Vector& y, Real p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("gprior ridge: keep probability must lie in (0, 1]");
  if (y.size() != X.cols()) throw ShapeError("gprior ridge: y length must equal observation count");
  const Vector gamma2 = X.rowwise().squaredNorm();
  Matrix A = p * p * X * X.transpose();
  A.diagonal() += p * (1 - p) * gamma2;
  return spd_solve(A, (p * X * y).eval());
}

Real gprior_ridge_objective(const Matrix& X, const Vector& y, const Vector& w, Real p) {
  const Vector gamma2 = X.rowwise().squaredNorm();
  return (y - p * X.transpose() * w).squaredNorm() +
         p * (1 - p) * (gamma2.array() * w.array().square()).sum();
}

Vector gprior_ridge_gradient(const Matrix& X, const Vector& y, const Vector& w, Real p) {
  const Vector gamma2 = X.rowwise().squaredNorm();
  return -2 * p * X * (y - p * X.transpose() * w) +
         (2 * p * (1 - p) * gamma2.array() * w.array()).matrix();
}

PredictiveMoments mc_dropout_predict(const nnet::Network& net, const DropoutSpec& spec,
                                     const Matrix& X, int samples, Rng& rng) {
  if (samples < 2) throw DomainError("mc_dropout_predict needs at least two samples");
  if (X.rows() != net.input_dim()) throw ShapeError("mc_dropout_predict: input dimension mismatch");
  PredictiveMoments out{Matrix::Zero(net.output_dim(), X.cols()),
                        Matrix::Zero(net.output_dim(), X.cols())};
  Matrix m2 = Matrix::Zero(net.output_dim(), X.cols());
  for (int s = 0; s < samples; ++s) {
    Matrix z = X;
    for (std::size_t l = 0; l < net.depth(); ++l) {
      const auto& layer = net.layer(l);
      const Real p = spec.keep_for(l);
      Matrix pre = layer.W * (p < 1.0 ? apply_dropout(z, p, rng) : z);
      pre.colwise() += layer.b;
      z = nnet::activate(layer.act, pre);
    }
    const Matrix delta = z - out.mean;
    out.mean += delta / static_cast<Real>(s + 1);
    m2.array() += delta.array() * (z - out.mean).array();
  }
  out.variance = m2 / static_cast<Real>(samples - 1);
  return out;
}

}  // namespace bayesdl::bayes
