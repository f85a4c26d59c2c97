#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/bayes/dropout.hpp"
#include "bayesdl/bayes/ensemble.hpp"
#include "bayesdl/bayes/variational.hpp"
#include "bayesdl/core/rng.hpp"
#include "bayesdl/nnet/loss.hpp"
#include "bayesdl/nnet/network.hpp"

using namespace bayesdl;
using namespace bayesdl::bayes;

namespace {

Matrix gaussian(Index r, Index c, Rng& rng) {
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = rng.std_normal();
  return m;
}

VariationalGaussian scalar_q(Real mu, Real sigma) {
  return {Vector::Constant(1, mu), Vector::Constant(1, std::log(sigma))};
}

FunctionModel square_model() {
  return FunctionModel(
      1, [](const Vector& t) { return t[0] * t[0]; },
      [](const Vector& t) { return Vector::Constant(1, 2 * t[0]); });
}

}  // namespace

TEST(Dropout, DegenerateKeepProbabilities) {
  Rng rng(1);
  const Matrix X = gaussian(4, 5, rng);
  EXPECT_EQ(apply_dropout(X, 1.0, rng), X);
  EXPECT_EQ(apply_dropout(X, 0.0, rng), Matrix::Zero(4, 5));
  EXPECT_THROW(apply_dropout(X, 1.2, rng), DomainError);
}

TEST(Dropout, KeptFraction) {
  Rng rng(2);
  const Matrix masked = apply_dropout(Matrix::Ones(100, 1000), 0.3, rng);
  EXPECT_NEAR(masked.sum() / 1e5, 0.3, 0.005);
}

TEST(Dropout, GammaHandExample) {
  Matrix X(2, 2);
  X << 3, 4, 1, 0;
  const Matrix g = gprior_scale(X);
  EXPECT_DOUBLE_EQ(g(0, 0), 5);
  EXPECT_DOUBLE_EQ(g(1, 1), 1);
  EXPECT_EQ(g(0, 1), 0.0);
}

TEST(Dropout, KeepOneIsLeastSquares) {
  Rng rng(3);
  const Matrix W = gaussian(2, 3, rng), X = gaussian(3, 6, rng), Y = gaussian(2, 6, rng);
  EXPECT_DOUBLE_EQ(dropout_marginal_objective(W, X, Y, 1.0), (Y - W * X).squaredNorm());
  EXPECT_THROW(dropout_marginal_objective(W, X, gaussian(3, 6, rng), 0.5), ShapeError);
}

TEST(Dropout, MonteCarloMatchesClosedForm) {
  Rng rng(4);
  const Matrix W = gaussian(3, 8, rng), X = gaussian(8, 10, rng), Y = gaussian(3, 10, rng);
  const Real closed = dropout_marginal_objective(W, X, Y, 0.6);
  const auto mc = dropout_mc_objective(W, X, Y, 0.6, 100000, rng);
  EXPECT_LT(std::abs(mc.mean - closed) / closed, 0.005);
  for (Real p : {0.2, 0.5, 0.8}) {
    const Real c = dropout_marginal_objective(W, X, Y, p);
    const auto e = dropout_mc_objective(W, X, Y, p, 20000, rng);
    EXPECT_LT(std::abs(e.mean - c), 3 * e.std_error) << "p = " << p;
  }
}

TEST(GPriorRidge, KeepOneIsOls) {
  Rng rng(5);
  const Matrix X = gaussian(3, 20, rng);
  const Vector y = gaussian(20, 1, rng);
  const Vector ols = X.transpose().colPivHouseholderQr().solve(y);
  EXPECT_LT((gprior_ridge_solve(X, y, 1.0) - ols).norm(), 1e-10);
}

TEST(GPriorRidge, OrthonormalRowsCancelScaling) {
  Rng rng(6);
  const Matrix Q = gaussian(6, 3, rng).householderQr().householderQ() * Matrix::Identity(6, 3);
  const Matrix X = Q.transpose();
  const Vector y = gaussian(6, 1, rng);
  for (Real p : {0.3, 0.7}) EXPECT_LT((gprior_ridge_solve(X, y, p) - X * y).norm(), 1e-12);
}

TEST(GPriorRidge, StationaryAndMatchesGradientDescent) {
  Rng rng(7);
  const Matrix X = gaussian(4, 30, rng);
  const Vector y = gaussian(30, 1, rng);
  const Real p = 0.5;
  const Vector w = gprior_ridge_solve(X, y, p);
  EXPECT_LT(gprior_ridge_gradient(X, y, w, p).norm(), 1e-8);
  Vector v = Vector::Zero(4);
  for (int i = 0; i < 20000; ++i) v -= 0.002 * gprior_ridge_gradient(X, y, v, p);
  EXPECT_LT((v - w).norm(), 1e-4);
  EXPECT_LE(gprior_ridge_objective(X, y, w, p), gprior_ridge_objective(X, y, v, p) + 1e-12);
  EXPECT_THROW(gprior_ridge_solve(Matrix::Zero(2, 5), Vector::Zero(5), 0.5), ConditioningError);
}

TEST(McDropout, DeterministicWhenKeepingEverything) {
  Rng rng(8);
  const auto net = nnet::make_network(3, {{4, nnet::Activation::tanh}, {2, nnet::Activation::identity}}, rng);
  const Matrix X = gaussian(3, 5, rng);
  const auto m = mc_dropout_predict(net, DropoutSpec{{1.0}}, X, 10, rng);
  EXPECT_EQ(m.variance.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT((m.mean - nnet::predict(net, X)).norm(), 1e-12);
}

TEST(McDropout, LinearNetMeanIsScaledForward) {
  Rng rng(9);
  const auto net = nnet::make_network(3, {{2, nnet::Activation::identity}}, rng);
  const Matrix X = gaussian(3, 4, rng);
  const int S = 100000;
  const auto m = mc_dropout_predict(net, DropoutSpec{{0.5}}, X, S, rng);
  Matrix expected = 0.5 * net.layer(0).W * X;
  expected.colwise() += net.layer(0).b;
  EXPECT_GE(m.variance.minCoeff(), 0.0);
  for (Index i = 0; i < expected.rows(); ++i)
    for (Index j = 0; j < expected.cols(); ++j)
      EXPECT_LT(std::abs(m.mean(i, j) - expected(i, j)), 4 * std::sqrt(m.variance(i, j) / S) + 1e-12);
}

TEST(Kl, Examples) {
  EXPECT_DOUBLE_EQ(kl_gaussians(scalar_q(0.3, 2), scalar_q(0.3, 2)), 0.0);
  EXPECT_DOUBLE_EQ(kl_gaussians(scalar_q(1, 1), scalar_q(0, 1)), 0.5);
  Rng rng(10);
  for (int i = 0; i < 1000; ++i) {
    VariationalGaussian a{gaussian(3, 1, rng), gaussian(3, 1, rng)};
    VariationalGaussian b{gaussian(3, 1, rng), gaussian(3, 1, rng)};
    EXPECT_GE(kl_gaussians(a, b), 0.0);
  }
  EXPECT_THROW(kl_gaussians(VariationalGaussian::standard(2), VariationalGaussian::standard(3)), ShapeError);
}

TEST(Kl, GradientMatchesFiniteDifference) {
  const VariationalGaussian q = {Vector::Constant(1, 0.4), Vector::Constant(1, -0.3)};
  const VariationalGaussian p = scalar_q(-0.2, 1.5);
  const Vector g = kl_gradient(q, p);
  const Real h = 1e-6;
  auto shifted = [&](int which, Real d) {
    VariationalGaussian s = q;
    (which == 0 ? s.mu : s.log_sigma)[0] += d;
    return kl_gaussians(s, p);
  };
  EXPECT_NEAR(g[0], (shifted(0, h) - shifted(0, -h)) / (2 * h), 1e-8);
  EXPECT_NEAR(g[1], (shifted(1, h) - shifted(1, -h)) / (2 * h), 1e-8);
}

TEST(Elbo, ConjugateDecomposition) {
  Rng rng(11);
  Vector y(20);
  for (Index i = 0; i < y.size(); ++i) y[i] = 1.5 + rng.std_normal();
  const ConjugateGaussianModel model(y);
  const auto prior = scalar_q(0, 1);
  const auto post = model.posterior(prior);
  EXPECT_NEAR(post.mu[0], y.sum() / 21, 1e-14);
  EXPECT_NEAR(post.sigma()[0], std::sqrt(1.0 / 21), 1e-14);
  EXPECT_NEAR(elbo_exact(post, model, prior), model.log_evidence(prior), 1e-10);
  for (int i = 0; i < 50; ++i) {
    const auto q = scalar_q(rng.std_normal(), std::exp(rng.std_normal()));
    const Real e = elbo_exact(q, model, prior);
    EXPECT_LE(e, model.log_evidence(prior) + 1e-12);
    EXPECT_NEAR(e + kl_gaussians(q, post), model.log_evidence(prior), 1e-6);
  }
}

TEST(Elbo, MonteCarloIsUnbiasedAroundExact) {
  Rng rng(12);
  const ConjugateGaussianModel model(Vector::LinSpaced(10, -1, 2));
  const auto prior = scalar_q(0, 1);
  const auto q = scalar_q(0.3, 0.5);
  const auto est = elbo(q, model, prior, 20000, rng, EstimatorKind::reparam);
  EXPECT_LT(std::abs(est.value - elbo_exact(q, model, prior)), 4 * est.std_error);
}

TEST(Elbo, SquareToyGradientBothEstimators) {
  const auto model = square_model();
  const auto q = scalar_q(1.5, 1.0);
  Rng rng(13);
  const auto s = expectation_gradient(model, q, 200000, rng, EstimatorKind::score);
  const auto r = expectation_gradient(model, q, 200000, rng, EstimatorKind::reparam);
  EXPECT_NEAR(s.mean[0], 3.0, 4 * s.std_error[0]);
  EXPECT_NEAR(r.mean[0], 3.0, 4 * r.std_error[0]);
  const Real combined = std::sqrt(s.std_error[0] * s.std_error[0] + r.std_error[0] * r.std_error[0]);
  EXPECT_LT(std::abs(s.mean[0] - r.mean[0]), 3 * combined);
}

TEST(Elbo, ReparamHasLowerVariance) {
  const auto model = square_model();
  const auto q = scalar_q(1.5, 1.0);
  Rng rng(14);
  const auto s = expectation_gradient(model, q, 10000, rng, EstimatorKind::score);
  const auto r = expectation_gradient(model, q, 10000, rng, EstimatorKind::reparam);
  EXPECT_LE(r.std_error[0], s.std_error[0]);
}

TEST(Elbo, NonFiniteLikelihoodIsModelError) {
  const FunctionModel bad(
      1, [](const Vector&) { return std::numeric_limits<Real>::infinity(); },
      [](const Vector&) { return Vector::Zero(1); });
  Rng rng(15);
  EXPECT_THROW(elbo(scalar_q(0, 1), bad, scalar_q(0, 1), 4, rng, EstimatorKind::score), ModelError);
}

TEST(ViFit, RecoversConjugatePosterior) {
  Rng rng(16);
  Vector y(50);
  for (Index i = 0; i < y.size(); ++i) y[i] = 1.5 + rng.std_normal();
  const ConjugateGaussianModel model(y);
  const auto prior = scalar_q(0, 1);
  ViConfig cfg;
  cfg.steps = 3000;
  cfg.schedule = {0.05, std::log(1000.0) / 3000};
  const auto fit = vi_fit(model, prior, prior, cfg, rng);
  EXPECT_LT(kl_gaussians(fit.q, model.posterior(prior)), 1e-3);
  EXPECT_EQ(fit.elbo_trace.size(), 3000u);
}

TEST(ViFit, NoDataReturnsPrior) {
  Rng rng(17);
  const ConjugateGaussianModel model(Vector(0));
  const auto prior = scalar_q(0.5, 2.0);
  ViConfig cfg;
  cfg.steps = 3000;
  cfg.schedule = {0.05, std::log(1000.0) / 3000};
  const auto fit = vi_fit(model, prior, scalar_q(-1, 0.5), cfg, rng);
  EXPECT_LT(kl_gaussians(fit.q, prior), 1e-3);
}

TEST(ViFit, HugeRateDiverges) {
  Rng rng(18);
  const ConjugateGaussianModel model(Vector::Ones(5));
  ViConfig cfg;
  cfg.steps = 100;
  cfg.method = optim::Method::sgd;
  cfg.schedule = {1e6, 0};
  EXPECT_THROW(vi_fit(model, scalar_q(0, 1), scalar_q(0, 1), cfg, rng), ViDiverged);
}

TEST(Ensemble, IdentityAndSymmetry) {
  Rng rng(19);
  const Matrix a = gaussian(2, 3, rng);
  EXPECT_EQ(ensemble_average({a}), a);
  EXPECT_LT((ensemble_average({a, a}) - a).norm(), 1e-15);
  EXPECT_THROW(ensemble_average({a, a}, Vector::Constant(2, 0.6)), DomainError);
  Vector w(2);
  w << 1.5, -0.5;
  EXPECT_THROW(ensemble_average({a, a}, w), DomainError);
  EXPECT_THROW(ensemble_average({a, gaussian(3, 3, rng)}), ShapeError);
}

TEST(Ensemble, ConvexLossJensen) {
  Rng rng(20);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index K = 2 + trial % 4;
    std::vector<Matrix> preds, probs;
    const Matrix y = gaussian(3, 4, rng);
    const Matrix onehot = nnet::one_hot_labels({0, 1, 2, 1}, 3);
    Real mean_l2 = 0, mean_ce = 0;
    for (Index k = 0; k < K; ++k) {
      preds.push_back(gaussian(3, 4, rng));
      Matrix logits = gaussian(3, 4, rng);
      probs.push_back(nnet::activate(nnet::Activation::softmax, logits));
      mean_l2 += nnet::l2_loss(preds.back(), y) / K;
      mean_ce += nnet::cross_entropy_loss(probs.back(), onehot) / K;
    }
    EXPECT_LE(nnet::l2_loss(ensemble_average(preds), y), mean_l2 + 1e-12);
    EXPECT_LE(nnet::cross_entropy_loss(ensemble_average(probs), onehot), mean_ce + 1e-12);
  }
}
