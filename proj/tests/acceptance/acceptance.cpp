// Acceptance checks: prints one PASS/FAIL line per criterion, exits nonzero on any failure.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "bayesdl/bayes/dropout.hpp"
#include "bayesdl/bayes/ensemble.hpp"
#include "bayesdl/bayes/variational.hpp"
#include "bayesdl/cli/experiments.hpp"
#include "bayesdl/cli/pipeline.hpp"
#include "bayesdl/core/identities.hpp"
#include "bayesdl/core/linalg.hpp"
#include "bayesdl/core/rng.hpp"
#include "bayesdl/data/metrics.hpp"
#include "bayesdl/data/synth.hpp"
#include "bayesdl/geom/arrangement.hpp"
#include "bayesdl/geom/ball.hpp"
#include "bayesdl/nnet/loss.hpp"
#include "bayesdl/nnet/network.hpp"
#include "bayesdl/shallow/autoencoder.hpp"
#include "bayesdl/shallow/factor.hpp"
#include "bayesdl/shallow/pca.hpp"
#include "bayesdl/shallow/sir.hpp"

using namespace bayesdl;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Matrix gaussian(Index r, Index c, Rng& rng) {
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = rng.std_normal();
  return m;
}

Real sample_variance(const Vector& v) {
  return (v.array() - v.mean()).square().sum() / static_cast<Real>(v.size() - 1);
}

void dcg_values(Outcome& o) {
  const Real first = data::dcg_at_k("FR", {"FR", "US", "DE", "NDF", "IT"});
  const Real second = data::dcg_at_k("FR", {"US", "FR", "DE", "NDF", "IT"});
  o.detail << "first=" << first << " second=" << second;
  o.require(first == 1.0, "first position");
  o.require(std::abs(second - 0.6309) <= 1e-4, "second position");
}

void seven_regions(Outcome& o) {
  Matrix W(3, 2);
  W << 1, 0, 0, 1, 1, 1;
  Vector b(3);
  b << 0, -1, -3;
  const nnet::Network net(2, {nnet::Layer{W, b, nnet::Activation::relu}});
  const Index relu = geom::relu_regions(net);
  o.detail << "relu=" << relu << " counts=";
  o.require(relu == 7, "three neurons give seven regions");
  Rng rng(7);
  const Index expected[] = {2, 4, 7, 11, 16, 22};
  for (Index n = 1; n <= 6; ++n) {
    const auto arr = geom::random_generic_lines(n, rng);
    const Index grid = geom::count_regions(arr, geom::RegionMethod::grid);
    const Index oracle = geom::count_regions(arr, geom::RegionMethod::oracle);
    o.detail << grid << (n < 6 ? "," : "");
    o.require(grid == oracle && grid == expected[n - 1], std::to_string(n) + " lines");
  }
}

void dropout_equivalence(Outcome& o) {
  Rng rng(3);
  Real worst = 0;
  for (Real p : {0.2, 0.5, 0.8}) {
    const Matrix W = gaussian(3, 8, rng), X = gaussian(8, 20, rng), Y = gaussian(3, 20, rng);
    const Real closed = bayes::dropout_marginal_objective(W, X, Y, p);
    const auto mc = bayes::dropout_mc_objective(W, X, Y, p, 100000, rng);
    const Real rel = std::abs(mc.mean - closed) / closed;
    worst = std::max(worst, rel);
    o.require(rel < 0.005, "p=" + std::to_string(p));
  }
  Real grad = 0;
  for (Real p : {0.2, 0.5, 0.8}) {
    const Matrix X = gaussian(8, 20, rng);
    const Vector y = gaussian(20, 1, rng);
    const Vector w = bayes::gprior_ridge_solve(X, y, p);
    grad = std::max(grad, bayes::gprior_ridge_gradient(X, y, w, p).norm());
  }
  o.require(grad < 1e-8, "ridge stationarity");
  o.detail << "max_rel_err=" << worst << " max_grad_norm=" << grad;
}

void gradient_fidelity(Outcome& o) {
  using nnet::Activation;
  struct Case {
    const char* name;
    Index input;
    std::vector<nnet::LayerSpec> layers;
    nnet::LossSpec loss;
  };
  const std::vector<Case> corpus = {
      {"tanh-2-2-softmax", 2, {{2, Activation::tanh}, {2, Activation::tanh}, {2, Activation::softmax}},
       {nnet::LossKind::cross_entropy, {}}},
      {"relu-8-8-softmax", 48, {{8, Activation::relu}, {8, Activation::relu}, {12, Activation::softmax}},
       {nnet::LossKind::cross_entropy, {nnet::PenaltyKind::l2, 0.01}}},
      {"linear", 4, {{1, Activation::identity}}, {}},
      {"sigmoid-l2", 3, {{5, Activation::sigmoid}, {2, Activation::identity}}, {nnet::LossKind::l2, {nnet::PenaltyKind::l2, 0.1}}},
      {"deep-relu", 3, {{6, Activation::relu}, {6, Activation::relu}, {6, Activation::relu}, {2, Activation::identity}}, {}},
  };
  Rng rng(4);
  Real worst = 0;
  for (const auto& c : corpus) {
    const auto net = nnet::make_network(c.input, c.layers, rng);
    const Matrix X = gaussian(c.input, 10, rng);
    Matrix Y;
    if (c.loss.loss == nnet::LossKind::cross_entropy) {
      std::vector<int> labels;
      for (int i = 0; i < 10; ++i) labels.push_back(i % static_cast<int>(net.output_dim()));
      Y = nnet::one_hot_labels(labels, net.output_dim());
    } else {
      Y = gaussian(net.output_dim(), 10, rng);
    }
    const Real err = nnet::grad_check(net, X, Y, c.loss);
    worst = std::max(worst, err);
    o.require(err < 1e-5, c.name);
  }
  o.detail << "max_rel_err=" << worst;
}

void shallow_oracles(Outcome& o) {
  Rng rng(5);
  Vector scales(5);
  scales << 3, 2, 0.6, 0.4, 0.2;
  const Matrix Q = gaussian(5, 5, rng).householderQr().householderQ();
  const Matrix X = Q * scales.asDiagonal() * gaussian(5, 200, rng);
  const auto pca = shallow::pca_fit(X, 2);
  const Real pca_err = shallow::pca_reconstruction_error(pca, X);
  const auto ae = shallow::autoencoder_fit(X, {});
  const Real ratio = ae.reconstruction_error / pca_err;
  o.require(ratio < 1.01, "autoencoder vs PCA");

  const Matrix Z = gaussian(7, 50, rng);
  const Svd<Real> s = svd(Z);
  const Real ey = s.S.tail(4).squaredNorm();
  const auto fm = shallow::factor_fit(Z, 3, 0.0, shallow::FactorNorm::l2);
  const Real gap = std::abs((Z - fm.weights * fm.factors).squaredNorm() - ey);
  o.require(gap < 1e-6, "factor vs truncated SVD");

  const Matrix XS = gaussian(4, 5000, rng);
  Vector y = XS.row(0).transpose();
  for (Index i = 0; i < y.size(); ++i) y[i] += 0.1 * rng.std_normal();
  const auto sir = shallow::sir_fit(XS, y, 10, 1);
  const Vector d = sir.directions.col(0);
  const Real angle = std::acos(std::min(1.0, std::abs(d[0]) / d.norm())) * 180 / M_PI;
  o.require(angle < 5.0, "SIR direction");
  o.detail << "ae/pca=" << ratio << " factor_gap=" << gap << " sir_angle_deg=" << angle;
}

void vi_recovery(Outcome& o) {
  Rng rng(6);
  Vector y(50);
  for (Index i = 0; i < 50; ++i) y[i] = 1.5 + rng.std_normal();
  const bayes::ConjugateGaussianModel model(y);
  const bayes::VariationalGaussian prior{Vector::Zero(1), Vector::Zero(1)};
  bayes::ViConfig cfg;
  cfg.steps = 3000;
  cfg.schedule = {0.05, std::log(1000.0) / 3000};
  const auto fit = bayes::vi_fit(model, prior, prior, cfg, rng);
  const auto post = model.posterior(prior);
  const Real kl = bayes::kl_gaussians(fit.q, post);
  o.require(kl < 1e-3, "KL to exact posterior");
  const Real decomposition =
      std::abs(bayes::elbo_exact(fit.q, model, prior) + kl - model.log_evidence(prior));
  o.require(decomposition < 1e-6, "ELBO + KL = log evidence");

  const bayes::FunctionModel square(
      1, [](const Vector& t) { return t[0] * t[0]; }, [](const Vector& t) { return Vector::Constant(1, 2 * t[0]); });
  const bayes::VariationalGaussian q{Vector::Constant(1, 0.7), Vector::Zero(1)};
  const auto sc = bayes::expectation_gradient(square, q, 10000, rng, bayes::EstimatorKind::score);
  const auto rp = bayes::expectation_gradient(square, q, 10000, rng, bayes::EstimatorKind::reparam);
  const Real combined = std::hypot(sc.std_error[0], rp.std_error[0]);
  o.require(std::abs(sc.mean[0] - 1.4) < 3 * combined, "score estimator");
  o.require(std::abs(rp.mean[0] - 1.4) < 3 * combined, "reparam estimator");
  o.detail << "kl=" << kl << " decomposition_err=" << decomposition << " score=" << sc.mean[0]
           << " reparam=" << rp.mean[0] << " analytic=1.4";
}

void optimizer_battery(Outcome& o) {
  for (const auto& run : cli::quadratic_battery(5, 10.0, 200))
    o.require(run.monotone && run.objective.back() < run.objective.front(), std::string(optim::to_string(run.method)));
  const Real newton = cli::newton_quadratic_error(6, 50.0);
  o.require(newton < 1e-8, "Newton one-step quadratic");
  const auto rb = cli::newton_rosenbrock(100);
  const Real rb_err = (rb.x - Vector::Ones(2)).cwiseAbs().maxCoeff();
  o.require(rb.converged && rb.iterations <= 100 && rb_err < 1e-6, "Rosenbrock");
  const Real cycle = cli::minibatch_cycle_error(1);
  o.require(cycle < 1e-12, "mini-batch cycle average");
  o.detail << "newton_err=" << newton << " rosenbrock_iters=" << rb.iterations << " cycle_err=" << cycle;
}

void ball_geometry(Outcome& o) {
  Rng rng(8);
  for (Index p : {2, 50, 100, 400}) {
    const Index n = 10000;
    const Vector x = geom::ball_sample({p, 1.0}, n, rng).row(0).transpose();
    const Vector sq = x.array().square();
    const Real se = std::sqrt(sample_variance(sq) / n);
    const Real z = std::abs(sq.mean() - 1.0 / (p + 2)) / se;
    o.require(z < 3, "variance p=" + std::to_string(p));
    o.detail << "p" << p << "_z=" << std::setprecision(3) << z << " ";
  }
  Rng a(9), b(9);
  const Real ks400 = geom::maxwell_check(400, 10000, a);
  const Real ks10 = geom::maxwell_check(10, 10000, b);
  o.require(ks400 < 0.05, "KS at p=400");
  o.require(ks400 < ks10, "KS decreasing");
  o.detail << "ks10=" << ks10 << " ks400=" << ks400;
}

void pipeline(Outcome& o) {
  const auto d = data::synth_airbnb(100000, 2024);
  const auto prior = data::destination_prior();
  std::map<std::string, Real> freq;
  for (const auto& y : d.truth) freq[y] += 1.0 / static_cast<Real>(d.truth.size());
  Real worst = 0;
  for (std::size_t c = 0; c < prior.labels.size(); ++c)
    worst = std::max(worst, std::abs(freq[prior.labels[c]] - prior.proportions[static_cast<Index>(c)]));
  o.require(worst <= 0.005, "class priors");
  const Real age_missing = d.users.column("age").missing_fraction();
  o.require(std::abs(age_missing - 0.42) <= 0.005, "age missingness");

  const auto report = cli::train_pipeline(d.users, &d.sessions, cli::TrainOptions{});
  o.require(report.trace.size() == 20, "20 epochs traced");
  bool traced = true;
  for (const auto& row : report.trace) traced = traced && row.metric_name == "ndcg@5";
  o.require(traced, "per-epoch NDCG trace");
  o.require(report.holdout_ndcg > report.constant_ndcg, "beats constant ranker");
  o.require(report.holdout_ndcg > report.uniform_ndcg, "beats uniform ranker");
  o.detail << "max_prior_dev=" << worst << " age_missing=" << age_missing << " ndcg=" << report.holdout_ndcg
           << " constant=" << report.constant_ndcg << " uniform=" << report.uniform_ndcg;
}

void ensemble_jensen(Outcome& o) {
  Rng rng(10);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index K = 2 + trial % 5;
    const Matrix y = gaussian(3, 6, rng);
    const Matrix onehot = nnet::one_hot_labels({0, 1, 2, 2, 1, 0}, 3);
    std::vector<Matrix> preds, probs;
    Real l2 = 0, ce = 0;
    for (Index k = 0; k < K; ++k) {
      preds.push_back(gaussian(3, 6, rng));
      probs.push_back(nnet::activate(nnet::Activation::softmax, gaussian(3, 6, rng)));
      l2 += nnet::l2_loss(preds.back(), y) / K;
      ce += nnet::cross_entropy_loss(probs.back(), onehot) / K;
    }
    if (nnet::l2_loss(bayes::ensemble_average(preds), y) > l2 + 1e-12) ++violations;
    if (nnet::cross_entropy_loss(bayes::ensemble_average(probs), onehot) > ce + 1e-12) ++violations;
  }
  o.require(violations == 0, "Jensen bound");
  o.detail << "violations=" << violations << "/2000";
}

void identity_sweep(Outcome& o) {
  Rng rng(11);
  Real worst = 0;
  for (auto kind : {IdentityKind::product, IdentityKind::max, IdentityKind::product_squared, IdentityKind::max_sum}) {
    for (int s = 0; s < 10000; ++s) {
      Vector x(kind == IdentityKind::max_sum ? 1 + static_cast<Index>(rng.uniform_index(10)) : 2);
      for (Index i = 0; i < x.size(); ++i) x[i] = 10 * rng.uniform01() - 5;
      const auto c = verify_identity(kind, x);
      worst = std::max(worst, std::abs(c.lhs - c.rhs) / (1 + std::abs(c.lhs)));
    }
  }
  o.require(worst <= 1e-9, "identities");
  o.detail << "max_rel_err=" << worst;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"DCG worked values", dcg_values},
      {"seven-region fact and region counts", seven_regions},
      {"dropout / g-prior ridge equivalence", dropout_equivalence},
      {"gradient fidelity", gradient_fidelity},
      {"shallow-learner oracles", shallow_oracles},
      {"variational recovery", vi_recovery},
      {"optimizer battery", optimizer_battery},
      {"ball geometry", ball_geometry},
      {"end-to-end pipeline", pipeline},
      {"ensemble Jensen bound", ensemble_jensen},
      {"identity sweep", identity_sweep},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << ". " << criteria[i].first << " (" << std::fixed
              << std::setprecision(1) << secs << " s) " << std::defaultfloat << std::setprecision(6)
              << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
