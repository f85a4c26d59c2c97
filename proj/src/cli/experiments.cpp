#include "bayesdl/cli/experiments.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "bayesdl/bayes/dropout.hpp"
#include "bayesdl/bayes/variational.hpp"
#include "bayesdl/cli/figure.hpp"
#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/format.hpp"
#include "bayesdl/core/identities.hpp"
#include "bayesdl/geom/arrangement.hpp"
#include "bayesdl/geom/ball.hpp"
#include "bayesdl/geom/cart.hpp"
#include "bayesdl/geom/dataset2d.hpp"
#include "bayesdl/nnet/loss.hpp"
#include "bayesdl/optim/train.hpp"

namespace bayesdl::cli {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  return out;
}

void record(RunDir& dir, const FigureFiles& files) {
  for (const auto& f : files) dir.file(f.filename().string());
}

/// Writes report.txt and echoes it to standard output.
void report(RunDir& dir, const std::string& text) {
  dir.write_text("report.txt", text);
  std::cout << text;
}

std::vector<Index> index_list(const Json& v) { return v.get<std::vector<Index>>(); }

Index positive(const Json& cfg, const std::string& key) {
  const auto v = cfg.at(key).get<Index>();
  if (v < 1) throw ConfigError("config key '" + key + "' must be positive");
  return v;
}

// --- ball -----------------------------------------------------------------

void experiment_ball(const Json& cfg, RunDir& dir) {
  const Index n = positive(cfg, "n");
  const Index eq_dim = positive(cfg, "equator_dim");
  const int bins = static_cast<int>(positive(cfg, "bins"));
  const Rng root(cfg.at("seed").get<std::uint64_t>());
  std::ostringstream rep;

  {
    Rng rng = root.split(1);
    const Matrix y = geom::ball_sample({eq_dim, 1.0}, n, rng);
    Vector w = Vector::Zero(eq_dim);
    w[0] = 1;
    if (eq_dim > 1) w[1] = 1;
    const Vector proj = geom::project(y, w);
    const Real frac = (proj.array().abs() > 0.5).cast<Real>().mean();
    record(dir, emit_histogram(dir.file("equator_projection.svg"), proj, bins,
                               "Projection of uniform ball samples, p = " + std::to_string(eq_dim)));
    rep << "equator_dim = " << eq_dim << "\nequator_fraction_above_0.5 = " << format_real(frac) << '\n';
  }

  {
    std::ofstream out = open_out(dir.file("marginal_variance.csv"));
    out << "p,sample_variance,theory,std_error,z\n";
    std::vector<Index> dims = index_list(cfg.at("marginal_dims"));
    for (Index p : index_list(cfg.at("variance_dims")))
      if (std::find(dims.begin(), dims.end(), p) == dims.end()) dims.push_back(p);
    for (Index p : dims) {
      if (p < 1) throw ConfigError("ball dimensions must be positive");
      Rng rng = root.split(100 + static_cast<std::uint64_t>(p));
      const Matrix y = geom::ball_sample({p, 1.0}, n, rng);
      const Vector x = y.row(0).transpose();
      const Real var = x.squaredNorm() / static_cast<Real>(n);
      const Vector sq = x.array().square();
      const Real se = std::sqrt((sq.array() - var).square().sum() / static_cast<Real>(n - 1) / static_cast<Real>(n));
      const Real theory = 1.0 / static_cast<Real>(p + 2);
      out << p << ',' << format_real(var) << ',' << format_real(theory) << ',' << format_real(se) << ','
          << format_real((var - theory) / se) << '\n';
      const auto marginal = index_list(cfg.at("marginal_dims"));
      if (std::find(marginal.begin(), marginal.end(), p) != marginal.end())
        record(dir, emit_histogram(dir.file("marginal_p" + std::to_string(p) + ".svg"), x, bins,
                                   "First-coordinate marginal, p = " + std::to_string(p)));
    }
  }

  {
    std::ofstream out = open_out(dir.file("maxwell_ks.csv"));
    out << "p,ks\n";
    for (Index p : index_list(cfg.at("ks_dims"))) {
      Rng rng = root.split(1000 + static_cast<std::uint64_t>(p));
      const Real ks = geom::maxwell_check(p, n, rng);
      out << p << ',' << format_real(ks) << '\n';
      rep << "ks_p" << p << " = " << format_real(ks) << '\n';
    }
    Rng rng = root.split(2);
    const Matrix disk = geom::ball_sample({2, 1.0}, n, rng);
    rep << "disk_marginal_ks = " << format_real(geom::ks_statistic(disk.row(0).transpose(), geom::disk_marginal_cdf))
        << '\n';
  }
  report(dir, rep.str());
}

// --- partition ------------------------------------------------------------

nnet::Network relu_net_from(const geom::Arrangement& arr) {
  const auto m = static_cast<Index>(arr.hyperplanes.size());
  Matrix W(m, 2);
  Vector b(m);
  for (Index k = 0; k < m; ++k) {
    W.row(k) = arr.hyperplanes[static_cast<std::size_t>(k)].w.transpose();
    b[k] = arr.hyperplanes[static_cast<std::size_t>(k)].b;
  }
  return nnet::Network(2, {{W, b, nnet::Activation::relu},
                           {Matrix::Ones(1, m), Vector::Zero(1), nnet::Activation::identity}});
}

Matrix prediction_raster(const std::function<int(const Vector&)>& predict, Real lo, Real hi, Index res) {
  Matrix out(res, res);
  Vector g(2);
  const Real step = (hi - lo) / static_cast<Real>(res - 1);
  for (Index i = 0; i < res; ++i)
    for (Index j = 0; j < res; ++j) {
      g << lo + static_cast<Real>(j) * step, lo + static_cast<Real>(i) * step;
      out(i, j) = predict(g);
    }
  return out;
}

void experiment_partition(const Json& cfg, RunDir& dir) {
  const Index neurons = positive(cfg, "neurons");
  const Index grid_res = positive(cfg, "grid_resolution");
  const Index raster_res = positive(cfg, "raster_resolution");
  const Index max_lines = positive(cfg, "max_lines");
  const Index data_n = positive(cfg, "dataset_n");
  const Index depth = positive(cfg, "cart_depth");
  const int epochs = static_cast<int>(positive(cfg, "net_epochs"));
  const Real noise = cfg.at("noise").get<Real>();
  const Real lr = cfg.at("learning_rate").get<Real>();
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const Rng root(seed);
  if (grid_res < 2 || raster_res < 2) throw ConfigError("grid resolutions must be at least 2");
  std::ostringstream rep;

  Rng line_rng = root.split(1);
  const geom::Arrangement arr = geom::random_generic_lines(neurons, line_rng);
  const nnet::Network net = relu_net_from(arr);
  const Index regions = geom::relu_regions(net, {-5, 5, grid_res});
  const Index oracle = geom::count_regions(arr, geom::RegionMethod::oracle);
  rep << "neurons = " << neurons << "\nregion_count = " << regions << "\noracle_count = " << oracle << '\n';
  {
    std::ofstream out = open_out(dir.file("neurons.csv"));
    out << "neuron,w1,w2,b\n";
    for (std::size_t k = 0; k < arr.hyperplanes.size(); ++k)
      out << k + 1 << ',' << format_real(arr.hyperplanes[k].w[0]) << ',' << format_real(arr.hyperplanes[k].w[1]) << ','
          << format_real(arr.hyperplanes[k].b) << '\n';
  }
  record(dir, emit_raster(dir.file("relu_regions.svg"), geom::region_raster(arr, {-5, 5, raster_res}), -5, 5,
                          std::to_string(neurons) + " ReLU neurons: " + std::to_string(regions) + " regions"));

  {
    std::ofstream out = open_out(dir.file("region_counts.csv"));
    out << "lines,grid,oracle\n";
    for (Index m = 1; m <= max_lines; ++m) {
      Rng rng = root.split(10 + static_cast<std::uint64_t>(m));
      const geom::Arrangement a = geom::random_generic_lines(m, rng);
      out << m << ',' << geom::count_regions(a, geom::RegionMethod::grid, {-5, 5, grid_res}) << ','
          << geom::count_regions(a, geom::RegionMethod::oracle) << '\n';
    }
  }

  std::ofstream acc = open_out(dir.file("tree_vs_network.csv"));
  acc << "dataset,model,train_accuracy\n";
  const Real lo = -4, hi = 4;
  for (geom::DatasetKind kind : {geom::DatasetKind::simple, geom::DatasetKind::circle, geom::DatasetKind::spiral}) {
    const std::string name = geom::to_string(kind);
    const geom::Dataset2D d = geom::gen_dataset2d(kind, data_n, noise, mix_seed(seed, 20 + static_cast<int>(kind)));
    record(dir, emit_scatter(dir.file("data_" + name + ".svg"), d.points, d.labels, name + " data"));

    const geom::CartTree tree = geom::cart_fit(d.points, d.labels, depth, 1);
    const Real tree_acc = geom::accuracy(geom::cart_predict(tree, d.points), d.labels);
    record(dir, emit_raster(dir.file("cart_" + name + ".svg"),
                            prediction_raster([&](const Vector& x) { return geom::cart_predict(tree, x); }, lo, hi,
                                              raster_res),
                            lo, hi, "CART depth " + std::to_string(depth) + ", " + name));

    Rng init = root.split(30 + static_cast<std::uint64_t>(kind));
    nnet::Network tanh_net = nnet::make_network(
        2, {{2, nnet::Activation::tanh}, {2, nnet::Activation::tanh}, {2, nnet::Activation::softmax}}, init);
    std::vector<int> y(static_cast<std::size_t>(data_n));
    for (Index i = 0; i < data_n; ++i) y[static_cast<std::size_t>(i)] = static_cast<int>(d.labels[i]);
    optim::TrainConfig tc;
    tc.epochs = epochs;
    tc.batch_size = data_n;
    tc.seed = mix_seed(seed, 40);
    tc.schedule = {lr, 0.0};
    const optim::TrainResult tr = optim::train(tanh_net, d.points, nnet::one_hot_labels(y, 2),
                                               {nnet::LossKind::cross_entropy, {}}, tc, optim::Method::adam);
    const auto net_predict = [&](const Vector& x) {
      const Matrix p = nnet::predict(tr.net, x);
      return p(1, 0) > p(0, 0) ? 1 : 0;
    };
    Vector net_pred(data_n);
    for (Index i = 0; i < data_n; ++i) net_pred[i] = net_predict(Vector(d.points.col(i)));
    const Real net_acc = geom::accuracy(net_pred, d.labels);
    record(dir, emit_raster(dir.file("tanh_" + name + ".svg"), prediction_raster(net_predict, lo, hi, raster_res), lo,
                            hi, "tanh 2-2-2 network, " + name));
    acc << name << ",cart," << format_real(tree_acc) << '\n' << name << ",tanh_net," << format_real(net_acc) << '\n';
    rep << name << "_cart_accuracy = " << format_real(tree_acc) << '\n'
        << name << "_tanh_accuracy = " << format_real(net_acc) << '\n';

    if (kind == geom::DatasetKind::circle) {
      const Vector anchor = d.points.col(0);
      record(dir, emit_raster(dir.file("tree_kernel.svg"), geom::kernel_map(tree, anchor, lo, hi, raster_res), lo, hi,
                              "Tree kernel support around the first circle point"));
    }
  }
  report(dir, rep.str());
}

// --- dropout-ridge --------------------------------------------------------

Matrix normal_matrix(Index r, Index c, Rng& rng) {
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = rng.std_normal();
  return m;
}

void experiment_dropout(const Json& cfg, RunDir& dir) {
  const auto keep = cfg.at("keep").get<std::vector<Real>>();
  const auto draws = static_cast<int>(positive(cfg, "draws"));
  const Index outputs = positive(cfg, "outputs"), features = positive(cfg, "features"),
              obs = positive(cfg, "observations");
  const Rng root(cfg.at("seed").get<std::uint64_t>());
  Rng data_rng = root.split(1);
  const Matrix W = normal_matrix(outputs, features, data_rng);
  const Matrix X = normal_matrix(features, obs, data_rng);
  const Matrix Y = normal_matrix(outputs, obs, data_rng);
  const Vector y = normal_matrix(obs, 1, data_rng).col(0);

  std::ostringstream rep;
  std::ofstream out = open_out(dir.file("dropout_marginal.csv"));
  out << "keep,analytic,monte_carlo,std_error,relative_error\n";
  std::ofstream ridge = open_out(dir.file("gprior_ridge.csv"));
  ridge << "keep,objective,gradient_norm\n";
  Series analytic{"closed form", {}, {}}, mc{"Monte Carlo", {}, {}};
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const Real p = keep[i];
    if (!(p > 0 && p <= 1)) throw ConfigError("keep probabilities must be in (0, 1]");
    Rng rng = root.split(100 + i);
    const Real exact = bayes::dropout_marginal_objective(W, X, Y, p);
    const bayes::MonteCarloEstimate est = bayes::dropout_mc_objective(W, X, Y, p, draws, rng);
    const Real rel = std::abs(est.mean - exact) / std::abs(exact);
    out << format_real(p) << ',' << format_real(exact) << ',' << format_real(est.mean) << ','
        << format_real(est.std_error) << ',' << format_real(rel) << '\n';
    analytic.x.push_back(p), analytic.y.push_back(exact);
    mc.x.push_back(p), mc.y.push_back(est.mean);
    rep << "keep_" << format_real(p) << "_relative_error = " << format_real(rel) << '\n';

    const Vector w = bayes::gprior_ridge_solve(X, y, p);
    const Real gnorm = bayes::gprior_ridge_gradient(X, y, w, p).norm();
    ridge << format_real(p) << ',' << format_real(bayes::gprior_ridge_objective(X, y, w, p)) << ','
          << format_real(gnorm) << '\n';
    rep << "keep_" << format_real(p) << "_ridge_gradient_norm = " << format_real(gnorm) << '\n';
  }
  record(dir, emit_lines(dir.file("dropout_marginal.svg"), {analytic, mc}, "Dropout objective: closed form vs masks",
                         "keep probability", "objective"));
  report(dir, rep.str());
}

// --- vi-toy ---------------------------------------------------------------

void experiment_vi(const Json& cfg, RunDir& dir) {
  const Index nobs = positive(cfg, "observations");
  const Rng root(cfg.at("seed").get<std::uint64_t>());
  const Real prior_sigma = cfg.at("prior_sigma").get<Real>();
  if (!(prior_sigma > 0)) throw ConfigError("config key 'prior_sigma' must be positive");
  const std::string est_name = cfg.at("estimator").get<std::string>();
  if (est_name != "reparam" && est_name != "score") throw ConfigError("config key 'estimator' must be reparam or score");

  Rng data_rng = root.split(1);
  Vector yobs(nobs);
  for (Index i = 0; i < nobs; ++i) yobs[i] = cfg.at("true_theta").get<Real>() + data_rng.std_normal();
  const bayes::ConjugateGaussianModel model(yobs);
  const bayes::VariationalGaussian prior{Vector::Constant(1, cfg.at("prior_mean").get<Real>()),
                                         Vector::Constant(1, std::log(prior_sigma))};
  const bayes::VariationalGaussian post = model.posterior(prior);

  bayes::ViConfig vc;
  vc.steps = static_cast<int>(positive(cfg, "steps"));
  vc.draws = static_cast<int>(positive(cfg, "draws"));
  vc.kind = est_name == "score" ? bayes::EstimatorKind::score : bayes::EstimatorKind::reparam;
  vc.schedule = {cfg.at("learning_rate").get<Real>(), std::log(1000.0) / vc.steps};
  Rng fit_rng = root.split(2);
  const bayes::ViResult fit = bayes::vi_fit(model, prior, bayes::VariationalGaussian::standard(1), vc, fit_rng);

  const Real kl_post = bayes::kl_gaussians(fit.q, post);
  const Real elbo = bayes::elbo_exact(fit.q, model, prior);
  const Real evidence = model.log_evidence(prior);

  Series trace{"ELBO estimate", {}, {}};
  std::ofstream tr = open_out(dir.file("elbo_trace.csv"));
  tr << "step,elbo\n";
  for (std::size_t k = 0; k < fit.elbo_trace.size(); ++k) {
    tr << k + 1 << ',' << format_real(fit.elbo_trace[k]) << '\n';
    trace.x.push_back(static_cast<Real>(k + 1));
    trace.y.push_back(fit.elbo_trace[k]);
  }
  record(dir, emit_lines(dir.file("elbo.svg"), {trace}, "ELBO during fitting", "step", "ELBO"));

  // Gradient estimators on E_q[θ²], whose μ-derivative is 2μ.
  const Real toy_mu = cfg.at("toy_mu").get<Real>();
  const auto gdraws = static_cast<int>(positive(cfg, "gradient_draws"));
  const bayes::FunctionModel toy(
      1, [](const Vector& t) { return t[0] * t[0]; }, [](const Vector& t) { return Vector(2 * t); });
  const bayes::VariationalGaussian q{Vector::Constant(1, toy_mu), Vector::Zero(1)};
  std::ofstream g = open_out(dir.file("gradient_estimators.csv"));
  g << "estimator,estimate,std_error,analytic,z\n";
  std::ostringstream rep;
  rep << "posterior_mean = " << format_real(post.mu[0]) << "\nposterior_sd = " << format_real(post.sigma()[0])
      << "\nfitted_mean = " << format_real(fit.q.mu[0]) << "\nfitted_sd = " << format_real(fit.q.sigma()[0])
      << "\nkl_to_posterior = " << format_real(kl_post) << "\nelbo_plus_kl = " << format_real(elbo + kl_post)
      << "\nlog_evidence = " << format_real(evidence) << '\n';
  for (auto kind : {bayes::EstimatorKind::score, bayes::EstimatorKind::reparam}) {
    Rng rng = root.split(kind == bayes::EstimatorKind::score ? 3 : 4);
    const bayes::GradientEstimate e = bayes::expectation_gradient(toy, q, gdraws, rng, kind);
    const char* label = kind == bayes::EstimatorKind::score ? "score" : "reparam";
    const Real z = (e.mean[0] - 2 * toy_mu) / e.std_error[0];
    g << label << ',' << format_real(e.mean[0]) << ',' << format_real(e.std_error[0]) << ','
      << format_real(2 * toy_mu) << ',' << format_real(z) << '\n';
    rep << label << "_gradient = " << format_real(e.mean[0]) << " (se " << format_real(e.std_error[0]) << ")\n";
  }
  report(dir, rep.str());
}

// --- identities -----------------------------------------------------------

void experiment_identities(const Json& cfg, RunDir& dir) {
  const Index samples = positive(cfg, "samples");
  const Rng root(cfg.at("seed").get<std::uint64_t>());
  std::ofstream out = open_out(dir.file("identities.csv"));
  out << "identity,samples,max_relative_error,all_hold\n";
  std::ostringstream rep;
  const std::pair<IdentityKind, const char*> kinds[] = {{IdentityKind::product, "product"},
                                                        {IdentityKind::max, "max"},
                                                        {IdentityKind::product_squared, "product_squared"},
                                                        {IdentityKind::max_sum, "max_sum"}};
  for (const auto& [kind, name] : kinds) {
    Rng rng = root.split(static_cast<std::uint64_t>(kind) + 1);
    Real worst = 0;
    bool all = true;
    for (Index s = 0; s < samples; ++s) {
      const Index len = kind == IdentityKind::max_sum ? 1 + static_cast<Index>(rng.uniform_index(6)) : 2;
      const Real scale = std::pow(10.0, 4 * rng.uniform01() - 2);
      Vector x(len);
      for (Index i = 0; i < len; ++i) x[i] = scale * rng.std_normal();
      const auto check = verify_identity(kind, x);
      worst = std::max(worst, std::abs(check.lhs - check.rhs) / (1 + std::abs(check.lhs)));
      all = all && check.holds(1e-9);
    }
    out << name << ',' << samples << ',' << format_real(worst) << ',' << (all ? "true" : "false") << '\n';
    rep << name << " = " << (all ? "holds" : "FAILS") << " (max relative error " << format_real(worst) << ")\n";
  }
  report(dir, rep.str());
}

// --- optzoo ---------------------------------------------------------------

Vector battery_spectrum(Index dim, Real condition) {
  Vector lam(dim);
  for (Index i = 0; i < dim; ++i)
    lam[i] = dim == 1 ? 1.0 : 1 + (condition - 1) * static_cast<Real>(i) / static_cast<Real>(dim - 1);
  return lam;
}

Real rosenbrock(const Vector& x) {
  return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
}

Vector rosenbrock_grad(const Vector& x) {
  Vector g(2);
  g[0] = -400 * x[0] * (x[1] - x[0] * x[0]) - 2 * (1 - x[0]);
  g[1] = 200 * (x[1] - x[0] * x[0]);
  return g;
}

void experiment_optzoo(const Json& cfg, RunDir& dir) {
  const Index dim = positive(cfg, "dim");
  const auto steps = static_cast<int>(positive(cfg, "steps"));
  const Real condition = cfg.at("condition").get<Real>();
  if (!(condition >= 1)) throw ConfigError("config key 'condition' must be at least 1");
  const auto newton_steps = static_cast<int>(positive(cfg, "newton_steps"));

  std::ostringstream rep;
  std::ofstream out = open_out(dir.file("quadratic_trace.csv"));
  out << "method,step,objective\n";
  std::vector<Series> series;
  for (const DescentRun& run : quadratic_battery(dim, condition, steps)) {
    const std::string name(optim::to_string(run.method));
    Series s{name, {}, {}};
    for (std::size_t k = 0; k < run.objective.size(); ++k) {
      out << name << ',' << k << ',' << format_real(run.objective[k]) << '\n';
      s.x.push_back(static_cast<Real>(k));
      s.y.push_back(std::log10(std::max(run.objective[k], 1e-300)));
    }
    series.push_back(std::move(s));
    rep << name << "_monotone = " << (run.monotone ? "true" : "false") << ", final = "
        << format_real(run.objective.back()) << '\n';
  }
  record(dir, emit_lines(dir.file("quadratic_trace.svg"), series, "Descent on a quadratic", "step",
                         "log10 objective"));

  rep << "newton_quadratic_one_step_error = " << format_real(newton_quadratic_error(dim, condition)) << '\n';
  const optim::NewtonResult nr = newton_rosenbrock(newton_steps);
  std::ofstream rt = open_out(dir.file("rosenbrock_newton.csv"));
  rt << "iteration,objective\n";
  Series rs{"damped newton", {}, {}};
  for (std::size_t k = 0; k < nr.objective_trace.size(); ++k) {
    rt << k << ',' << format_real(nr.objective_trace[k]) << '\n';
    rs.x.push_back(static_cast<Real>(k));
    rs.y.push_back(std::log10(std::max(nr.objective_trace[k], 1e-300)));
  }
  rt.close();
  record(dir, emit_lines(dir.file("rosenbrock_newton.svg"), {rs}, "Damped Newton on Rosenbrock", "iteration",
                         "log10 objective"));
  Vector one = Vector::Ones(2);
  rep << "rosenbrock_iterations = " << nr.iterations << "\nrosenbrock_distance = " << format_real((nr.x - one).norm())
      << "\nminibatch_cycle_error = " << format_real(minibatch_cycle_error(cfg.at("seed").get<std::uint64_t>())) << '\n';
  report(dir, rep.str());
}

}  // namespace

std::vector<DescentRun> quadratic_battery(Index dim, Real condition, int steps) {
  if (dim < 1 || steps < 1 || !(condition >= 1)) throw DomainError("quadratic_battery: invalid settings");
  const Vector lam = battery_spectrum(dim, condition);
  const auto f = [&](const Vector& x) { return 0.5 * lam.dot(x.cwiseAbs2()); };
  const optim::GradientFn g = [&](const Vector& x) { return Vector(lam.cwiseProduct(x)); };
  // Step sizes scale with 1/condition so every method stays in its monotone regime.
  const Real s = 4.0 / condition;
  struct Setting {
    optim::Method method;
    Real a, decay, mu, d;
  };
  const Setting settings[] = {{optim::Method::sgd, 0.2 * s, 0, 0.9, 0.9},
                              {optim::Method::momentum, 0.02 * s, 0, 0.5, 0.9},
                              {optim::Method::nesterov, 0.02 * s, 0, 0.5, 0.9},
                              {optim::Method::adagrad, 0.2, 0, 0.9, 0.9},
                              {optim::Method::rmsprop, 0.02, 0.02, 0.9, 0.9},
                              {optim::Method::adam, 0.02, 0.02, 0.9, 0.99},
                              {optim::Method::newton, 1.0, 0, 0.9, 0.9}};
  std::vector<DescentRun> runs;
  for (const Setting& st : settings) {
    optim::OptimizerParams params;
    params.mu = st.mu;
    params.d = st.d;
    params.damping = 1e-3;
    optim::Optimizer opt(st.method, dim, params);
    Vector x = Vector::Ones(dim);
    DescentRun run{st.method, {f(x)}, true};
    for (int k = 0; k < steps; ++k) {
      opt.step(x, g, k, {st.a, st.decay});
      const Real v = f(x);
      if (!(v < run.objective.back()) && run.objective.back() > 1e-300) run.monotone = false;
      run.objective.push_back(v);
      if (v == 0) break;
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

Real newton_quadratic_error(Index dim, Real condition) {
  const Vector lam = battery_spectrum(dim, condition);
  const optim::GradientFn g = [&](const Vector& x) { return Vector(lam.cwiseProduct(x)); };
  const Vector x0 = Vector::Ones(dim);
  const Vector x1 = optim::newton_step(g, x0, 0.0);
  return x1.norm();
}

optim::NewtonResult newton_rosenbrock(int max_iterations) {
  Vector x0(2);
  x0 << -1.2, 1.0;
  optim::NewtonOptions opts;
  opts.max_iterations = max_iterations;
  return optim::newton_minimize(rosenbrock, rosenbrock_grad, x0, opts);
}

Real minibatch_cycle_error(std::uint64_t seed) {
  Rng rng(seed);
  const Index T = 24, batch = 6;
  const nnet::Network net = nnet::make_network(
      3, {{5, nnet::Activation::tanh}, {2, nnet::Activation::identity}}, rng);
  const Matrix X = normal_matrix(3, T, rng), Y = normal_matrix(2, T, rng);
  const nnet::LossSpec spec{nnet::LossKind::l2, {nnet::PenaltyKind::l2, 0.1}};
  Vector avg = Vector::Zero(net.parameter_count());
  const Index cycle = T / batch;
  for (long k = 0; k < cycle; ++k)
    avg += optim::minibatch_gradient(net, X, Y, spec, optim::minibatch_indices(T, batch, k));
  avg /= static_cast<Real>(cycle);
  const Vector full = nnet::backprop(net, X, Y, spec).flat() / static_cast<Real>(T);
  return (avg - full).cwiseAbs().maxCoeff();
}

void run_experiment(const std::string& name, const Json& cfg, RunDir& dir) {
  if (name == "ball") return experiment_ball(cfg, dir);
  if (name == "partition") return experiment_partition(cfg, dir);
  if (name == "dropout-ridge") return experiment_dropout(cfg, dir);
  if (name == "vi-toy") return experiment_vi(cfg, dir);
  if (name == "identities") return experiment_identities(cfg, dir);
  if (name == "optzoo") return experiment_optzoo(cfg, dir);
  throw ConfigError("unknown experiment '" + name + "'");
}

}  // namespace bayesdl::cli
