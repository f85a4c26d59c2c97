#include "bayesdl/optim/train.hpp"

#include <cmath>
#include <ostream>

#include "bayesdl/core/format.hpp"
#include "bayesdl/core/rng.hpp"

namespace bayesdl::optim {

namespace {

Matrix gather_columns(const Matrix& M, const std::vector<Index>& idx) {
  Matrix out(M.rows(), static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Index>(j)) = M.col(idx[j]);
  return out;
}

}  // namespace

Vector minibatch_gradient(const nnet::Network& net, const Matrix& X, const Matrix& Y,
                          const nnet::LossSpec& spec, const std::vector<Index>& batch) {
  const Matrix xb = gather_columns(X, batch);
  const Matrix yb = gather_columns(Y, batch);
  nnet::LossSpec data_only = spec;
  data_only.penalty = {};
  Vector g = nnet::backprop(net, xb, yb, data_only).flat() / static_cast<Real>(batch.size());
  if (spec.penalty.kind != nnet::PenaltyKind::none && spec.penalty.lambda > 0)
    g += nnet::penalty_gradient(net, spec.penalty).flat() / static_cast<Real>(X.cols());
  return g;
}

TrainResult train(nnet::Network net, const Matrix& X, const Matrix& Y, const nnet::LossSpec& spec,
                  const TrainConfig& config, Method method, const OptimizerParams& params,
                  const MetricHook& hook) {
  if (config.epochs < 1) throw DomainError("train: epochs must be at least 1");
  if (config.batch_size < 1) throw DomainError("train: batch size must be at least 1");
  if (config.eval_hook_period < 1) throw DomainError("train: eval period must be at least 1");
  const Index T = X.cols();
  if (T == 0) throw DomainError("train: no data");
  if (Y.cols() != T) throw ShapeError("train: X and Y have different record counts");
  if (X.rows() != net.input_dim() || Y.rows() != net.output_dim())
    throw ShapeError("train: data dimensions do not match the network");
  const Index batch = std::min(config.batch_size, T);

  Matrix Xs = X, Ys = Y;
  if (config.shuffle_once) {
    Rng rng(config.seed);
    const auto perm = random_permutation(T, rng);
    Xs = gather_columns(X, perm);
    Ys = gather_columns(Y, perm);
  }

  Optimizer opt(method, net.parameter_count(), params);
  Vector theta = net.parameters();
  nnet::Network work = net;
  nnet::Network last_good = net;
  std::vector<TraceRow> trace;
  const long steps_per_epoch = static_cast<long>((T + batch - 1) / batch);
  long k = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    for (long s = 0; s < steps_per_epoch; ++s, ++k) {
      const auto idx = minibatch_indices(T, batch, k);
      const GradientFn grad = [&](const Vector& p) {
        work.set_parameters(p);
        return minibatch_gradient(work, Xs, Ys, spec, idx);
      };
      try {
        opt.step(theta, grad, k, config.schedule);
      } catch (const DivergenceError& e) {
        throw TrainingDiverged(e.what(), k, last_good, trace);
      }
      if (!theta.allFinite()) throw TrainingDiverged("non-finite parameters", k, last_good, trace);
    }
    work.set_parameters(theta);
    TraceRow row;
    row.epoch = epoch;
    row.objective = nnet::objective(work, X, Y, spec);
    if (!std::isfinite(row.objective))
      throw TrainingDiverged("objective became non-finite", k, last_good, trace);
    if (hook && epoch % config.eval_hook_period == 0) {
      const Metric m = hook(work, epoch);
      row.metric_name = m.name;
      row.metric_value = m.value;
    }
    trace.push_back(std::move(row));
    last_good = work;
  }
  return TrainResult{std::move(work), std::move(trace), k};
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "epoch,objective,metric_name,metric_value\n";
  for (const auto& row : trace) {
    out << row.epoch << ',' << format_real(row.objective) << ',' << row.metric_name << ',';
    if (!row.metric_name.empty()) out << format_real(row.metric_value);
    out << '\n';
  }
}

}  // namespace bayesdl::optim
