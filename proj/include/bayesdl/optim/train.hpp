#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/nnet/network.hpp"
#include "bayesdl/optim/optimizer.hpp"

namespace bayesdl::optim {

struct TrainConfig {
  int epochs = 20;
  Index batch_size = 256;
  std::uint64_t seed = 0;
  ScheduleParams schedule{};
  int eval_hook_period = 1;
  /// Permute the records once (from `seed`) before cycling through them.
  bool shuffle_once = true;
};

struct TraceRow {
  int epoch = 0;
  Real objective = 0;
  std::string metric_name;  // empty when the hook did not run this epoch
  Real metric_value = 0;
};

struct Metric {
  std::string name;
  Real value;
};

using MetricHook = std::function<Metric(const nnet::Network&, int epoch)>;

struct TrainResult {
  nnet::Network net;
  std::vector<TraceRow> trace;
  long iterations = 0;
};

/// Divergence during training; carries the network from the last epoch
/// whose objective was finite, and the trace up to that point.
class TrainingDiverged : public DivergenceError {
 public:
  TrainingDiverged(const std::string& what, long iteration, nnet::Network last_good,
                   std::vector<TraceRow> trace)
      : DivergenceError(what, iteration), last_good_(std::move(last_good)), trace_(std::move(trace)) {}
  const nnet::Network& last_good() const { return last_good_; }
  const std::vector<TraceRow>& trace() const { return trace_; }

 private:
  nnet::Network last_good_;
  std::vector<TraceRow> trace_;
};

/// Mini-batch estimate of the gradient of objective()/T:
/// (1/|E|) Σ_{i∈E} ∇L_i + (1/T) ∇(λφ).
Vector minibatch_gradient(const nnet::Network& net, const Matrix& X, const Matrix& Y,
                          const nnet::LossSpec& spec, const std::vector<Index>& batch);

/// Runs epochs × ceil(T / batch) optimizer steps over cyclic consecutive
/// mini-batches. After every epoch the full objective is recorded; the
/// metric hook runs every `eval_hook_period` epochs.
TrainResult train(nnet::Network net, const Matrix& X, const Matrix& Y, const nnet::LossSpec& spec,
                  const TrainConfig& config, Method method, const OptimizerParams& params = {},
                  const MetricHook& hook = {});

/// CSV with header epoch,objective,metric_name,metric_value.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace bayesdl::optim
