#pragma once

#include <string>
#include <vector>

#include "bayesdl/cli/config.hpp"
#include "bayesdl/data/metrics.hpp"
#include "bayesdl/data/table.hpp"
#include "bayesdl/nnet/network.hpp"
#include "bayesdl/optim/train.hpp"

namespace bayesdl::cli {

struct TrainOptions {
  std::string id_column = "id";
  std::string label_column = "country_destination";
  int epochs = 20;
  Index batch_size = 256;
  Index hidden_units = 64;
  int hidden_layers = 2;
  optim::Method method = optim::Method::adam;
  optim::ScheduleParams schedule{0.001, 0.0};
  Real lambda = 0;
  double holdout = 0.1;
  bool stratify = true;
  Index k = 5;
  std::uint64_t seed = 0;
};

TrainOptions train_options_from(const Json& cfg);

struct TrainReport {
  explicit TrainReport(nnet::Network n) : net(std::move(n)) {}

  nnet::Network net;
  std::vector<optim::TraceRow> trace;  // metric is holdout NDCG@k
  std::vector<std::string> classes;    // softmax row order
  std::vector<std::string> feature_names;
  Index train_records = 0;
  std::vector<std::string> holdout_ids;
  std::vector<std::string> holdout_truth;
  std::vector<data::Ranking> holdout_rankings;
  Real holdout_ndcg = 0;
  /// Ranks every record by training class frequency (the majority class first).
  Real constant_ndcg = 0;
  Real uniform_ndcg = 0;
};

/// One-hot and session features, stratified holdout, standardization on the
/// training part, relu hidden layers with a softmax output trained by
/// cross-entropy, and holdout NDCG@k after every epoch.
TrainReport train_pipeline(const data::Table& users, const data::Table* sessions, const TrainOptions& options);

/// Holdout rankings as CSV: id,truth,rank1..rankK.
void write_predictions_csv(std::ostream& out, const std::vector<std::string>& ids,
                           const std::vector<std::string>& truth, const std::vector<data::Ranking>& rankings, Index k);

void run_train(const Json& cfg, RunDir& dir);
void run_evaluate(const Json& cfg, RunDir& dir);
void run_synth(const Json& cfg, RunDir& dir);

}  // namespace bayesdl::cli
