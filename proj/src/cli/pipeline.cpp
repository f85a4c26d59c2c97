#include "bayesdl/cli/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <map>
#include <sstream>

#include "bayesdl/cli/figure.hpp"
#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/format.hpp"
#include "bayesdl/data/csv.hpp"
#include "bayesdl/data/features.hpp"
#include "bayesdl/data/split.hpp"
#include "bayesdl/data/synth.hpp"
#include "bayesdl/nnet/loss.hpp"
#include "bayesdl/nnet/serialize.hpp"

namespace bayesdl::cli {

namespace {

std::string label_text(const data::Column& c, Index row) {
  if (c.is_missing(row)) throw InputFormatError("label column '" + c.name + "' has a missing value at row " +
                                                std::to_string(row + 1));
  return c.type == data::ColumnType::categorical ? c.string(row) : format_real(c.number(row));
}

std::string id_text(const data::Column& c, Index row) {
  if (c.is_missing(row)) return "NA";
  return c.type == data::ColumnType::categorical ? c.string(row)
                                                 : std::to_string(static_cast<long long>(c.number(row)));
}

void write_metric_rows(std::ostream& out, const std::vector<std::pair<std::string, Real>>& rows) {
  out << "metric,value\n";
  for (const auto& [name, value] : rows) out << name << ',' << format_real(value) << '\n';
}

void write_topk(std::ostream& out, const std::vector<std::string>& truth, const std::vector<data::Ranking>& rankings) {
  out << "class,k,accuracy\n";
  for (Index k = 1; k <= 3; ++k) {
    const data::TopKAccuracy acc = data::topk_accuracy(truth, rankings, k);
    out << "all," << k << ',' << format_real(acc.overall) << '\n';
    for (const auto& [label, v] : acc.per_class) out << data::quote_field(label) << ',' << k << ',' << format_real(v) << '\n';
  }
}

void write_ndcg_by_class(std::ostream& out, const std::vector<std::string>& truth,
                         const std::vector<data::Ranking>& rankings, Index k) {
  out << "destination,ndcg\n";
  out << "all," << format_real(data::ndcg(truth, rankings, k)) << '\n';
  for (const auto& [label, v] : data::ndcg_by_class(truth, rankings, k))
    out << data::quote_field(label) << ',' << format_real(v) << '\n';
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  return out;
}

}  // namespace

TrainOptions train_options_from(const Json& cfg) {
  TrainOptions o;
  o.id_column = cfg.at("id_column").get<std::string>();
  o.label_column = cfg.at("label_column").get<std::string>();
  o.epochs = cfg.at("epochs").get<int>();
  o.batch_size = cfg.at("batch_size").get<Index>();
  o.hidden_units = cfg.at("hidden_units").get<Index>();
  o.hidden_layers = cfg.at("hidden_layers").get<int>();
  try {
    o.method = optim::method_from_string(cfg.at("method").get<std::string>());
  } catch (const Error& e) {
    throw ConfigError(std::string("config key 'method': ") + e.what());
  }
  o.schedule = {cfg.at("learning_rate").get<Real>(), cfg.at("decay").get<Real>()};
  o.lambda = cfg.at("lambda").get<Real>();
  o.holdout = cfg.at("holdout").get<double>();
  o.stratify = cfg.at("stratify").get<bool>();
  o.k = cfg.at("k").get<Index>();
  o.seed = cfg.at("seed").get<std::uint64_t>();
  if (o.epochs < 1) throw ConfigError("config key 'epochs' must be positive");
  if (o.batch_size < 1) throw ConfigError("config key 'batch_size' must be positive");
  if (o.hidden_units < 1 || o.hidden_layers < 0) throw ConfigError("hidden layer sizes must be positive");
  if (!(o.holdout > 0 && o.holdout < 1)) throw ConfigError("config key 'holdout' must be in (0, 1)");
  if (o.k < 1) throw ConfigError("config key 'k' must be positive");
  if (!(o.schedule.a > 0) || o.schedule.decay < 0) throw ConfigError("learning rate must be positive, decay nonnegative");
  if (o.lambda < 0) throw ConfigError("config key 'lambda' must be nonnegative");
  return o;
}

TrainReport train_pipeline(const data::Table& users, const data::Table* sessions, const TrainOptions& o) {
  if (!users.has_column(o.label_column)) throw SchemaError("users table has no label column '" + o.label_column + "'");
  if (!users.has_column(o.id_column)) throw SchemaError("users table has no id column '" + o.id_column + "'");
  const Index n = users.rows();
  if (n < 10) throw DomainError("too few records to train (need at least 10)");

  const data::Column& label_col = users.column(o.label_column);
  const data::Column& id_col = users.column(o.id_column);
  std::vector<std::string> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = label_text(label_col, i);
  std::vector<std::string> classes = labels;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  std::map<std::string, int> class_index;
  for (std::size_t c = 0; c < classes.size(); ++c) class_index[classes[c]] = static_cast<int>(c);

  data::FeatureSpec fs;
  fs.id_column = o.id_column;
  fs.label_column = o.label_column;
  const data::Design design = data::build_design(users, sessions, fs);
  if (design.X.rows() == 0) throw SchemaError("users table has no feature columns");

  const data::SplitIndices split =
      data::holdout_indices(n, o.holdout, mix_seed(o.seed, 11), o.stratify ? &labels : nullptr);
  if (split.train.empty() || split.holdout.empty()) throw DomainError("holdout split leaves an empty part");
  const Matrix Xtrain_raw = data::select_records(design.X, split.train);
  const data::Standardizer scaler = data::Standardizer::fit(Xtrain_raw);
  const Matrix Xtrain = scaler.apply(Xtrain_raw);
  const Matrix Xhold = scaler.apply(data::select_records(design.X, split.holdout));

  std::vector<int> ytrain;
  for (Index i : split.train) ytrain.push_back(class_index[labels[static_cast<std::size_t>(i)]]);
  const Matrix Ytrain = nnet::one_hot_labels(ytrain, static_cast<Index>(classes.size()));

  TrainReport report(nnet::Network(1, {{Matrix::Zero(1, 1), Vector::Zero(1), nnet::Activation::identity}}));
  report.classes = classes;
  report.feature_names = design.names;
  report.train_records = static_cast<Index>(split.train.size());
  for (Index i : split.holdout) {
    report.holdout_ids.push_back(id_text(id_col, i));
    report.holdout_truth.push_back(labels[static_cast<std::size_t>(i)]);
  }

  std::vector<nnet::LayerSpec> layers;
  for (int l = 0; l < o.hidden_layers; ++l) layers.push_back({o.hidden_units, nnet::Activation::relu});
  layers.push_back({static_cast<Index>(classes.size()), nnet::Activation::softmax});
  Rng init_rng(mix_seed(o.seed, 12));
  nnet::Network net = nnet::make_network(design.X.rows(), layers, init_rng);

  const nnet::LossSpec spec{nnet::LossKind::cross_entropy,
                            {o.lambda > 0 ? nnet::PenaltyKind::l2 : nnet::PenaltyKind::none, o.lambda}};
  optim::TrainConfig tc;
  tc.epochs = o.epochs;
  tc.batch_size = o.batch_size;
  tc.seed = mix_seed(o.seed, 13);
  tc.schedule = o.schedule;
  const std::string metric = "ndcg@" + std::to_string(o.k);
  const optim::MetricHook hook = [&](const nnet::Network& current, int) {
    const auto rankings = data::top_k_labels(nnet::predict(current, Xhold), classes, o.k);
    return optim::Metric{metric, data::ndcg(report.holdout_truth, rankings, o.k)};
  };
  optim::TrainResult result = optim::train(std::move(net), Xtrain, Ytrain, spec, tc, o.method, {}, hook);

  report.net = std::move(result.net);
  report.trace = std::move(result.trace);
  report.holdout_rankings = data::top_k_labels(nnet::predict(report.net, Xhold), classes, o.k);
  report.holdout_ndcg = data::ndcg(report.holdout_truth, report.holdout_rankings, o.k);

  std::map<std::string, Index> freq;
  for (Index i : split.train) ++freq[labels[static_cast<std::size_t>(i)]];
  data::Ranking constant(classes.begin(), classes.end());
  std::stable_sort(constant.begin(), constant.end(),
                   [&](const std::string& a, const std::string& b) { return freq[a] > freq[b]; });
  if (static_cast<Index>(constant.size()) > o.k) constant.resize(static_cast<std::size_t>(o.k));
  report.constant_ndcg = data::ndcg(report.holdout_truth,
                                    std::vector<data::Ranking>(report.holdout_truth.size(), constant), o.k);
  report.uniform_ndcg = data::uniform_ranker_ndcg(static_cast<Index>(classes.size()), o.k);
  return report;
}

void write_predictions_csv(std::ostream& out, const std::vector<std::string>& ids, const std::vector<std::string>& truth,
                           const std::vector<data::Ranking>& rankings, Index k) {
  out << "id,truth";
  for (Index r = 1; r <= k; ++r) out << ",rank" << r;
  out << '\n';
  for (std::size_t i = 0; i < truth.size(); ++i) {
    out << data::quote_field(ids[i]) << ',' << data::quote_field(truth[i]);
    for (Index r = 0; r < k; ++r) {
      out << ',';
      if (r < static_cast<Index>(rankings[i].size())) out << data::quote_field(rankings[i][static_cast<std::size_t>(r)]);
      else out << "NA";
    }
    out << '\n';
  }
}

void run_train(const Json& cfg, RunDir& dir) {
  const TrainOptions o = train_options_from(cfg);
  const std::string users_path = cfg.at("users").get<std::string>();
  if (users_path.empty()) throw ConfigError("config key 'users' is required for train");
  const data::CsvSchema schema{{o.id_column, data::ColumnType::categorical},
                               {o.label_column, data::ColumnType::categorical}};
  const data::Table users = data::read_csv(std::filesystem::path(users_path), schema);
  std::optional<data::Table> sessions;
  const std::string sessions_path = cfg.at("sessions").get<std::string>();
  if (!sessions_path.empty())
    sessions = data::read_csv(std::filesystem::path(sessions_path), {{"user_id", data::ColumnType::categorical}});

  TrainReport report = [&] {
    try {
      return train_pipeline(users, sessions ? &*sessions : nullptr, o);
    } catch (const optim::TrainingDiverged& e) {
      std::ofstream out = open_out(dir.file("trace.csv"));
      optim::write_trace_csv(out, e.trace());
      throw;
    }
  }();

  {
    std::ofstream out = open_out(dir.file("trace.csv"));
    optim::write_trace_csv(out, report.trace);
  }
  Series ndcg{"holdout ndcg@" + std::to_string(o.k), {}, {}};
  Series obj{"objective / T", {}, {}};
  for (const auto& row : report.trace) {
    ndcg.x.push_back(row.epoch);
    ndcg.y.push_back(row.metric_value);
    obj.x.push_back(row.epoch);
    obj.y.push_back(row.objective / static_cast<Real>(report.train_records));
  }
  for (const auto& f : emit_lines(dir.file("trace_ndcg.svg"), {ndcg}, "Holdout NDCG per epoch", "epoch", "NDCG"))
    dir.file(f.filename().string());
  for (const auto& f : emit_lines(dir.file("trace_objective.svg"), {obj}, "Training objective per epoch", "epoch",
                                  "objective / T"))
    dir.file(f.filename().string());

  dir.write_text("model.json", nnet::network_to_json(report.net, 1) + "\n");
  {
    std::ofstream out = open_out(dir.file("predictions.csv"));
    write_predictions_csv(out, report.holdout_ids, report.holdout_truth, report.holdout_rankings, o.k);
  }
  {
    std::ofstream out = open_out(dir.file("metrics.csv"));
    write_metric_rows(out, {{"holdout_ndcg", report.holdout_ndcg},
                            {"constant_ranker_ndcg", report.constant_ndcg},
                            {"uniform_ranker_ndcg", report.uniform_ndcg},
                            {"train_records", static_cast<Real>(report.train_records)},
                            {"holdout_records", static_cast<Real>(report.holdout_truth.size())},
                            {"features", static_cast<Real>(report.feature_names.size())}});
  }
  {
    std::ofstream out = open_out(dir.file("ndcg_by_class.csv"));
    write_ndcg_by_class(out, report.holdout_truth, report.holdout_rankings, o.k);
  }
  {
    std::ofstream out = open_out(dir.file("topk.csv"));
    write_topk(out, report.holdout_truth, report.holdout_rankings);
  }
  std::cout << "holdout_ndcg = " << format_real(report.holdout_ndcg) << "\nconstant_ranker_ndcg = "
            << format_real(report.constant_ndcg) << "\nuniform_ranker_ndcg = " << format_real(report.uniform_ndcg)
            << '\n';
}

void run_evaluate(const Json& cfg, RunDir& dir) {
  const std::string path = cfg.at("predictions").get<std::string>();
  if (path.empty()) throw ConfigError("config key 'predictions' is required for evaluate");
  const Index k = cfg.at("k").get<Index>();
  if (k < 1) throw ConfigError("config key 'k' must be positive");
  const std::string truth_column = cfg.at("truth_column").get<std::string>();

  // Every column is read as text so that numeric-looking labels stay labels.
  data::CsvSchema schema;
  {
    const data::Table head = data::read_csv(std::filesystem::path(path));
    for (const auto& c : head.columns()) schema[c.name] = data::ColumnType::categorical;
  }
  const data::Table table = data::read_csv(std::filesystem::path(path), schema);
  const data::Column& truth_col = table.column(truth_column);
  std::vector<const data::Column*> ranks;
  for (Index r = 1;; ++r) {
    const std::string name = "rank" + std::to_string(r);
    if (!table.has_column(name)) break;
    ranks.push_back(&table.column(name));
  }
  if (ranks.empty()) throw SchemaError("predictions need columns rank1, rank2, ...");
  std::vector<std::string> truth;
  std::vector<data::Ranking> rankings;
  for (Index i = 0; i < table.rows(); ++i) {
    if (truth_col.is_missing(i)) throw InputFormatError("missing truth label at data row " + std::to_string(i + 1));
    truth.push_back(truth_col.string(i));
    data::Ranking r;
    for (const data::Column* c : ranks)
      if (!c->is_missing(i)) r.push_back(c->string(i));
    rankings.push_back(std::move(r));
  }
  if (truth.empty()) throw DomainError("predictions file has no records");
  const Real value = data::ndcg(truth, rankings, k);
  {
    std::ofstream out = open_out(dir.file("ndcg_by_class.csv"));
    write_ndcg_by_class(out, truth, rankings, k);
  }
  {
    std::ofstream out = open_out(dir.file("topk.csv"));
    write_topk(out, truth, rankings);
  }
  {
    std::ofstream out = open_out(dir.file("metrics.csv"));
    write_metric_rows(out, {{"ndcg", value}, {"records", static_cast<Real>(truth.size())}});
  }
  std::cout << "ndcg = " << format_real(value) << '\n';
}

void run_synth(const Json& cfg, RunDir& dir) {
  const auto n = cfg.at("n_users").get<Index>();
  if (n < 100) throw ConfigError("config key 'n_users' must be at least 100");
  const data::SynthData d = data::synth_airbnb(n, cfg.at("seed").get<std::uint64_t>());
  data::write_csv(dir.file("users.csv"), d.users);
  data::write_csv(dir.file("sessions.csv"), d.sessions);
  const data::ClassDist prior = data::destination_prior();
  std::map<std::string, Index> counts;
  for (const auto& t : d.truth) ++counts[t];
  std::ofstream out = open_out(dir.file("class_distribution.csv"));
  out << "destination,prior,empirical\n";
  for (std::size_t c = 0; c < prior.labels.size(); ++c)
    out << prior.labels[c] << ',' << format_real(prior.proportions[static_cast<Index>(c)]) << ','
        << format_real(static_cast<Real>(counts[prior.labels[c]]) / static_cast<Real>(n)) << '\n';
  std::cout << "users = " << n << "\nsessions = " << d.sessions.rows() << "\nage_missing_fraction = "
            << format_real(d.users.column("age").missing_fraction()) << '\n';
}

}  // namespace bayesdl::cli
