#include "bayesdl/data/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "bayesdl/core/errors.hpp"

namespace bayesdl::data {

namespace {

void check_inputs(const std::vector<std::string>& truths, const std::vector<Ranking>& predictions, Index k) {
  if (k < 1) throw DomainError("k must be at least 1");
  if (truths.size() != predictions.size()) throw ShapeError("one ranking per record is required");
  if (truths.empty()) throw DomainError("no records to evaluate");
}

}  // namespace

Real dcg_at_k(const std::string& truth, const Ranking& ranked, Index k) {
  if (k < 1) throw DomainError("k must be at least 1");
  std::set<std::string> seen;
  for (const std::string& label : ranked)
    if (!seen.insert(label).second) throw InputFormatError("duplicate label '" + label + "' in a ranked list");
  const Index limit = std::min<Index>(k, static_cast<Index>(ranked.size()));
  for (Index pos = 1; pos <= limit; ++pos)
    if (ranked[static_cast<std::size_t>(pos - 1)] == truth) return 1.0 / std::log2(static_cast<Real>(pos) + 1);
  return 0;
}

Real ndcg(const std::vector<std::string>& truths, const std::vector<Ranking>& predictions, Index k) {
  check_inputs(truths, predictions, k);
  Real sum = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) sum += dcg_at_k(truths[i], predictions[i], k);
  return sum / static_cast<Real>(truths.size());
}

std::map<std::string, Real> ndcg_by_class(const std::vector<std::string>& truths,
                                          const std::vector<Ranking>& predictions, Index k) {
  check_inputs(truths, predictions, k);
  std::map<std::string, Real> sum;
  std::map<std::string, Index> count;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    sum[truths[i]] += dcg_at_k(truths[i], predictions[i], k);
    ++count[truths[i]];
  }
  for (auto& [label, s] : sum) s /= static_cast<Real>(count[label]);
  return sum;
}

TopKAccuracy topk_accuracy(const std::vector<std::string>& truths, const std::vector<Ranking>& predictions, Index k) {
  check_inputs(truths, predictions, k);
  TopKAccuracy out;
  out.k = k;
  Index hits = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const bool hit = dcg_at_k(truths[i], predictions[i], k) > 0;
    hits += hit;
    out.per_class[truths[i]] += hit ? 1.0 : 0.0;
    ++out.class_counts[truths[i]];
  }
  for (auto& [label, v] : out.per_class) v /= static_cast<Real>(out.class_counts[label]);
  out.overall = static_cast<Real>(hits) / static_cast<Real>(truths.size());
  return out;
}

std::vector<Ranking> top_k_labels(const Matrix& scores, const std::vector<std::string>& labels, Index k) {
  if (static_cast<Index>(labels.size()) != scores.rows()) throw ShapeError("one label per score row is required");
  if (k < 1) throw DomainError("k must be at least 1");
  const Index take = std::min<Index>(k, scores.rows());
  std::vector<Ranking> out(static_cast<std::size_t>(scores.cols()));
  std::vector<Index> order(static_cast<std::size_t>(scores.rows()));
  for (Index j = 0; j < scores.cols(); ++j) {
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return scores(a, j) > scores(b, j); });
    Ranking& r = out[static_cast<std::size_t>(j)];
    for (Index t = 0; t < take; ++t) r.push_back(labels[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])]);
  }
  return out;
}

Real uniform_ranker_ndcg(Index n_classes, Index k) {
  if (n_classes < 1 || k < 1) throw DomainError("class count and k must be positive");
  Real sum = 0;
  for (Index pos = 1; pos <= n_classes; ++pos)
    if (pos <= k) sum += 1.0 / std::log2(static_cast<Real>(pos) + 1);
  return sum / static_cast<Real>(n_classes);
}

}  // namespace bayesdl::data
