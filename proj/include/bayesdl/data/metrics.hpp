#pragma once

#include <map>
#include <string>
#include <vector>

#include "bayesdl/core/types.hpp"

namespace bayesdl::data {

/// Ordered labels, best first.
using Ranking = std::vector<std::string>;

/// 1/log₂(pos+1) when the true label is at 1-based position pos ≤ k, else 0.
/// Only the first k entries count; duplicate labels throw InputFormatError.
Real dcg_at_k(const std::string& truth, const Ranking& ranked, Index k = 5);

/// Mean DCG@k over records (ideal DCG is 1 for a single relevant label).
Real ndcg(const std::vector<std::string>& truths, const std::vector<Ranking>& predictions, Index k = 5);

/// Mean DCG@k per true class, in lexicographic class order.
std::map<std::string, Real> ndcg_by_class(const std::vector<std::string>& truths,
                                          const std::vector<Ranking>& predictions, Index k = 5);

struct TopKAccuracy {
  Index k = 1;
  Real overall = 0;
  std::map<std::string, Real> per_class;
  std::map<std::string, Index> class_counts;
};

/// Fraction of records whose true label is within the top k.
TopKAccuracy topk_accuracy(const std::vector<std::string>& truths, const std::vector<Ranking>& predictions, Index k);

/// Top-k labels of each column of a score matrix (classes x records);
/// ties go to the lower class index.
std::vector<Ranking> top_k_labels(const Matrix& scores, const std::vector<std::string>& labels, Index k);

/// Expected NDCG@k of a ranker that orders C classes uniformly at random:
/// (1/C) Σ_{pos ≤ min(k, C)} 1/log₂(pos+1).
Real uniform_ranker_ndcg(Index n_classes, Index k = 5);

}  // namespace bayesdl::data
