#include "bayesdl/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/rng.hpp"

namespace bayesdl::data {

Index holdout_size(Index n, double frac) {
  if (!(frac > 0 && frac < 1)) throw DomainError("holdout fraction must be in (0, 1)");
  if (n < 0) throw DomainError("negative record count");
  return static_cast<Index>(std::floor(frac * static_cast<double>(n) + 0.5));
}

SplitIndices holdout_indices(Index n, double frac, std::uint64_t seed, const std::vector<std::string>* labels) {
  const Index h = holdout_size(n, frac);
  Rng rng(seed);
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  if (labels == nullptr) {
    const std::vector<Index> perm = random_permutation(n, rng);
    for (Index k = 0; k < h; ++k) chosen[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = true;
  } else {
    if (static_cast<Index>(labels->size()) != n) throw ShapeError("one label per record is required");
    std::map<std::string, std::vector<Index>> groups;
    for (Index i = 0; i < n; ++i) groups[(*labels)[static_cast<std::size_t>(i)]].push_back(i);
    struct Quota {
      std::vector<Index>* members;
      Index take;
      double remainder;
      std::size_t order;
    };
    std::vector<Quota> quotas;
    Index assigned = 0;
    for (auto& [label, members] : groups) {
      const double exact = static_cast<double>(members.size()) * static_cast<double>(h) / static_cast<double>(n);
      const auto base = static_cast<Index>(std::floor(exact));
      quotas.push_back({&members, base, exact - static_cast<double>(base), quotas.size()});
      assigned += base;
    }
    std::vector<std::size_t> by_remainder(quotas.size());
    std::iota(by_remainder.begin(), by_remainder.end(), std::size_t{0});
    std::stable_sort(by_remainder.begin(), by_remainder.end(),
                     [&](std::size_t a, std::size_t b) { return quotas[a].remainder > quotas[b].remainder; });
    for (std::size_t k = 0; assigned < h && k < by_remainder.size(); ++k, ++assigned) ++quotas[by_remainder[k]].take;
    for (Quota& q : quotas) {
      const std::vector<Index> perm = random_permutation(static_cast<Index>(q.members->size()), rng);
      for (Index k = 0; k < q.take; ++k)
        chosen[static_cast<std::size_t>((*q.members)[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])])] = true;
    }
  }
  SplitIndices out;
  for (Index i = 0; i < n; ++i) (chosen[static_cast<std::size_t>(i)] ? out.holdout : out.train).push_back(i);
  return out;
}

std::pair<Table, Table> holdout_split(const Table& table, double frac, std::uint64_t seed,
                                      const std::optional<std::string>& stratify_column) {
  SplitIndices idx;
  if (stratify_column) {
    const Column& c = table.column(*stratify_column);
    std::vector<std::string> labels(static_cast<std::size_t>(table.rows()));
    for (Index i = 0; i < table.rows(); ++i) {
      auto& l = labels[static_cast<std::size_t>(i)];
      if (c.is_missing(i)) l = "\x01missing";
      else l = c.type == ColumnType::categorical ? c.string(i) : std::to_string(c.number(i));
    }
    idx = holdout_indices(table.rows(), frac, seed, &labels);
  } else {
    idx = holdout_indices(table.rows(), frac, seed);
  }
  return {table.select_rows(idx.train), table.select_rows(idx.holdout)};
}

}  // namespace bayesdl::data
