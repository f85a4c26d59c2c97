#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bayesdl/core/types.hpp"
#include "bayesdl/data/table.hpp"

namespace bayesdl::data {

struct SplitIndices {
  std::vector<Index> train;    // ascending
  std::vector<Index> holdout;  // ascending
};

/// round-half-up of frac·n
Index holdout_size(Index n, double frac);

/// Random holdout of holdout_size(n, frac) records. With labels, class
/// quotas follow largest-remainder allocation of the holdout size, so each
/// class is within one record of proportional.
SplitIndices holdout_indices(Index n, double frac, std::uint64_t seed,
                             const std::vector<std::string>* labels = nullptr);

/// Table version; stratifies on `stratify_column` when given.
std::pair<Table, Table> holdout_split(const Table& table, double frac, std::uint64_t seed,
                                      const std::optional<std::string>& stratify_column = std::nullopt);

}  // namespace bayesdl::data
