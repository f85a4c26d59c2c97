#pragma once

#include <string>
#include <vector>

#include "bayesdl/core/types.hpp"
#include "bayesdl/data/table.hpp"

namespace bayesdl::data {

/// Name suffix of the missing-indicator column added by one_hot.
inline constexpr const char* kMissingLevel = "__missing__";

/// Replaces a categorical column by 0/1 columns "col=level" (levels in
/// lexicographic order), plus "col=__missing__" when any cell is missing.
Table one_hot(const Table& table, const std::string& column);
/// As above with a fixed level list; unseen levels encode as all zeros.
Table one_hot(const Table& table, const std::string& column, const std::vector<std::string>& levels);

/// Per-user aggregates of a sessions table with columns user_id,
/// action_type, device_type and duration. Users are listed in `users` order,
/// or in lexicographic order of the ids present when `users` is empty.
Table session_features(const Table& sessions, const std::vector<std::string>& users = {});

struct FeatureSpec {
  std::string id_column = "id";
  std::string label_column = "country_destination";
  std::vector<std::string> exclude;
};

/// Numeric design matrix, one column per record (nnet convention).
struct Design {
  Matrix X;                        // features x records
  std::vector<std::string> names;  // one per feature row
};

/// One-hot every categorical column, add "col=__missing__" indicators for
/// numeric columns with missing cells (imputing 0), join session features
/// on the id column when a sessions table is given, and drop the id and
/// label columns.
Design build_design(const Table& users, const Table* sessions, const FeatureSpec& spec = {});

/// Per-feature centering and scaling fitted on a subset of records.
struct Standardizer {
  Vector mean;
  Vector scale;  // 1 where the feature is constant

  static Standardizer fit(const Matrix& X);
  Matrix apply(const Matrix& X) const;
};

/// Columns of X for the given records.
Matrix select_records(const Matrix& X, const std::vector<Index>& records);

}  // namespace bayesdl::data
