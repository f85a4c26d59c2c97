#include "bayesdl/data/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "bayesdl/core/errors.hpp"

namespace bayesdl::data {

namespace {

struct Running {
  Index count = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  double sample_std() const { return count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1)) : 0.0; }
};

struct UserStats {
  Index sessions = 0;
  std::map<std::string, Running> by_action;
  std::map<std::string, Running> by_device;
  std::map<std::string, Index> action_count;
  std::map<std::string, Index> device_count;
  std::vector<double> durations;
};

double lower_median(std::vector<double> v) {
  if (v.empty()) return 0;
  const std::size_t k = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(k), v.end());
  return v[k];
}

const Column& require(const Table& t, const std::string& name) {
  if (!t.has_column(name)) throw SchemaError("sessions table is missing required column '" + name + "'");
  return t.column(name);
}

std::string cell_text(const Column& c, Index row) {
  if (c.type == ColumnType::categorical) return c.string(row);
  return std::to_string(static_cast<long long>(c.number(row)));
}

}  // namespace

Table one_hot(const Table& table, const std::string& column) {
  const Column& c = table.column(column);
  if (c.type != ColumnType::categorical)
    throw ColumnTypeError("one_hot: column '" + column + "' is not categorical");
  return one_hot(table, column, c.levels());
}

Table one_hot(const Table& table, const std::string& column, const std::vector<std::string>& levels) {
  const Index idx = table.index_of(column);
  const Column& c = table.column(idx);
  if (c.type != ColumnType::categorical)
    throw ColumnTypeError("one_hot: column '" + column + "' is not categorical");
  std::vector<std::string> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  const auto n = static_cast<std::size_t>(table.rows());
  std::vector<std::vector<double>> dummies(sorted.size(), std::vector<double>(n, 0.0));
  std::vector<double> indicator(n, 0.0);
  bool any_missing = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (c.missing[i]) {
      indicator[i] = 1;
      any_missing = true;
      continue;
    }
    auto it = std::lower_bound(sorted.begin(), sorted.end(), c.strings[i]);
    if (it != sorted.end() && *it == c.strings[i]) dummies[static_cast<std::size_t>(it - sorted.begin())][i] = 1;
  }
  std::vector<Column> replacement;
  for (std::size_t k = 0; k < sorted.size(); ++k)
    replacement.push_back(Column::numeric(column + "=" + sorted[k], std::move(dummies[k])));
  if (any_missing) replacement.push_back(Column::numeric(column + "=" + kMissingLevel, std::move(indicator)));
  Table out = table;
  out.replace_column(idx, std::move(replacement));
  return out;
}

Table session_features(const Table& sessions, const std::vector<std::string>& users) {
  const Column& uid = require(sessions, "user_id");
  const Column& action = require(sessions, "action_type");
  const Column& device = require(sessions, "device_type");
  const Column& duration = require(sessions, "duration");
  if (duration.type != ColumnType::numeric) throw ColumnTypeError("sessions column 'duration' must be numeric");

  std::unordered_map<std::string, UserStats> stats;
  std::set<std::string> actions, devices;
  for (Index r = 0; r < sessions.rows(); ++r) {
    if (uid.is_missing(r)) continue;
    UserStats& s = stats[cell_text(uid, r)];
    ++s.sessions;
    const bool has_duration = !duration.is_missing(r);
    const double d = has_duration ? duration.number(r) : 0.0;
    if (has_duration) s.durations.push_back(d);
    if (!action.is_missing(r)) {
      const std::string a = cell_text(action, r);
      actions.insert(a);
      ++s.action_count[a];
      if (has_duration) s.by_action[a].add(d);
    }
    if (!device.is_missing(r)) {
      const std::string v = cell_text(device, r);
      devices.insert(v);
      ++s.device_count[v];
      if (has_duration) s.by_device[v].add(d);
    }
  }

  std::vector<std::string> ids = users;
  if (ids.empty()) {
    for (const auto& [id, _] : stats) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
  }
  const std::size_t n = ids.size();
  std::vector<double> had(n), count(n), dmean(n), dstd(n), dmed(n);
  std::map<std::string, std::vector<double>> acount, astd, vcount, vstd;
  for (const auto& a : actions) acount[a].assign(n, 0), astd[a].assign(n, 0);
  for (const auto& v : devices) vcount[v].assign(n, 0), vstd[v].assign(n, 0);

  for (std::size_t i = 0; i < n; ++i) {
    auto it = stats.find(ids[i]);
    if (it == stats.end()) continue;
    const UserStats& s = it->second;
    had[i] = 1;
    count[i] = static_cast<double>(s.sessions);
    Running all;
    for (double d : s.durations) all.add(d);
    dmean[i] = all.count ? all.mean : 0.0;
    dstd[i] = all.sample_std();
    dmed[i] = lower_median(s.durations);
    for (const auto& [a, c] : s.action_count) acount[a][i] = static_cast<double>(c);
    for (const auto& [a, r] : s.by_action) astd[a][i] = r.sample_std();
    for (const auto& [v, c] : s.device_count) vcount[v][i] = static_cast<double>(c);
    for (const auto& [v, r] : s.by_device) vstd[v][i] = r.sample_std();
  }

  Table out;
  out.add_column(Column::categorical("user_id", ids));
  out.add_column(Column::numeric("had_sessions", std::move(had)));
  out.add_column(Column::numeric("session_count", std::move(count)));
  for (const auto& a : actions) {
    out.add_column(Column::numeric("action=" + a + ":count", std::move(acount[a])));
    out.add_column(Column::numeric("action=" + a + ":std", std::move(astd[a])));
  }
  for (const auto& v : devices) {
    out.add_column(Column::numeric("device=" + v + ":count", std::move(vcount[v])));
    out.add_column(Column::numeric("device=" + v + ":std", std::move(vstd[v])));
  }
  out.add_column(Column::numeric("duration_mean", std::move(dmean)));
  out.add_column(Column::numeric("duration_std", std::move(dstd)));
  out.add_column(Column::numeric("duration_median", std::move(dmed)));
  return out;
}

Design build_design(const Table& users, const Table* sessions, const FeatureSpec& spec) {
  const Index n = users.rows();
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;

  auto skip = [&](const std::string& name) {
    return name == spec.id_column || name == spec.label_column ||
           std::find(spec.exclude.begin(), spec.exclude.end(), name) != spec.exclude.end();
  };
  auto add_numeric = [&](const Column& c) {
    bool any_missing = false;
    std::vector<double> v(static_cast<std::size_t>(n)), ind(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i) {
      if (c.is_missing(i)) {
        any_missing = true;
        ind[static_cast<std::size_t>(i)] = 1;
      } else {
        v[static_cast<std::size_t>(i)] = c.number(i);
      }
    }
    names.push_back(c.name);
    rows.push_back(std::move(v));
    if (any_missing) {
      names.push_back(c.name + "=" + kMissingLevel);
      rows.push_back(std::move(ind));
    }
  };

  for (const Column& c : users.columns()) {
    if (skip(c.name)) continue;
    if (c.type == ColumnType::numeric) {
      add_numeric(c);
    } else {
      const Table encoded = one_hot(users, c.name);
      for (const Column& d : encoded.columns()) {
        if (d.name.rfind(c.name + "=", 0) == 0 && !users.has_column(d.name)) {
          names.push_back(d.name);
          rows.push_back(d.numbers);
        }
      }
    }
  }

  if (sessions != nullptr) {
    const Column& ids = users.column(spec.id_column);
    std::vector<std::string> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = cell_text(ids, i);
    const Table sf = session_features(*sessions, order);
    for (const Column& c : sf.columns()) {
      if (c.name == "user_id") continue;
      add_numeric(c);
    }
  }

  Design d;
  d.names = std::move(names);
  d.X.resize(static_cast<Index>(rows.size()), n);
  for (std::size_t f = 0; f < rows.size(); ++f)
    for (Index i = 0; i < n; ++i) d.X(static_cast<Index>(f), i) = rows[f][static_cast<std::size_t>(i)];
  return d;
}

Standardizer Standardizer::fit(const Matrix& X) {
  if (X.cols() == 0) throw DomainError("cannot standardize an empty sample");
  Standardizer s;
  s.mean = X.rowwise().mean();
  s.scale = ((X.colwise() - s.mean).rowwise().squaredNorm() / static_cast<Real>(X.cols())).cwiseSqrt();
  for (Index i = 0; i < s.scale.size(); ++i)
    if (!(s.scale[i] > 1e-12)) s.scale[i] = 1;
  return s;
}

Matrix Standardizer::apply(const Matrix& X) const {
  if (X.rows() != mean.size()) throw ShapeError("standardizer: feature count mismatch");
  return (X.colwise() - mean).array().colwise() / scale.array();
}

Matrix select_records(const Matrix& X, const std::vector<Index>& records) {
  Matrix out(X.rows(), static_cast<Index>(records.size()));
  for (std::size_t k = 0; k < records.size(); ++k) out.col(static_cast<Index>(k)) = X.col(records[k]);
  return out;
}

}  // namespace bayesdl::data
