#include "bayesdl/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/format.hpp"

namespace bayesdl::cli {

namespace {

Json with_common(Json j) {
  j["seed"] = std::uint64_t{0};
  j["out"] = "out";
  return j;
}

const std::map<std::string, Json>& schemas() {
  static const std::map<std::string, Json> table = [] {
    std::map<std::string, Json> m;
    m["train"] = with_common({{"users", ""},
                              {"sessions", ""},
                              {"id_column", "id"},
                              {"label_column", "country_destination"},
                              {"epochs", 20},
                              {"batch_size", 256},
                              {"hidden_units", 64},
                              {"hidden_layers", 2},
                              {"method", "adam"},
                              {"learning_rate", 0.001},
                              {"decay", 0.0},
                              {"lambda", 0.0},
                              {"holdout", 0.1},
                              {"stratify", true},
                              {"k", 5}});
    m["evaluate"] = with_common({{"predictions", ""}, {"truth_column", "truth"}, {"k", 5}});
    m["synth"] = with_common({{"n_users", 10000}});
    m["experiment ball"] = with_common({{"n", 10000},
                                        {"equator_dim", 50},
                                        {"marginal_dims", {100, 200, 300, 400}},
                                        {"variance_dims", {2, 50, 100, 400}},
                                        {"ks_dims", {10, 50, 100, 400}},
                                        {"bins", 50}});
    m["experiment partition"] = with_common({{"neurons", 3},
                                             {"grid_resolution", 2001},
                                             {"raster_resolution", 201},
                                             {"max_lines", 6},
                                             {"dataset_n", 400},
                                             {"noise", 0.2},
                                             {"cart_depth", 4},
                                             {"net_epochs", 2000},
                                             {"learning_rate", 0.05}});
    m["experiment dropout-ridge"] = with_common({{"keep", {0.2, 0.5, 0.8}},
                                                 {"draws", 100000},
                                                 {"outputs", 3},
                                                 {"features", 8},
                                                 {"observations", 20}});
    m["experiment vi-toy"] = with_common({{"observations", 50},
                                          {"true_theta", 1.5},
                                          {"prior_mean", 0.0},
                                          {"prior_sigma", 1.0},
                                          {"steps", 3000},
                                          {"draws", 32},
                                          {"estimator", "reparam"},
                                          {"learning_rate", 0.05},
                                          {"gradient_draws", 10000},
                                          {"toy_mu", 0.7}});
    m["experiment identities"] = with_common({{"samples", 10000}});
    m["experiment optzoo"] = with_common({{"steps", 200},
                                          {"dim", 5},
                                          {"condition", 10.0},
                                          {"learning_rate", 0.05},
                                          {"newton_steps", 100}});
    return m;
  }();
  return table;
}

enum class Kind { integer, real, boolean, text, array };

Kind kind_of(const Json& v) {
  if (v.is_boolean()) return Kind::boolean;
  if (v.is_number_integer()) return Kind::integer;
  if (v.is_number()) return Kind::real;
  if (v.is_string()) return Kind::text;
  return Kind::array;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::integer: return "an integer";
    case Kind::real: return "a number";
    case Kind::boolean: return "a boolean";
    case Kind::text: return "a string";
    case Kind::array: return "an array of numbers";
  }
  return "a value";
}

bool matches(const Json& def, const Json& v, const std::string& key) {
  switch (kind_of(def)) {
    case Kind::integer:
      if (key == "seed") return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
      return v.is_number_integer();
    case Kind::real: return v.is_number();
    case Kind::boolean: return v.is_boolean();
    case Kind::text: return v.is_string();
    case Kind::array:
      if (!v.is_array() || v.empty()) return false;
      return std::all_of(v.begin(), v.end(), [&](const Json& e) {
        return def.front().is_number_integer() ? e.is_number_integer() : e.is_number();
      });
  }
  return false;
}

Json parse_scalar(const std::string& key, Kind kind, const std::string& text) {
  const auto fail = [&] {
    return ConfigError("value '" + text + "' for '" + key + "' is not " + kind_name(kind));
  };
  switch (kind) {
    case Kind::integer: {
      if (key == "seed") {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) throw fail();
        return v;
      }
      long long v = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) throw fail();
      return v;
    }
    case Kind::real: {
      double v = 0;
      if (!parse_real(text, v)) throw fail();
      return v;
    }
    case Kind::boolean:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw fail();
    case Kind::text: return text;
    case Kind::array: break;
  }
  throw fail();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, _] : schemas()) v.push_back(name);
    return v;
  }();
  return names;
}

Json default_config(const std::string& command) {
  auto it = schemas().find(command);
  if (it == schemas().end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

std::string flag_name(const std::string& key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

Json parse_override(const std::string& key, const Json& default_value, const std::string& text) {
  const Kind kind = kind_of(default_value);
  if (kind != Kind::array) return parse_scalar(key, kind, text);
  const Kind elem = default_value.front().is_number_integer() ? Kind::integer : Kind::real;
  Json arr = Json::array();
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) arr.push_back(parse_scalar(key, elem, part));
  if (arr.empty()) throw ConfigError("value for '" + key + "' must be a non-empty list");
  return arr;
}

Json resolve_config(const std::string& command, const std::optional<std::filesystem::path>& file,
                    const std::map<std::string, std::string>& overrides) {
  Json cfg = default_config(command);
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError("cannot open config file '" + file->string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
      Json user;
      try {
        user = Json::parse(text);
      } catch (const Json::parse_error& e) {
        throw ConfigError("config file '" + file->string() + "' is not valid JSON: " + e.what());
      }
      if (!user.is_object()) throw ConfigError("config file must contain a JSON object");
      for (auto it = user.begin(); it != user.end(); ++it) {
        if (!cfg.contains(it.key()))
          throw ConfigError("unknown config key '" + it.key() + "' for command '" + command + "'");
        if (!matches(cfg[it.key()], it.value(), it.key()))
          throw ConfigError("config key '" + it.key() + "' must be " + kind_name(kind_of(cfg[it.key()])));
        cfg[it.key()] = it.value();
      }
    }
  }
  for (const auto& [key, text] : overrides) {
    if (!cfg.contains(key)) throw ConfigError("unknown config key '" + key + "' for command '" + command + "'");
    cfg[key] = parse_override(key, default_config(command)[key], text);
  }
  return cfg;
}

RunDir::RunDir(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec || !std::filesystem::is_directory(root_))
    throw IoError("cannot create output directory '" + root_.string() + "'");
}

std::filesystem::path RunDir::file(const std::string& name) {
  if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
  return root_ / name;
}

void RunDir::write_text(const std::string& name, const std::string& content) {
  std::ofstream out(file(name), std::ios::binary);
  if (!out) throw IoError("cannot write '" + (root_ / name).string() + "'");
  out << content;
  if (!out) throw IoError("failed writing '" + (root_ / name).string() + "'");
}

void RunDir::write_config(const Json& resolved) { write_text("config.resolved.json", resolved.dump(2) + "\n"); }

void RunDir::finish() {
  std::vector<std::string> sorted = files_;
  std::sort(sorted.begin(), sorted.end());
  std::ofstream out(root_ / "manifest.txt", std::ios::binary);
  if (!out) throw IoError("cannot write manifest in '" + root_.string() + "'");
  for (const std::string& f : sorted) out << f << '\n';
}

}  // namespace bayesdl::cli
