#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bayesdl::cli {

using Json = nlohmann::json;

/// Command paths with a configuration schema: "train", "evaluate", "synth",
/// "experiment ball", ...
const std::vector<std::string>& command_names();

/// Defaults of a command; the keys are the complete schema. Every command
/// has `seed` and `out`.
Json default_config(const std::string& command);

/// "batch_size" -> "batch-size"
std::string flag_name(const std::string& key);

/// Converts flag text to the JSON type of the default value. Arrays take
/// comma-separated elements.
Json parse_override(const std::string& key, const Json& default_value, const std::string& text);

/// Defaults, then the JSON object in `file` (an empty file counts as {}),
/// then flag overrides keyed by config key. Unknown keys and type
/// mismatches throw ConfigError naming the key.
Json resolve_config(const std::string& command, const std::optional<std::filesystem::path>& file,
                    const std::map<std::string, std::string>& overrides);

/// Output directory of one run. Files written through it are listed in
/// manifest.txt by finish().
class RunDir {
 public:
  explicit RunDir(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  /// Path for `name` inside the run directory, recorded for the manifest.
  std::filesystem::path file(const std::string& name);
  void write_text(const std::string& name, const std::string& content);
  void write_config(const Json& resolved);
  /// Writes manifest.txt listing every recorded file.
  void finish();

 private:
  std::filesystem::path root_;
  std::vector<std::string> files_;
};

}  // namespace bayesdl::cli
