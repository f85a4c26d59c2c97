#include "bayesdl/cli/run.hpp"

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bayesdl/cli/config.hpp"
#include "bayesdl/cli/experiments.hpp"
#include "bayesdl/cli/pipeline.hpp"
#include "bayesdl/core/errors.hpp"

namespace bayesdl::cli {

namespace {

struct Command {
  std::string path;  // config schema name
  CLI::App* app = nullptr;
  std::string config_file;
  std::map<std::string, std::string> values;  // key -> flag text
};

void add_flags(Command& cmd) {
  cmd.app->add_option("--config", cmd.config_file, "JSON config file")->check(CLI::ExistingFile);
  const Json defaults = default_config(cmd.path);
  for (auto it = defaults.begin(); it != defaults.end(); ++it) {
    const std::string key = it.key();
    std::string help = "default: " + it.value().dump();
    cmd.app->add_option_function<std::string>(
        "--" + flag_name(key), [&cmd, key](const std::string& v) { cmd.values[key] = v; }, help);
  }
}

int dispatch(Command& cmd) {
  std::optional<std::filesystem::path> file;
  if (!cmd.config_file.empty()) file = cmd.config_file;
  const Json cfg = resolve_config(cmd.path, file, cmd.values);
  RunDir dir(cfg.at("out").get<std::string>());
  dir.write_config(cfg);
  try {
    if (cmd.path == "train") run_train(cfg, dir);
    else if (cmd.path == "evaluate") run_evaluate(cfg, dir);
    else if (cmd.path == "synth") run_synth(cfg, dir);
    else run_experiment(cmd.path.substr(std::string("experiment ").size()), cfg, dir);
  } catch (...) {
    dir.finish();
    throw;
  }
  dir.finish();
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Feed-forward networks, optimizers, Bayesian regularization and geometry experiments", "bdl"};
  app.require_subcommand(1);
  std::vector<Command> commands;
  commands.reserve(command_names().size());
  CLI::App* experiment = app.add_subcommand("experiment", "Run one of the reproducible experiments");
  experiment->require_subcommand(1);
  for (const std::string& path : command_names()) {
    Command cmd;
    cmd.path = path;
    if (path.rfind("experiment ", 0) == 0) {
      cmd.app = experiment->add_subcommand(path.substr(11), "experiment " + path.substr(11));
    } else {
      const char* desc = path == "train"      ? "Train the ranking network on a users table"
                         : path == "evaluate" ? "Score a predictions file by NDCG and top-k accuracy"
                                              : "Write a synthetic users and sessions dataset";
      cmd.app = app.add_subcommand(path, desc);
    }
    commands.push_back(std::move(cmd));
  }
  for (Command& cmd : commands) add_flags(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (Command& cmd : commands)
      if (cmd.app->parsed()) return dispatch(cmd);
    std::cerr << "error: no command given\n";
    return kUsage;
  } catch (const DivergenceError& e) {
    std::cerr << "numerical divergence: " << e.what() << '\n';
    return kNumericalError;
  } catch (const ConditioningError& e) {
    std::cerr << "ill-conditioned problem: " << e.what() << '\n';
    return kNumericalError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kDataError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const Json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace bayesdl::cli
