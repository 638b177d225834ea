// Command-line front end. Talks to the core only through the C API, like any
// external embedder would; the vendored JSON library is used just to splice
// command-line overrides into the config document.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "superint/superint.h"

namespace {

struct Args {
  std::string config;
  std::string out = ".";
  long long seed = -1;
};

int run(const std::string& experiment, const Args& args) {
  std::ifstream in(args.config);
  if (!in) {
    std::fprintf(stderr, "error: cannot read config file '%s'\n",
                 args.config.c_str());
    return 2;
  }
  nlohmann::json config;
  try {
    in >> config;
  } catch (const nlohmann::json::parse_error& e) {
    std::fprintf(stderr, "error: config is not valid JSON: %s\n", e.what());
    return 2;
  }

  if (config.contains("experiment") &&
      config["experiment"].get<std::string>() != experiment) {
    std::fprintf(stderr,
                 "error: config experiment '%s' does not match subcommand '%s'\n",
                 config["experiment"].get<std::string>().c_str(),
                 experiment.c_str());
    return 2;
  }
  config["experiment"] = experiment;
  if (args.seed >= 0) config["sampling"]["seed"] = args.seed;

  si_report* report = nullptr;
  si_rc status =
      si_run_config(config.dump().c_str(), args.out.c_str(), &report);
  if (report) {
    std::printf("%s\n", si_report_json(report));
    si_report_free(report);
  } else {
    std::fprintf(stderr, "error: %s\n", si_last_error());
  }
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superintegrability lab"};
  app.require_subcommand(1);

  Args args;
  int exit_code = 0;
  for (const char* name : {"verify", "rank", "coeffs", "equivalence", "simulate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config, "experiment config (JSON)")
        ->required();
    sub->add_option("--out", args.out, "output directory");
    sub->add_option("--seed", args.seed, "override sampling seed");
    sub->callback([&args, &exit_code, name] { exit_code = run(name, args); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return exit_code;
}
