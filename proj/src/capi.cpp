#include "superint/superint.h"

#include <exception>
#include <fstream>
#include <sstream>
#include <string>

#include "superint/errors.hpp"
#include "superint/lab.hpp"

struct si_report {
  std::string json;
  int passed = 0;
};

namespace {

thread_local std::string g_last_error;

si_rc run(const std::string& config_json, const char* out_dir,
              si_report** out) {
  g_last_error.clear();
  if (out) *out = nullptr;
  if (!out) {
    g_last_error = "out must not be null";
    return SI_CONFIG_ERROR;
  }
  try {
    auto result = superint::lab::run_experiment_str(
        config_json, out_dir ? out_dir : ".");
    auto* report = new si_report;
    report->json = result.report.dump(2);
    report->passed = result.passed ? 1 : 0;
    *out = report;
    return result.passed ? SI_OK : SI_FAIL;
  } catch (const superint::ConfigError& e) {
    g_last_error = e.what();
    return SI_CONFIG_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SI_RUNTIME_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return SI_RUNTIME_ERROR;
  }
}

}  // namespace

extern "C" {

si_rc si_run_config(const char* config_json, const char* out_dir,
                        si_report** out) {
  if (!config_json) {
    g_last_error = "config_json must not be null";
    if (out) *out = nullptr;
    return SI_CONFIG_ERROR;
  }
  return run(config_json, out_dir, out);
}

si_rc si_run_file(const char* config_path, const char* out_dir,
                      si_report** out) {
  if (out) *out = nullptr;
  if (!config_path) {
    g_last_error = "config_path must not be null";
    return SI_CONFIG_ERROR;
  }
  std::ifstream in(config_path);
  if (!in) {
    g_last_error = std::string("cannot read config file: ") + config_path;
    return SI_CONFIG_ERROR;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return run(buf.str(), out_dir, out);
}

int si_report_passed(const si_report* report) {
  return report ? report->passed : 0;
}

const char* si_report_json(const si_report* report) {
  return report ? report->json.c_str() : "";
}

void si_report_free(si_report* report) { delete report; }

const char* si_last_error(void) { return g_last_error.c_str(); }

const char* si_version(void) { return "1.0.0"; }

}  // extern "C"
