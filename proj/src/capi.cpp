#include "growup/growup.h"

#include "growup/config.hpp"
#include "growup/error.hpp"
#include "growup/pipelines.hpp"

#include <exception>
#include <new>
#include <string>

struct gu_config {
  growup::ExperimentConfig cfg;
  std::string echo;
};

struct gu_result {
  growup::CommandResult res;
};

struct gu_params {
  growup::ProblemParams pr;
};

struct gu_profile {
  growup::Profile prof;
};

namespace {

thread_local std::string g_message;
thread_local std::string g_tag;

gu_status code_of(growup::ErrorKind kind) {
  switch (kind) {
    case growup::ErrorKind::Regime: return GU_ERR_REGIME;
    case growup::ErrorKind::Numerical: return GU_ERR_NUMERICAL;
    case growup::ErrorKind::Acceptance: return GU_ERR_ACCEPTANCE;
    default: return GU_ERR_CONFIG;
  }
}

gu_status record(gu_status code, const std::string& tag, const std::string& message) {
  g_tag = tag;
  g_message = message;
  return code;
}

template <class F>
gu_status guarded(F&& body) {
  g_tag.clear();
  g_message.clear();
  try {
    body();
    return GU_OK;
  } catch (const growup::Error& e) {
    return record(code_of(e.kind()), e.tag(), e.what());
  } catch (const std::bad_alloc&) {
    return record(GU_ERR_NUMERICAL, "out_of_memory", "out of memory");
  } catch (const std::exception& e) {
    return record(GU_ERR_CONFIG, "internal", e.what());
  }
}

gu_status null_arg(const char* what) { return record(GU_ERR_CONFIG, "null_argument", std::string(what) + " is NULL"); }

}  // namespace

extern "C" {

const char* gu_last_error(void) { return g_message.c_str(); }
const char* gu_last_error_tag(void) { return g_tag.c_str(); }
const char* gu_version(void) { return "0.1.0"; }

gu_status gu_config_new(gu_config** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new gu_config{growup::ExperimentConfig{}, {}}; });
}

gu_status gu_config_load(const char* path, gu_config** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!path) return null_arg("path");
  return guarded([&] { *out = new gu_config{growup::ExperimentConfig::from_file(path), {}}; });
}

gu_status gu_config_parse(const char* text, gu_config** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!text) return null_arg("text");
  return guarded([&] { *out = new gu_config{growup::ExperimentConfig::from_text(text), {}}; });
}

gu_status gu_config_set(gu_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return null_arg("cfg, key or value");
  return guarded([&] { cfg->cfg.set(key, value); });
}

gu_status gu_config_get(const gu_config* cfg, const char* key, const char** value) {
  if (!cfg || !key || !value) return null_arg("cfg, key or value");
  return guarded([&] { *value = cfg->cfg.get(key).c_str(); });
}

const char* gu_config_echo(gu_config* cfg) {
  if (!cfg) return "";
  cfg->echo = cfg->cfg.echo();
  return cfg->echo.c_str();
}

void gu_config_free(gu_config* cfg) { delete cfg; }

const char* gu_command_name(size_t index) {
  const auto& names = growup::command_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

gu_status gu_run(const gu_config* cfg, const char* command, gu_result** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!cfg || !command) return null_arg("cfg or command");
  gu_status st = guarded([&] { *out = new gu_result{growup::run_command(command, cfg->cfg)}; });
  if (st == GU_OK && (*out)->res.status != 0) {
    st = static_cast<gu_status>((*out)->res.status);
    record(st, "check_failed", "one or more verification checks failed");
  }
  return st;
}

const char* gu_result_summary(const gu_result* res) { return res ? res->res.summary.c_str() : ""; }
size_t gu_result_file_count(const gu_result* res) { return res ? res->res.files.size() : 0; }
const char* gu_result_file(const gu_result* res, size_t index) {
  return res && index < res->res.files.size() ? res->res.files[index].c_str() : nullptr;
}
gu_status gu_result_status(const gu_result* res) {
  return res ? static_cast<gu_status>(res->res.status) : GU_ERR_CONFIG;
}
void gu_result_free(gu_result* res) { delete res; }

gu_status gu_params_create(double m, double p, int N, double sigma, double A, gu_params** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new gu_params{growup::validate_regime(m, p, N, sigma, A)}; });
}

gu_status gu_params_exponents(const gu_params* pr, gu_exponents* out) {
  if (!pr || !out) return null_arg("params or out");
  return guarded([&] {
    const auto ex = growup::derive_exponents(pr->pr);
    *out = {ex.L, ex.sigma_star, ex.alpha, ex.beta};
  });
}

gu_status gu_scaling_factor(const gu_params* pr, double c, double* out) {
  if (!pr || !out) return null_arg("params or out");
  return guarded([&] { *out = growup::scaling_factor(c, pr->pr); });
}

void gu_params_free(gu_params* pr) { delete pr; }

gu_status gu_profile_selfsimilar(const gu_params* pr, gu_profile** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!pr) return null_arg("params");
  return guarded([&] {
    const auto ex = growup::derive_exponents(pr->pr);
    *out = new gu_profile{growup::find_selfsimilar_profile(pr->pr, ex)};
  });
}

gu_status gu_profile_annular(const gu_params* pr, double R1, gu_profile** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!pr) return null_arg("params");
  return guarded([&] {
    const auto ex = growup::derive_exponents(pr->pr);
    const auto slopes = growup::config_slope_grid(growup::ExperimentConfig{});
    *out = new gu_profile{growup::find_annular_subsolution(pr->pr, ex, R1, slopes)};
  });
}

size_t gu_profile_size(const gu_profile* prof) { return prof ? prof->prof.xi.size() : 0; }
const double* gu_profile_xi(const gu_profile* prof) { return prof ? prof->prof.xi.data() : nullptr; }
const double* gu_profile_f(const gu_profile* prof) { return prof ? prof->prof.f.data() : nullptr; }
double gu_profile_support_lo(const gu_profile* prof) { return prof ? prof->prof.support_lo() : 0.0; }
double gu_profile_support_hi(const gu_profile* prof) { return prof ? prof->prof.support_hi() : 0.0; }
double gu_profile_shooting_parameter(const gu_profile* prof) { return prof ? prof->prof.shooting_parameter : 0.0; }
double gu_profile_eval(const gu_profile* prof, double xi) {
  return prof ? growup::evaluate_profile(prof->prof, xi) : 0.0;
}
void gu_profile_free(gu_profile* prof) { delete prof; }

}  // extern "C"
