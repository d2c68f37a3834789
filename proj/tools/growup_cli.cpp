// Command-line front end. Links only the C API of libgrowup.
#include "growup/growup.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

struct Options {
  std::string config;
  std::vector<std::string> sets;
  std::string output;
  bool quiet = false;
};

struct ConfigHandle {
  gu_config* ptr = nullptr;
  ~ConfigHandle() { gu_config_free(ptr); }
};

struct ResultHandle {
  gu_result* ptr = nullptr;
  ~ResultHandle() { gu_result_free(ptr); }
};

int report_error(gu_status st) {
  std::fprintf(stderr, "growup: error [%s]: %s\n", gu_last_error_tag(), gu_last_error());
  return static_cast<int>(st);
}

int run(const std::string& command, const Options& opt, const std::vector<std::pair<std::string, std::string>>& extra) {
  ConfigHandle cfg;
  gu_status st = opt.config.empty() ? gu_config_new(&cfg.ptr) : gu_config_load(opt.config.c_str(), &cfg.ptr);
  if (st != GU_OK) return report_error(st);
  for (const auto& [key, value] : extra)
    if ((st = gu_config_set(cfg.ptr, key.c_str(), value.c_str())) != GU_OK) return report_error(st);
  for (const auto& kv : opt.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "growup: error [bad_override]: expected key=value, got '%s'\n", kv.c_str());
      return GU_ERR_CONFIG;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    st = gu_config_set(cfg.ptr, trim(kv.substr(0, eq)).c_str(), trim(kv.substr(eq + 1)).c_str());
    if (st != GU_OK) return report_error(st);
  }
  if (!opt.output.empty() && (st = gu_config_set(cfg.ptr, "run.output", opt.output.c_str())) != GU_OK)
    return report_error(st);

  ResultHandle res;
  st = gu_run(cfg.ptr, command.c_str(), &res.ptr);
  if (!res.ptr) return report_error(st);
  if (!opt.quiet) {
    std::fputs(gu_result_summary(res.ptr), stdout);
    for (size_t i = 0; i < gu_result_file_count(res.ptr); ++i) std::printf("wrote %s\n", gu_result_file(res.ptr, i));
  }
  if (st != GU_OK) std::fprintf(stderr, "growup: %s\n", gu_last_error());
  return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grow-up of weighted porous medium equations: profiles, phase plane, simulations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(gu_version()));
  Options opt;
  app.add_option("-c,--config", opt.config, "experiment file with key = value lines")->check(CLI::ExistingFile);
  app.add_option("-s,--set", opt.sets, "override a configuration key, key=value (repeatable)");
  app.add_option("-o,--output", opt.output, "output directory (run.output)");
  app.add_flag("-q,--quiet", opt.quiet, "suppress the summary");

  std::vector<std::pair<std::string, std::string>> extra;
  auto flag_key = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(flag, [&extra, key](const std::string& v) { extra.emplace_back(key, v); },
                                          help + " (" + key + ")");
  };

  std::string chosen;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->callback([&chosen, name] { chosen = name; });
    return sub;
  };
  add("exponents", "print L, sigma_star, alpha and beta");
  auto* profile = add("profile", "compute the self-similar and/or annular profile as CSV");
  flag_key(profile, "--kind", "profile.kind", "selfsimilar, annular or both");
  flag_key(profile, "--R1", "annulus.R1", "inner radius of the annular profile");
  auto* phase = add("phase", "phase portrait of the invariant plane as CSV and SVG");
  flag_key(phase, "--fan-size", "phase.fan_size", "trajectories above the separatrix");
  flag_key(phase, "--Y-far", "phase.Y_far", "escape threshold in Y");
  flag_key(phase, "--svg", "phase.svg", "SVG path");
  auto* sim = add("simulate", "run the finite-volume solver and write diagnostics");
  flag_key(sim, "--frame", "run.frame", "physical or selfsimilar");
  flag_key(sim, "--weight", "weight.kind", "regular, singular, scaled, perturbed or tabulated");
  flag_key(sim, "--init", "init.kind", "bump, indicator, profile or tabulated");
  flag_key(sim, "--n", "numerics.n", "number of cells");
  flag_key(sim, "--horizon", "run.horizon", "final t or s");
  flag_key(sim, "--probes", "run.probes", "number of probe times");
  add("verify", "check a simulate run directory");
  auto* fig = add("reproduce-figure1", "phase portrait for m=3, p=2, N=4, sigma=-1.5");
  flag_key(fig, "--svg", "phase.svg", "SVG path");
  auto* thm = add("reproduce-theorem", "convergence to the limit profile for regular and perturbed weights");
  flag_key(thm, "--n", "numerics.n", "number of cells");
  flag_key(thm, "--horizon", "theorem.horizon", "final s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : GU_ERR_CONFIG;
  }
  return run(chosen, opt, extra);
}
