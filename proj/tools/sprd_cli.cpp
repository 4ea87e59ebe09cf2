// Command-line front end; talks to the library only through the C API.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sprd/sprd.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config;
  std::optional<unsigned long long> seed;
  std::optional<int> threads;
  std::string out;
  std::vector<std::string> sets;
  // check
  std::string model;
  std::string condition;
  std::optional<double> zeta;
  std::optional<double> box_halfwidth;
  std::optional<unsigned long long> samples;
  std::optional<double> epsilon;
  std::string envelope;
  // plotdata
  std::string kind;
};

int report(sprd_status st) {
  std::cerr << "sprd: " << sprd_last_error() << '\n';
  return st == SPRD_CONFIG || st == SPRD_INVALID_ARGUMENT ? kExitUsage : kExitRuntime;
}

struct ConfigHandle {
  sprd_config* ptr = nullptr;
  ~ConfigHandle() { sprd_config_free(ptr); }
};

sprd_status set(sprd_config* cfg, const std::string& key, const std::string& value) {
  return sprd_config_set(cfg, key.c_str(), value.c_str());
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int dispatch(const std::string& cmd, const Options& o) {
  ConfigHandle cfg;
  std::string path = o.config;
  if (path.empty()) path = o.model;
  const bool needs_config = cmd != "gronwall";
  if (path.empty() && needs_config) {
    std::cerr << "sprd " << cmd << ": --config is required\n";
    return kExitUsage;
  }
  sprd_status st = path.empty() ? sprd_config_default(&cfg.ptr)
                                : sprd_config_load(path.c_str(), &cfg.ptr);
  if (st != SPRD_OK) return report(st);

  std::vector<std::pair<std::string, std::string>> overrides;
  if (o.seed) overrides.emplace_back("seed", std::to_string(*o.seed));
  if (o.threads) overrides.emplace_back("threads", std::to_string(*o.threads));
  if (!o.condition.empty()) overrides.emplace_back("check.condition", o.condition);
  if (o.zeta) overrides.emplace_back("check.zeta", num(*o.zeta));
  if (o.box_halfwidth) overrides.emplace_back("check.box_halfwidth", num(*o.box_halfwidth));
  if (o.samples) overrides.emplace_back("check.samples", std::to_string(*o.samples));
  if (o.epsilon) overrides.emplace_back("check.epsilon", num(*o.epsilon));
  if (!o.envelope.empty()) overrides.emplace_back("check.envelope", o.envelope);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "sprd: --set expects key=value, got '" << s << "'\n";
      return kExitUsage;
    }
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& [k, v] : overrides)
    if ((st = set(cfg.ptr, k, v)) != SPRD_OK) return report(st);

  const char* out = o.out.empty() ? nullptr : o.out.c_str();
  char* json = nullptr;
  int passed = 1;
  if (cmd == "check") st = sprd_check(cfg.ptr, out, &json, &passed);
  else if (cmd == "run") st = sprd_run(cfg.ptr, out, &json, &passed);
  else if (cmd == "ensemble") st = sprd_ensemble(cfg.ptr, out, &json, &passed);
  else if (cmd == "depcheck") st = sprd_depcheck(cfg.ptr, out, &json, &passed);
  else if (cmd == "gronwall") st = sprd_gronwall(cfg.ptr, out, &json, &passed);
  else st = sprd_plotdata(cfg.ptr, o.kind.c_str(), out, &json);
  if (st != SPRD_OK) return report(st);
  std::cout << json << '\n';
  sprd_string_free(json);
  return passed ? kExitOk : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic reaction-diffusion toolkit: coercivity checks, simulation, "
               "ensembles and Gronwall experiments"};
  app.set_version_flag("--version", std::string(sprd_version()));
  app.require_subcommand(1, 1);

  Options o;
  auto common = [&](CLI::App* sub, bool config) {
    if (config) sub->add_option("-c,--config", o.config, "YAML configuration file");
    sub->add_option("--seed", o.seed, "Base seed");
    sub->add_option("--threads", o.threads, "Worker threads (0: SPRD_THREADS or all cores)");
    sub->add_option("-o,--out", o.out, "Output directory (default: config 'output')");
    sub->add_option("--set", o.sets, "Override a config entry, e.g. --set solver.dt=1e-4");
  };

  auto* check = app.add_subcommand("check", "Certify a coercivity condition; exit 1 on failure");
  common(check, true);
  check->add_option("--model", o.model, "Configuration file holding the model (alias of --config)");
  check->add_option("--condition", o.condition,
                    "scalar_pointwise, scalar_smooth, strong_dissipativity, system, growth_envelope");
  check->add_option("--zeta", o.zeta, "Energy exponent");
  check->add_option("--box-halfwidth", o.box_halfwidth, "Half-width of the sampling box");
  check->add_option("--samples", o.samples, "Number of sample points");
  check->add_option("--epsilon", o.epsilon, "Slack taken from the diffusion");
  check->add_option("--envelope", o.envelope, "lotka_volterra, brusselator, brusselator_3d");

  auto* run = app.add_subcommand("run", "Simulate one path and write diagnostics");
  common(run, true);
  auto* ens = app.add_subcommand("ensemble", "Path ensemble: statistics, tails, certificate");
  common(ens, true);
  auto* dep = app.add_subcommand("depcheck", "Continuous dependence on initial data");
  common(dep, true);
  auto* gw = app.add_subcommand("gronwall", "Monte Carlo test matrix of the Gronwall bound");
  common(gw, true);
  auto* plot = app.add_subcommand("plotdata", "Write plot-ready CSV tables");
  common(plot, true);
  plot->add_option("--kind", o.kind, "energy, tail, dependence or raster")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  return dispatch(app.get_subcommands().front()->get_name(), o);
}
