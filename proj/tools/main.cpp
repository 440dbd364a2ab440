// Command line runner for the Trotter-error statistics experiments. Each
// subcommand reads a declarative config (JSON or flat TOML), runs the
// experiment with seeded determinism, and writes one CSV plus a JSON
// sidecar (config echo, version, predictions) into the output directory.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "trotkit/experiments.hpp"

namespace {

struct SubcommandSpec {
  const char* name;
  const char* description;
};

const SubcommandSpec kSubcommands[] = {
    {"variance-vs-time",
     "LU-ensemble variance of the one-step error estimate along a time grid.\n"
     "CSV columns: t, S_prefix1..S_prefixK (prefix-subset entanglement "
     "entropies in bits, K = floor(N/2)), mean_shat, var_shat, var_ci_lo, "
     "var_ci_hi (bootstrap CI), exact_var_lu, bound_trace_distance, "
     "bound_entropy, e_frob_sq."},
    {"kurtosis-vs-magic",
     "GC-ensemble kurtosis of the error estimate for T-gate ladder states.\n"
     "CSV columns: k, magic, mean_shat, var_shat, kurtosis, kurt_ci_lo, "
     "kurt_ci_hi (bootstrap CI), predicted_kurtosis (alpha + beta M)."},
    {"joint-lc",
     "LC-ensemble error distributions for three prepared states.\n"
     "CSV columns: state, t, entropy_half, magic, mean_shat, var_shat, "
     "kurtosis, q1, q5, q25, q50, q75, q95, q99 (sample quantiles)."},
    {"resource-growth",
     "Entanglement and magic of the evolved state along a time grid.\n"
     "CSV columns: preset, t, S_prefix1..S_prefixK (bits), magic."},
    {"long-time",
     "LU-ensemble variance of the r-step simulation error.\n"
     "CSV columns: t, S_half, mean_e, var_e, var_ci_lo, var_ci_hi, "
     "theorem3_bound (nan when disabled), triangle_max_violation (nan when "
     "the per-sample check is disabled)."},
};

std::string experiment_id(const std::string& subcommand) {
  std::string id = subcommand;
  for (char& c : id)
    if (c == '-') c = '_';
  return id;
}

}  // namespace

int main(int argc, char** argv) try {
  CLI::App app{"trotkit: Trotter-error statistics under quantum-resource "
               "ensembles"};
  app.require_subcommand(1);

  std::string config_path;
  trotkit::CliOverrides overrides;
  std::uint64_t seed_arg = 0;
  std::string out_dir_arg;
  int workers_arg = 0;
  int samples_arg = 0;

  std::string chosen;
  for (const auto& spec : kSubcommands) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.description);
    sub->add_option("--config", config_path, "config file (.json or .toml)")
        ->required();
    sub->add_option("--seed", seed_arg, "override the master seed");
    sub->add_option("--out-dir", out_dir_arg, "override the output directory");
    sub->add_option("--workers", workers_arg, "override the worker count");
    sub->add_option("--samples-override", samples_arg,
                    "override the ensemble sample count");
    sub->callback([&chosen, name = std::string(spec.name)]() { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    trotkit::ExperimentConfig cfg = trotkit::load_config(config_path);
    std::string expected = experiment_id(chosen);
    if (cfg.experiment != expected)
      throw trotkit::ConfigError("config is for experiment '" + cfg.experiment +
                                 "' but subcommand '" + chosen +
                                 "' expects '" + expected + "'");
    CLI::App* sub = app.get_subcommand(chosen);
    if (sub->count("--seed")) overrides.seed = seed_arg;
    if (sub->count("--out-dir")) overrides.out_dir = out_dir_arg;
    if (sub->count("--workers")) overrides.workers = workers_arg;
    if (sub->count("--samples-override"))
      overrides.samples_override = samples_arg;
    trotkit::apply_overrides(cfg, overrides);

    trotkit::ExperimentResult res = trotkit::run_experiment(cfg);
    std::printf("wrote %s\n", res.csv_path.c_str());
    std::printf("wrote %s\n", res.json_path.c_str());
    return 0;
  } catch (const trotkit::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const trotkit::NumericLimitError& e) {
    std::fprintf(stderr, "numeric limit error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
} catch (const std::exception& e) {
  std::fprintf(stderr, "fatal: %s\n", e.what());
  return 1;
}
