#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qimpact/io.hpp"
#include "qimpact/run.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  std::string input_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = -1;
  std::vector<std::string> overrides;
};

int execute(const std::string& experiment, const CliOptions& opt) {
  using namespace qimpact;
  try {
    ExperimentConfig config;
    if (!opt.config_path.empty() && !opt.preset_name.empty())
      throw ConfigInvalid("--config and --preset are mutually exclusive");
    if (!opt.config_path.empty()) {
      config = config_from_json_text(read_file(opt.config_path));
    } else if (!opt.preset_name.empty()) {
      config = preset(opt.preset_name);
    } else {
      config.experiment = experiment;
    }
    if (config.experiment != experiment)
      throw ConfigInvalid("subcommand '" + experiment +
                          "' does not match configured experiment '" +
                          config.experiment + "'");
    if (!opt.out_dir.empty()) config.output_dir = opt.out_dir;
    if (opt.seed_set) config.seed = opt.seed;
    if (opt.threads >= 0) config.threads = opt.threads;
    if (!opt.input_path.empty()) config.input_path = opt.input_path;
    for (const auto& ov : opt.overrides) config = apply_override(config, ov);
    validate_config(config);

    RunManifest manifest = run(config);
    std::cout << "wrote " << manifest.artifacts.size() << " artifacts to "
              << resolve_output_dir(config) << " (config " << manifest.config_hash
              << ", " << manifest.wall_seconds << " s)\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Quantum impact-oscillator toolkit: eigensolves, wavepacket propagation, "
      "chaos diagnostics, OTOC and Langevin scans, classical baseline"};
  app.require_subcommand(1);

  CliOptions opt;
  int exit_code = 0;
  const std::vector<std::string> experiments = {
      "eigen", "evolve", "unforced", "forced", "otoc", "qle", "classical", "diagnose"};
  for (const auto& name : experiments) {
    CLI::App* sub = app.add_subcommand(name, "run the '" + name + "' experiment");
    sub->add_option("--config", opt.config_path, "JSON config file");
    sub->add_option("--preset", opt.preset_name,
                    "stock config: unforced-grazing, forced-grazing, otoc-scan, "
                    "qle-scan, classical-scan");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", opt.seed, "RNG seed")->each([&](const std::string&) {
      opt.seed_set = true;
    });
    sub->add_option("--threads", opt.threads, "parallelism cap (0 = all cores)");
    sub->add_option("--input", opt.input_path, "input CSV for 'diagnose'");
    sub->add_option("--override", opt.overrides,
                    "dotted.key=value config override (repeatable)");
    sub->callback([&, name] { exit_code = execute(name, opt); });
  }

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
