#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "qimpact/config.hpp"
#include "qimpact/io.hpp"
#include "qimpact/run.hpp"

using namespace qimpact;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("qimpact_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("float formatting round-trips exactly") {
  for (double v : {0.0, 1.0, -5.0, M_PI, 3.0905, 1e-17, 6.02214076e23,
                   0.1 + 0.2, std::nextafter(1.0, 2.0)}) {
    CHECK(std::stod(format_float(v)) == v);
  }
}

TEST_CASE("csv writer is byte-deterministic") {
  fs::path dir = fresh_dir("csv");
  const std::vector<std::vector<double>> rows = {{1.0, M_PI}, {-2.5, 1e-300}};
  write_csv((dir / "a.csv").string(), "x,y", rows);
  write_csv((dir / "b.csv").string(), "x,y", rows);
  CHECK(checksum_file((dir / "a.csv").string()) ==
        checksum_file((dir / "b.csv").string()));
  CHECK(read_file((dir / "a.csv").string()).substr(0, 4) == "x,y\n");
}

TEST_CASE("presets carry the published parameter sets") {
  ExperimentConfig qle = preset("qle-scan");
  CHECK(qle.experiment == "qle");
  CHECK(qle.potential.k == 1.0);
  CHECK(qle.potential.A == 10.0);
  CHECK(qle.potential.m == 1.0);
  CHECK(qle.potential.A_f == 10.0);
  // Published as the cyclic frequency 0.8046; the spec field is angular.
  CHECK(qle.potential.omega_f == doctest::Approx(2.0 * M_PI * 0.8046));
  CHECK(qle.noise_kT == 0.01);
  CHECK(qle.noise_Gamma == 1.0);
  CHECK(qle.noise_tau_c == 3.0);
  CHECK(qle.potential.hbar == 0.01);

  ExperimentConfig forced = preset("forced-grazing");
  CHECK(forced.potential.x_w == 5.0);
  CHECK(forced.potential.A_f == doctest::Approx(3.0905));
  CHECK(forced.potential.omega_f == doctest::Approx((std::sqrt(5.0) + 1.0) / 2.0));
  CHECK(forced.potential.k == 1.0);
  CHECK(forced.potential.m == 1.0);
  CHECK(forced.potential.hbar == 1.0);

  CHECK(preset("unforced-grazing").experiment == "unforced");
  CHECK(preset("otoc-scan").betas == std::vector<double>{0.5});
  CHECK(preset("classical-scan").restitution == doctest::Approx(0.95));

  CHECK_THROWS_AS(preset("bogus"), UnknownPreset);
}

TEST_CASE("config serialization round-trips losslessly") {
  ExperimentConfig a = preset("forced-grazing");
  a.seed = 42;
  a.betas = {0.5, 1.0, 10.0};
  a.output_dir = "somewhere";
  const std::string text = config_to_json_text(a);
  ExperimentConfig b = config_from_json_text(text);
  CHECK(config_to_json_text(b) == text);
  CHECK(config_hash(a) == config_hash(b));
  CHECK(b.betas == a.betas);
  CHECK(b.dt == a.dt);
  CHECK(b.potential.omega_f == a.potential.omega_f);
}

TEST_CASE("strict parsing rejects unknown keys and bad values") {
  CHECK_THROWS_AS(config_from_json_text("{\"experiment\":\"eigen\",\"bogus\":1}"),
                  ConfigInvalid);
  CHECK_THROWS_AS(
      config_from_json_text(
          "{\"experiment\":\"eigen\",\"potential\":{\"mass\":2.0}}"),
      ConfigInvalid);
  CHECK_THROWS_AS(config_from_json_text("{\"seed\":1}"), ConfigInvalid);
  CHECK_THROWS_AS(config_from_json_text("{\"experiment\":\"nope\"}"), ConfigInvalid);
  CHECK_THROWS_AS(
      config_from_json_text("{\"experiment\":\"eigen\",\"time\":{\"dt\":-1}}"),
      ConfigInvalid);
  CHECK_THROWS_AS(config_from_json_text("not json"), ConfigInvalid);
}

TEST_CASE("overrides modify nested fields and keep the schema strict") {
  ExperimentConfig base = preset("otoc-scan");
  ExperimentConfig mod = apply_override(base, "potential.x_w=4.5");
  CHECK(mod.potential.x_w == 4.5);
  mod = apply_override(mod, "otoc.betas=[1.0,2.0]");
  CHECK(mod.betas == std::vector<double>{1.0, 2.0});
  mod = apply_override(mod, "output_dir=elsewhere");
  CHECK(mod.output_dir == "elsewhere");
  CHECK_THROWS_AS(apply_override(base, "potential.bogus=1"), ConfigInvalid);
  CHECK_THROWS_AS(apply_override(base, "no_equals_sign"), ConfigInvalid);
}

TEST_CASE("eigen experiment writes artifacts with verifying checksums") {
  ExperimentConfig c;
  c.experiment = "eigen";
  c.potential.variant = PotentialVariant::HardWall;
  c.potential.x_w = 0.0;
  c.x_min = -15.0;
  c.x_max = 0.0;
  c.grid_n = 256;
  c.n_states = 8;
  fs::path dir = fresh_dir("eigen");
  c.output_dir = dir.string();

  RunManifest m = run(c);
  CHECK(m.config_hash == config_hash(c));
  CHECK(m.artifacts.size() >= 3);  // config.json, energies.csv, summary.json
  for (const auto& a : m.artifacts)
    CHECK(checksum_file((dir / a.name).string()) == a.checksum);

  RunManifest reread =
      manifest_from_json_text(read_file((dir / "manifest.json").string()));
  CHECK(reread.config_hash == m.config_hash);
  REQUIRE(reread.artifacts.size() == m.artifacts.size());
  for (size_t i = 0; i < m.artifacts.size(); ++i)
    CHECK(reread.artifacts[i].checksum == m.artifacts[i].checksum);

  // Half-oscillator ground state from the emitted CSV: E_0 = 1.5.
  const std::string csv = read_file((dir / "energies.csv").string());
  const auto line1 = csv.find('\n') + 1;
  const auto comma = csv.find(',', line1);
  const double e0 = std::stod(csv.substr(comma + 1));
  CHECK(e0 == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
  ExperimentConfig c;
  c.experiment = "classical";
  c.potential.A_f = 1.0;
  c.potential.omega_f = 0.8046;
  c.restitution = 0.95;
  c.scan_lo = 2.9;
  c.scan_hi = 3.1;
  c.scan_step = 0.1;
  c.seed = 5;

  fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
  c.output_dir = d1.string();
  RunManifest m1 = run(c);
  c.output_dir = d2.string();
  c.threads = 2;  // parallelism degree must not change the results
  RunManifest m2 = run(c);

  REQUIRE(m1.artifacts.size() == m2.artifacts.size());
  for (size_t i = 0; i < m1.artifacts.size(); ++i) {
    CHECK(m1.artifacts[i].name == m2.artifacts[i].name);
    if (m1.artifacts[i].name == "config.json") continue;  // differs by output_dir
    CHECK(m1.artifacts[i].checksum == m2.artifacts[i].checksum);
  }
}

TEST_CASE("QIMPACT_OUT overrides the configured output directory") {
  ExperimentConfig c;
  c.experiment = "eigen";
  c.output_dir = "ignored";
  fs::path dir = fresh_dir("envout");
  setenv("QIMPACT_OUT", dir.string().c_str(), 1);
  CHECK(resolve_output_dir(c) == dir.string());
  unsetenv("QIMPACT_OUT");
  CHECK(resolve_output_dir(c) == "ignored");
}

TEST_CASE("diagnose runs the chaos battery on an external series") {
  fs::path dir = fresh_dir("diag");
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 4000; ++i)
    rows.push_back({0.1 * i, std::sin(0.3 * i) + 0.5 * std::sin(0.11 * i)});
  write_csv((dir / "series.csv").string(), "t,value", rows);

  ExperimentConfig c;
  c.experiment = "diagnose";
  c.input_path = (dir / "series.csv").string();
  c.output_dir = (dir / "out").string();
  RunManifest m = run(c);
  const std::string summary = read_file((dir / "out" / "summary.json").string());
  CHECK(summary.find("K_median_standard") != std::string::npos);
  CHECK(m.artifacts.size() >= 3);

  c.input_path.clear();
  CHECK_THROWS_AS(run(c), ConfigInvalid);
}
