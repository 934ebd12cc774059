#ifndef QIMPACT_RUN_HPP
#define QIMPACT_RUN_HPP

#include <string>
#include <vector>

#include "qimpact/config.hpp"

namespace qimpact {

struct Artifact {
  std::string name;      // file name inside the output directory
  std::string checksum;  // FNV-1a 64 of the file bytes
};

struct RunManifest {
  std::string config_hash;
  std::string version;
  double wall_seconds = 0.0;
  std::vector<Artifact> artifacts;  // sorted by name; excludes manifest.json
};

/// Output directory after applying the QIMPACT_OUT environment override.
std::string resolve_output_dir(const ExperimentConfig& config);

/// Executes the configured experiment, writing CSV artifacts, a summary.json,
/// the canonical config.json, and manifest.json into the output directory.
/// All randomness derives from config.seed; reruns with an identical config
/// produce byte-identical artifacts regardless of the threads field.
RunManifest run(const ExperimentConfig& config);

std::string manifest_to_json_text(const RunManifest& manifest);
RunManifest manifest_from_json_text(const std::string& text);

}  // namespace qimpact

#endif
