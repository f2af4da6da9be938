#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cfplace/geometry.hpp"
#include "cfplace/metrics.hpp"
#include "cfplace/scenario.hpp"

namespace cfplace {

// JSON experiment configs (schema in docs/config.md) and the result files the
// runner writes. Parse errors throw std::runtime_error naming the field.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

// Canonical serialization (resolved units, sorted keys); hashing and the
// round-trip tests go through this.
std::string config_to_json(const ExperimentConfig& config);

std::uint64_t fnv1a64(const std::string& text);
std::string config_hash(const ExperimentConfig& config);  // 16 hex digits

void write_placement_json(const std::filesystem::path& path, const Placement& aps,
                          const std::string& method, std::uint64_t seed);
Placement read_placement_json(const std::filesystem::path& path);

// rates.csv: header rho_r_db,sum_rate,likely95_rate,stderr_sum,stderr_95;
// floats as %.9g.
void write_rates_csv(const std::filesystem::path& path, const RateReport& report);

// rates.json carries the full report including pooled per-user samples.
void write_rates_json(const std::filesystem::path& path, const RateReport& report,
                      const std::string& method);
RateReport read_rates_json(const std::filesystem::path& path);

struct ImprovementRow {
  std::string baseline;
  std::string candidate;
  std::string metric;  // "sum_rate" or "likely95"
  double rho_db = 0.0;
  double base_value = 0.0;
  double new_value = 0.0;
  double improvement_pct = 0.0;
};

void write_improvements_csv(const std::filesystem::path& path,
                            const std::vector<ImprovementRow>& rows);

// Written as manifest.json next to a run's outputs. The JSON holds only
// run-identity fields (hash, seed, method, output basenames) so a rerun with
// the same config is byte-identical; timings are printed, never stored.
struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string method;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, double>> timings_sec;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace cfplace
