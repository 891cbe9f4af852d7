#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace bodycomp {

// Every threshold (HU), radius (mm), and volume floor (cc) used by the
// compartment pipeline. Defaults are the published procedure's values, except
// body_threshold_hu which the procedure leaves open.
struct PipelineConfig {
  double body_threshold_hu = -250.0;  // body = HU > this
  double body_erode_mm = 4.0;

  double bone_low_hu = 200.0;   // grow: HU >= low
  double bone_high_hu = 400.0;  // seed: HU >= high
  double bone_close_mm = 16.0;

  double lung_low_hu = -900.0;  // low <= HU <= high
  double lung_high_hu = -300.0;
  double lung_close_mm = 5.0;
  std::size_t lung_keep_top = 2;
  double lung_min_cc = 200.0;

  double sat_seed_hu = -50.0;  // seed: HU < seed
  double sat_grow_hu = 0.0;    // grow: HU < grow
  double sat_openclose_mm = 1.0;

  double muscle_max_hu = 200.0;  // HU < max
  double muscle_open_mm = 2.0;

  double vat_floor_hu = -200.0;  // seed: floor < HU < seed; grow: floor < HU < grow
  double vat_seed_hu = -50.0;
  double vat_grow_hu = 0.0;
  double vat_openclose_mm = 1.0;

  double target_slice_mm = 2.0;

  // Throws ConfigError on inconsistent values.
  void validate() const;

  bool operator==(const PipelineConfig&) const = default;
};

// Flat text form: one `name = value` per line, '#' starts a comment.
// Missing keys keep their defaults; unknown keys are an error.
PipelineConfig parse_config(const std::string& text);
std::string format_config(const PipelineConfig& config);

PipelineConfig read_config(const std::filesystem::path& path);
void write_config(const PipelineConfig& config, const std::filesystem::path& path);

// Ordered (name, value) pairs of a config; the JSON reports echo these.
std::vector<std::pair<std::string, double>> config_entries(const PipelineConfig& config);

// Shared line parser for the flat key-value format. Throws ConfigError on a
// line without '=' or with an empty key.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);

}  // namespace bodycomp
