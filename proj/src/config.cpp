#include "bodycomp/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "bodycomp/errors.hpp"
#include "bodycomp/metaimage.hpp"

namespace bodycomp {

namespace {

struct Field {
  const char* name;
  const char* unit;
  double PipelineConfig::*real = nullptr;
  std::size_t PipelineConfig::*count = nullptr;
};

const std::array<Field, 20> kFields{{
    {"body_threshold_hu", "HU", &PipelineConfig::body_threshold_hu},
    {"body_erode_mm", "mm", &PipelineConfig::body_erode_mm},
    {"bone_low_hu", "HU", &PipelineConfig::bone_low_hu},
    {"bone_high_hu", "HU", &PipelineConfig::bone_high_hu},
    {"bone_close_mm", "mm", &PipelineConfig::bone_close_mm},
    {"lung_low_hu", "HU", &PipelineConfig::lung_low_hu},
    {"lung_high_hu", "HU", &PipelineConfig::lung_high_hu},
    {"lung_close_mm", "mm", &PipelineConfig::lung_close_mm},
    {"lung_keep_top", "components", nullptr, &PipelineConfig::lung_keep_top},
    {"lung_min_cc", "cc", &PipelineConfig::lung_min_cc},
    {"sat_seed_hu", "HU", &PipelineConfig::sat_seed_hu},
    {"sat_grow_hu", "HU", &PipelineConfig::sat_grow_hu},
    {"sat_openclose_mm", "mm", &PipelineConfig::sat_openclose_mm},
    {"muscle_max_hu", "HU", &PipelineConfig::muscle_max_hu},
    {"muscle_open_mm", "mm", &PipelineConfig::muscle_open_mm},
    {"vat_floor_hu", "HU", &PipelineConfig::vat_floor_hu},
    {"vat_seed_hu", "HU", &PipelineConfig::vat_seed_hu},
    {"vat_grow_hu", "HU", &PipelineConfig::vat_grow_hu},
    {"vat_openclose_mm", "mm", &PipelineConfig::vat_openclose_mm},
    {"target_slice_mm", "mm", &PipelineConfig::target_slice_mm},
}};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("config key " + key + ": '" + text + "' is not a number");
  }
  return value;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("invalid pipeline config: " + message);
}

}  // namespace

void PipelineConfig::validate() const {
  for (const auto& f : kFields) {
    if (f.real) require(std::isfinite(this->*f.real), std::string(f.name) + " must be finite");
  }
  for (double r : {body_erode_mm, bone_close_mm, lung_close_mm, sat_openclose_mm, muscle_open_mm,
                   vat_openclose_mm}) {
    require(r >= 0.0, "radii must be >= 0 mm");
  }
  require(bone_high_hu >= bone_low_hu, "bone seed threshold must not be below the grow threshold");
  require(lung_low_hu < lung_high_hu, "lung_low_hu must be < lung_high_hu");
  require(lung_min_cc >= 0.0, "lung_min_cc must be >= 0");
  require(sat_seed_hu <= sat_grow_hu, "sat_seed_hu must be <= sat_grow_hu");
  require(vat_seed_hu <= vat_grow_hu, "vat_seed_hu must be <= vat_grow_hu");
  require(vat_floor_hu < vat_seed_hu, "vat_floor_hu must be < vat_seed_hu");
  require(target_slice_mm > 0.0, "target_slice_mm must be > 0");
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected 'name = value'");
    }
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
    out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return out;
}

PipelineConfig parse_config(const std::string& text) {
  std::map<std::string, const Field*> by_name;
  for (const auto& f : kFields) by_name[f.name] = &f;

  PipelineConfig config;
  for (const auto& [key, value] : parse_key_values(text)) {
    auto it = by_name.find(key);
    if (it == by_name.end()) throw ConfigError("unknown config key '" + key + "'");
    const Field& f = *it->second;
    const double v = parse_real(key, value);
    if (f.real) {
      config.*f.real = v;
    } else {
      if (v < 0.0 || v != std::floor(v)) throw ConfigError(key + " must be a non-negative integer");
      config.*f.count = static_cast<std::size_t>(v);
    }
  }
  config.validate();
  return config;
}

std::vector<std::pair<std::string, double>> config_entries(const PipelineConfig& config) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& f : kFields) {
    out.emplace_back(f.name, f.real ? config.*f.real : static_cast<double>(config.*f.count));
  }
  return out;
}

std::string format_config(const PipelineConfig& config) {
  std::ostringstream out;
  out << "# body-composition pipeline configuration\n";
  for (const auto& f : kFields) {
    const double v = f.real ? config.*f.real : static_cast<double>(config.*f.count);
    out << f.name << " = " << format_double(v) << "  # " << f.unit << "\n";
  }
  return out.str();
}

PipelineConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void write_config(const PipelineConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write config file " + path.string());
  out << format_config(config);
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace bodycomp
