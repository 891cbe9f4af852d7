#include "bodycomp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bodycomp/masks.hpp"

namespace bodycomp {

Scores scores_from_counts(const OverlapCounts& c) {
  const auto tp = static_cast<double>(c.tp);
  const auto fp = static_cast<double>(c.fp);
  const auto fn = static_cast<double>(c.fn);
  Scores s;
  const bool truth_empty = c.tp + c.fn == 0;
  const bool pred_empty = c.tp + c.fp == 0;
  if (truth_empty && pred_empty) {
    s.dice = 1.0;
    s.recall = 1.0;
    s.precision = 1.0;
    return s;
  }
  s.dice = 2.0 * tp / (2.0 * tp + fp + fn);
  if (!truth_empty) s.recall = tp / (tp + fn);
  if (!pred_empty) s.precision = tp / (tp + fp);
  return s;
}

namespace {

OverlapCounts count_range(const BinaryMask& pred, const BinaryMask& truth, std::size_t begin,
                          std::size_t end) {
  OverlapCounts c;
  for (std::size_t i = begin; i < end; ++i) {
    const bool p = pred[i] != 0, t = truth[i] != 0;
    c.tp += (p && t) ? 1 : 0;
    c.fp += (p && !t) ? 1 : 0;
    c.fn += (!p && t) ? 1 : 0;
  }
  return c;
}

}  // namespace

OverlapCounts overlap_counts(const BinaryMask& pred, const BinaryMask& truth) {
  require_same_geometry(pred.geometry(), truth.geometry(), "prediction vs truth");
  return count_range(pred, truth, 0, pred.size());
}

OverlapCounts overlap_counts(const BinaryMask& pred, const BinaryMask& truth,
                             const std::vector<int>& slices) {
  require_same_geometry(pred.geometry(), truth.geometry(), "prediction vs truth");
  if (slices.empty()) throw std::invalid_argument("sampled scoring needs at least one slice");
  const auto& d = pred.dims();
  const std::size_t plane = static_cast<std::size_t>(d[0]) * static_cast<std::size_t>(d[1]);
  OverlapCounts total;
  for (int z : slices) {
    if (z < 0 || z >= d[2]) {
      throw std::invalid_argument("slice index " + std::to_string(z) + " out of range");
    }
    const auto begin = static_cast<std::size_t>(z) * plane;
    total += count_range(pred, truth, begin, begin + plane);
  }
  return total;
}

Scores score(const BinaryMask& pred, const BinaryMask& truth) {
  return scores_from_counts(overlap_counts(pred, truth));
}

Scores score_sampled(const BinaryMask& pred, const BinaryMask& truth,
                     const std::vector<int>& slices) {
  return scores_from_counts(overlap_counts(pred, truth, slices));
}

SliceSample sample_slices(const BinaryMask& cavity, int k) {
  if (k < 1) throw std::invalid_argument("slice count must be >= 1");
  const auto box = bounding_box(cavity);
  if (box.empty()) throw std::invalid_argument("cannot sample slices of an empty cavity");
  const int z_min = box.lo[2], z_max = box.hi[2];

  std::vector<int> raw;
  if (k == 1) {
    raw.push_back(static_cast<int>(std::lround(0.5 * (z_min + z_max))));
  } else {
    const double step = static_cast<double>(z_max - z_min) / (k - 1);
    for (int i = 0; i < k; ++i) raw.push_back(static_cast<int>(std::lround(z_min + i * step)));
  }
  SliceSample out;
  out.indices = raw;
  std::sort(out.indices.begin(), out.indices.end());
  out.indices.erase(std::unique(out.indices.begin(), out.indices.end()), out.indices.end());
  out.duplicates_removed = raw.size() - out.indices.size();
  return out;
}

EvalReport evaluate(const LabelMap& pred, const LabelMap& truth,
                    const std::optional<SliceSample>& sample) {
  require_same_geometry(pred.geometry(), truth.geometry(), "prediction vs truth labels");
  EvalReport report;
  if (sample) {
    report.mode = EvalMode::SampledSlices;
    report.slices = sample->indices;
    report.duplicates_removed = sample->duplicates_removed;
  }
  for (Label label : kScoredLabels) {
    const auto p = label_mask(pred, label);
    const auto t = label_mask(truth, label);
    report.compartments.push_back(
        {label, sample ? score_sampled(p, t, sample->indices) : score(p, t)});
  }
  return report;
}

const CompartmentVolume& CompositionReport::get(Label label) const {
  for (const auto& c : compartments) {
    if (c.label == label) return c;
  }
  throw std::out_of_range(std::string("composition has no compartment ") + label_name(label));
}

CompositionReport composition(const LabelMap& labels) {
  std::array<std::size_t, kMaxLabelCode + 1> counts{};
  for (auto code : labels.data()) ++counts[static_cast<std::size_t>(code)];

  CompositionReport report;
  report.voxel_volume_mm3 = labels.geometry().voxel_volume_mm3();
  const double voxel_cc = labels.geometry().voxel_volume_cc();
  for (Label label : kScoredLabels) {
    const auto n = counts[static_cast<std::size_t>(label)];
    report.compartments.push_back({label, n, static_cast<double>(n) * voxel_cc});
  }
  report.body_voxel_count = labels.size() - counts[0];
  report.body_volume_cc = static_cast<double>(report.body_voxel_count) * voxel_cc;
  const auto& sat = report.get(Label::Sat);
  if (sat.voxel_count > 0) {
    report.vat_sat_ratio = report.get(Label::Vat).volume_cc / sat.volume_cc;
  }
  return report;
}

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json config_json(const PipelineConfig* config) {
  if (!config) return nullptr;
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [name, value] : config_entries(*config)) out[name] = value;
  return out;
}

}  // namespace

nlohmann::ordered_json to_json(const EvalReport& report, const PipelineConfig* config) {
  nlohmann::ordered_json out;
  out["mode"] = report.mode == EvalMode::WholeVolume ? "whole-volume" : "sampled-slices";
  if (report.mode == EvalMode::SampledSlices) {
    out["slices"] = report.slices;
    out["duplicate_slices_removed"] = report.duplicates_removed;
  } else {
    out["slices"] = nullptr;
  }
  nlohmann::ordered_json comps = nlohmann::ordered_json::object();
  for (const auto& c : report.compartments) {
    comps[label_name(c.label)] = {{"dice", c.scores.dice},
                                  {"recall", optional_number(c.scores.recall)},
                                  {"precision", optional_number(c.scores.precision)}};
  }
  out["compartments"] = std::move(comps);
  out["config_echo"] = config_json(config);
  return out;
}

nlohmann::ordered_json to_json(const CompositionReport& report, const PipelineConfig* config) {
  nlohmann::ordered_json out;
  nlohmann::ordered_json comps = nlohmann::ordered_json::object();
  for (const auto& c : report.compartments) {
    comps[label_name(c.label)] = {{"voxel_count", c.voxel_count}, {"volume_cc", c.volume_cc}};
  }
  out["compartments"] = std::move(comps);
  out["body_voxel_count"] = report.body_voxel_count;
  out["body_volume_cc"] = report.body_volume_cc;
  out["voxel_volume_mm3"] = report.voxel_volume_mm3;
  out["vat_sat_ratio"] = optional_number(report.vat_sat_ratio);
  out["config_echo"] = config_json(config);
  return out;
}

}  // namespace bodycomp
