#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bodycomp/config.hpp"
#include "bodycomp/volume.hpp"

namespace bodycomp {

struct OverlapCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  OverlapCounts& operator+=(const OverlapCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const OverlapCounts&) const = default;
};

// Dice, recall and precision. Undefined ratios are nullopt:
//   pred and truth empty      -> (1, 1, 1)
//   pred empty, truth not     -> (0, 0, null)
//   pred not, truth empty     -> (0, null, 0)
struct Scores {
  double dice = 0.0;
  std::optional<double> recall;
  std::optional<double> precision;
};

Scores scores_from_counts(const OverlapCounts& counts);

// Throws GeometryError unless geometry_equal(pred, truth).
OverlapCounts overlap_counts(const BinaryMask& pred, const BinaryMask& truth);
// Counts restricted to the given z slices.
OverlapCounts overlap_counts(const BinaryMask& pred, const BinaryMask& truth,
                             const std::vector<int>& slices);

Scores score(const BinaryMask& pred, const BinaryMask& truth);

struct SliceSample {
  std::vector<int> indices;  // ascending, unique
  std::size_t duplicates_removed = 0;
};

// k slice indices spread uniformly over the cavity's z extent:
// round(z_min + i * (z_max - z_min) / (k - 1)); k = 1 gives the midpoint.
// Throws std::invalid_argument for k < 1 or an empty cavity.
SliceSample sample_slices(const BinaryMask& cavity, int k);

// TP/FP/FN pooled over `slices`, then scored once. Throws
// std::invalid_argument on an empty or out-of-range slice list.
Scores score_sampled(const BinaryMask& pred, const BinaryMask& truth,
                     const std::vector<int>& slices);

enum class EvalMode { WholeVolume, SampledSlices };

struct CompartmentScore {
  Label label;
  Scores scores;
};

struct EvalReport {
  EvalMode mode = EvalMode::WholeVolume;
  std::vector<int> slices;
  std::size_t duplicates_removed = 0;
  std::vector<CompartmentScore> compartments;
};

// Compartments scored by the label-map evaluation, in report order.
inline constexpr std::array<Label, 5> kScoredLabels{Label::Bone, Label::Lung, Label::Sat,
                                                    Label::Muscle, Label::Vat};

// Scores every compartment of two label maps; sampled mode when `sample` is set.
EvalReport evaluate(const LabelMap& pred, const LabelMap& truth,
                    const std::optional<SliceSample>& sample = std::nullopt);

struct CompartmentVolume {
  Label label = Label::Background;
  std::size_t voxel_count = 0;
  double volume_cc = 0.0;
};

struct CompositionReport {
  std::vector<CompartmentVolume> compartments;  // kScoredLabels order
  std::size_t body_voxel_count = 0;             // every nonzero code
  double body_volume_cc = 0.0;
  double voxel_volume_mm3 = 0.0;
  std::optional<double> vat_sat_ratio;          // null when SAT is empty

  const CompartmentVolume& get(Label label) const;
};

CompositionReport composition(const LabelMap& labels);

// Stable-order JSON documents. `config` (optional) is echoed as config_echo.
nlohmann::ordered_json to_json(const EvalReport& report, const PipelineConfig* config = nullptr);
nlohmann::ordered_json to_json(const CompositionReport& report,
                               const PipelineConfig* config = nullptr);

}  // namespace bodycomp
