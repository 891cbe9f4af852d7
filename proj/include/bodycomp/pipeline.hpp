#pragma once

#include <string>
#include <vector>

#include "bodycomp/config.hpp"
#include "bodycomp/volume.hpp"

// Compartment segmentation given a CT and a ventral-cavity mask.
//
// Steps run in a fixed order and each one works inside a domain that excludes
// every compartment found before it:
//   body -> bone -> lung -> SAT -> muscle -> VAT
// Smoothing by closing can add voxels, so closed results are clipped back to
// their step's domain; the step masks are pairwise disjoint by construction.
namespace bodycomp {

struct StepMasks {
  BinaryMask body;
  BinaryMask cavity;  // as received, after resampling
  BinaryMask bone;
  BinaryMask lung;
  BinaryMask sat;
  BinaryMask muscle;
  BinaryMask vat;

  bool operator==(const StepMasks&) const = default;
};

struct Provenance {
  std::string ct_path;
  std::string cavity_path;
  bool resampled = false;

  bool operator==(const Provenance&) const = default;
};

struct SegmentationResult {
  LabelMap labels;
  StepMasks masks;
  PipelineConfig config;
  Provenance provenance;
  std::vector<std::string> warnings;

  bool operator==(const SegmentationResult&) const = default;
};

struct RunOptions {
  bool resample = true;
  std::string ct_path;
  std::string cavity_path;
};

// Throws GeometryError when the grids differ. Returns warnings (an empty
// cavity is allowed: VAT is then empty and SAT/muscle cover all soft tissue).
std::vector<std::string> validate_inputs(const CtVolume& ct, const BinaryMask& cavity);

// HU > body_threshold_hu, largest 26-component, holes filled, eroded by
// body_erode_mm. Throws PipelineError when nothing survives.
BinaryMask segment_body(const CtVolume& ct, const PipelineConfig& cfg);

// Hysteresis (seed >= high, grow >= low) inside body minus cavity, then
// closing and hole filling, clipped back to body minus cavity.
BinaryMask segment_bone(const CtVolume& ct, const BinaryMask& body, const BinaryMask& cavity,
                        const PipelineConfig& cfg);

// low <= HU <= high inside body, closed, clipped to body minus bone, then
// only the lung_keep_top largest components of at least lung_min_cc remain.
BinaryMask segment_lung(const CtVolume& ct, const BinaryMask& body, const BinaryMask& bone,
                        const PipelineConfig& cfg);

BinaryMask segment_sat(const CtVolume& ct, const BinaryMask& body, const BinaryMask& cavity,
                       const BinaryMask& bone, const BinaryMask& lung, const PipelineConfig& cfg);

// Everything below muscle_max_hu left outside the cavity once bone, lung and
// SAT are removed; there is deliberately no lower HU bound.
BinaryMask segment_muscle(const CtVolume& ct, const BinaryMask& body, const BinaryMask& cavity,
                          const BinaryMask& bone, const BinaryMask& lung, const BinaryMask& sat,
                          const PipelineConfig& cfg);

BinaryMask segment_vat(const CtVolume& ct, const BinaryMask& body, const BinaryMask& cavity,
                       const BinaryMask& lung, const PipelineConfig& cfg);

// Precedence bone > lung > SAT > muscle > VAT > other (rest of body).
// Throws PipelineError if any two compartment masks overlap.
LabelMap assemble_labels(const StepMasks& masks);

// Resamples to cfg.target_slice_mm (CT linearly, cavity by nearest slice)
// unless options.resample is false, validates, and runs every step.
SegmentationResult run_pipeline(const CtVolume& ct, const BinaryMask& cavity,
                                const PipelineConfig& cfg, const RunOptions& options = {});

}  // namespace bodycomp
