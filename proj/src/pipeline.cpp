#include "bodycomp/pipeline.hpp"

#include <array>
#include <utility>

#include "bodycomp/components.hpp"
#include "bodycomp/masks.hpp"
#include "bodycomp/morphology.hpp"
#include "bodycomp/resample.hpp"

namespace bodycomp {

namespace {

constexpr auto kConn = Connectivity::Full26;

}  // namespace

std::vector<std::string> validate_inputs(const CtVolume& ct, const BinaryMask& cavity) {
  require_same_geometry(ct.geometry(), cavity.geometry(), "CT vs cavity mask");
  std::vector<std::string> warnings;
  if (empty(cavity)) {
    warnings.emplace_back("cavity mask is empty: VAT will be empty and SAT/muscle rules cover all "
                          "soft tissue");
  }
  return warnings;
}

BinaryMask segment_body(const CtVolume& ct, const PipelineConfig& cfg) {
  const double cut = cfg.body_threshold_hu;
  auto body = threshold(ct, [cut](std::int16_t hu) { return hu > cut; });
  body = largest_component(body, kConn);
  body = fill_holes(body);
  body = erode(body, StructuringRadius(cfg.body_erode_mm));
  if (empty(body)) throw PipelineError("no body found: body mask is empty after erosion");
  return body;
}

BinaryMask segment_bone(const CtVolume& ct, const BinaryMask& body, const BinaryMask& cavity,
                        const PipelineConfig& cfg) {
  const auto domain = mask_minus(body, cavity);
  const double high = cfg.bone_high_hu, low = cfg.bone_low_hu;
  auto bone = hysteresis(
      ct, [high](std::int16_t hu) { return hu >= high; },
      [low](std::int16_t hu) { return hu >= low; }, domain, kConn);
  bone = closing(bone, StructuringRadius(cfg.bone_close_mm));
  bone = fill_holes(bone);
  return mask_and(bone, domain);
}

BinaryMask segment_lung(const CtVolume& ct, const BinaryMask& body, const BinaryMask& bone,
                        const PipelineConfig& cfg) {
  const double low = cfg.lung_low_hu, high = cfg.lung_high_hu;
  auto lung = threshold(ct, [low, high](std::int16_t hu) { return hu >= low && hu <= high; }, body);
  lung = closing(lung, StructuringRadius(cfg.lung_close_mm));
  lung = mask_minus(mask_and(lung, body), bone);
  return drop_small(lung, cfg.lung_min_cc, cfg.lung_keep_top, kConn);
}

BinaryMask segment_sat(const CtVolume& ct, const BinaryMask& body, const BinaryMask& cavity,
                       const BinaryMask& bone, const BinaryMask& lung, const PipelineConfig& cfg) {
  const auto domain = mask_minus(mask_minus(mask_minus(body, cavity), bone), lung);
  const double seed = cfg.sat_seed_hu, grow = cfg.sat_grow_hu;
  auto grow_pred = [grow](std::int16_t hu) { return hu < grow; };
  auto sat = hysteresis(ct, [seed](std::int16_t hu) { return hu < seed; }, grow_pred, domain, kConn);
  const StructuringRadius r(cfg.sat_openclose_mm);
  sat = closing(opening(sat, r), r);
  // Closing may bridge into other tissue; SAT stays within its grow set.
  return mask_and(sat, threshold(ct, grow_pred, domain));
}

BinaryMask segment_muscle(const CtVolume& ct, const BinaryMask& body, const BinaryMask& cavity,
                          const BinaryMask& bone, const BinaryMask& lung, const BinaryMask& sat,
                          const PipelineConfig& cfg) {
  auto domain = mask_minus(mask_minus(body, cavity), bone);
  domain = mask_minus(mask_minus(domain, lung), sat);
  const double top = cfg.muscle_max_hu;
  const auto muscle = threshold(ct, [top](std::int16_t hu) { return hu < top; }, domain);
  return opening(muscle, StructuringRadius(cfg.muscle_open_mm));
}

BinaryMask segment_vat(const CtVolume& ct, const BinaryMask& body, const BinaryMask& cavity,
                       const BinaryMask& lung, const PipelineConfig& cfg) {
  const double floor = cfg.vat_floor_hu, seed = cfg.vat_seed_hu, grow = cfg.vat_grow_hu;
  const auto air = threshold(ct, [floor](std::int16_t hu) { return hu < floor; });
  const auto domain = mask_minus(mask_minus(mask_and(cavity, body), lung), air);
  auto grow_pred = [floor, grow](std::int16_t hu) { return hu > floor && hu < grow; };
  auto vat = hysteresis(
      ct, [floor, seed](std::int16_t hu) { return hu > floor && hu < seed; }, grow_pred, domain,
      kConn);
  const StructuringRadius r(cfg.vat_openclose_mm);
  vat = closing(opening(vat, r), r);
  return mask_and(vat, threshold(ct, grow_pred, domain));
}

LabelMap assemble_labels(const StepMasks& m) {
  const std::array<std::pair<const BinaryMask*, Label>, 5> order{{
      {&m.bone, Label::Bone},
      {&m.lung, Label::Lung},
      {&m.sat, Label::Sat},
      {&m.muscle, Label::Muscle},
      {&m.vat, Label::Vat},
  }};
  for (const auto& [mask, label] : order) {
    require_same_geometry(m.body.geometry(), mask->geometry(), label_name(label));
  }
  LabelMap labels(m.body.geometry(), Label::Background);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int hits = 0;
    Label code = m.body[i] ? Label::Other : Label::Background;
    for (const auto& [mask, label] : order) {
      if (!(*mask)[i]) continue;
      if (hits++ == 0) code = label;
    }
    if (hits > 1) {
      throw PipelineError("compartment masks overlap at voxel " + std::to_string(i));
    }
    if (hits == 1 && !m.body[i]) {
      throw PipelineError("compartment voxel outside body at voxel " + std::to_string(i));
    }
    labels[i] = code;
  }
  return labels;
}

SegmentationResult run_pipeline(const CtVolume& ct_in, const BinaryMask& cavity_in,
                                const PipelineConfig& cfg, const RunOptions& options) {
  cfg.validate();
  SegmentationResult result;
  result.config = cfg;
  result.provenance.ct_path = options.ct_path;
  result.provenance.cavity_path = options.cavity_path;

  CtVolume ct = ct_in;
  BinaryMask cavity = cavity_in;
  if (options.resample) {
    ct = resample_z(ct_in, cfg.target_slice_mm);
    cavity = resample_z_nearest(cavity_in, cfg.target_slice_mm);
    result.provenance.resampled = ct.spacing()[2] != ct_in.spacing()[2] ||
                                  cavity.spacing()[2] != cavity_in.spacing()[2];
  }
  result.warnings = validate_inputs(ct, cavity);

  auto& m = result.masks;
  m.body = segment_body(ct, cfg);
  m.cavity = std::move(cavity);
  m.bone = segment_bone(ct, m.body, m.cavity, cfg);
  m.lung = segment_lung(ct, m.body, m.bone, cfg);
  m.sat = segment_sat(ct, m.body, m.cavity, m.bone, m.lung, cfg);
  m.muscle = segment_muscle(ct, m.body, m.cavity, m.bone, m.lung, m.sat, cfg);
  m.vat = segment_vat(ct, m.body, m.cavity, m.lung, cfg);
  result.labels = assemble_labels(m);
  return result;
}

}  // namespace bodycomp
