#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bodycomp/volume.hpp"

// Procedural synthetic torso with exact ground truth.
//
// Coordinates are millimetres relative to the volume centre: x lateral,
// y anterior (-) to posterior (+), z caudal (-) to cranial (+). The torso is a
// capped elliptic cylinder:
//   outer skin   = every point within skin_mm of the inner body (fat HU)
//   inner body   = body ellipse x [-body_half_z, body_half_z]   (truth: body)
//   muscle shell = inner body shrunk by sat_mm on every axis; the layer in
//                  between is SAT
//   cavity       = elliptic cylinder inside the muscle shell (organs)
//   spine        = cortical tube with a marrow core, posterior to the cavity
//   lungs, VAT blobs, gas pockets, contrast bowel: inside the cavity
// Ground truth comes from the analytic shapes before noise is added.
namespace bodycomp {

struct Sphere {
  Vec3 center{0, 0, 0};
  double radius = 0.0;
};

struct Ellipsoid {
  Vec3 center{0, 0, 0};
  Vec3 semi_axes{1, 1, 1};
};

struct TissueHu {
  int air = -1000;
  int lung = -800;
  int gas = -600;
  int fat = -100;
  int organ = 40;
  int muscle = 50;
  int marrow = 250;
  int contrast = 500;
  int cortical = 700;
  int table = 100;
};

struct PhantomSpec {
  Dims dims{256, 256, 120};
  Vec3 spacing{1.0, 1.0, 2.0};
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;  // HU

  double body_semi_x = 118.0;
  double body_semi_y = 92.0;
  double body_half_z = 104.0;
  double skin_mm = 4.0;
  double sat_mm = 12.0;

  double cavity_semi_x = 96.0;
  double cavity_semi_y = 50.0;
  double cavity_center_y = -16.0;
  double cavity_half_z = 80.0;

  double spine_center_y = 54.0;
  double spine_outer_mm = 12.0;
  double spine_inner_mm = 8.0;  // marrow radius; the shell also caps both ends
  double spine_half_z = 84.0;

  std::vector<Ellipsoid> lungs;
  std::vector<Sphere> vat_blobs;
  std::vector<Sphere> gas_pockets;
  std::optional<Sphere> contrast_bowel;
  // Slab spanning all x and z between these y positions, outside the torso.
  std::optional<std::pair<double, double>> table_y;

  TissueHu hu;
};

struct Phantom {
  CtVolume ct;
  BinaryMask body, cavity, bone, lung, sat, muscle, vat;
  LabelMap labels;
  // Rule-exercise structures (not compartments).
  BinaryMask gas, contrast, table;
};

// Sphere radius (mm) enclosing `cc` cubic centimetres.
double sphere_radius_for_cc(double cc);

// Named presets: default, merged-lungs, contrast-bowel, gas-pockets,
// with-table, no-thorax. Throws std::invalid_argument for unknown names.
PhantomSpec preset(const std::string& name);
const std::vector<std::string>& preset_names();

// Throws std::invalid_argument when the geometry is inconsistent (parts
// outside their container, overlapping cavity contents, table touching body).
// Noise: mt19937_64 uniform doubles (53-bit) through Box-Muller, both outputs
// used, one draw per voxel in storage order; values rounded half away from
// zero and clamped to the HU range.
Phantom generate(const PhantomSpec& spec);

// Flat `name = value` echo of a spec.
std::string format_phantom_spec(const PhantomSpec& spec, const std::string& preset_name);

// ct.mhd, body/cavity/bone/lung/sat/muscle/vat.mhd, labels.mhd, phantom.cfg.
void write_phantom(const Phantom& phantom, const PhantomSpec& spec, const std::string& preset_name,
                   const std::filesystem::path& dir);

}  // namespace bodycomp
