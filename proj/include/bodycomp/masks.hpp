#pragma once

#include <cstddef>

#include "bodycomp/volume.hpp"

// Voxelwise set algebra on binary masks. Binary operations require
// geometry_equal inputs and return a mask on the first operand's geometry.
namespace bodycomp {

std::size_t count(const BinaryMask& mask);
bool empty(const BinaryMask& mask);

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_minus(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_not(const BinaryMask& a);

bool is_subset(const BinaryMask& a, const BinaryMask& b);
bool disjoint(const BinaryMask& a, const BinaryMask& b);

// Voxels of `ct` (optionally restricted to `within`) whose HU satisfies `pred`.
template <class Pred>
BinaryMask threshold(const CtVolume& ct, Pred pred) {
  BinaryMask out(ct.geometry());
  for (std::size_t i = 0; i < ct.size(); ++i) out[i] = pred(ct[i]) ? 1 : 0;
  return out;
}

template <class Pred>
BinaryMask threshold(const CtVolume& ct, Pred pred, const BinaryMask& within) {
  require_same_geometry(ct.geometry(), within.geometry(), "threshold domain");
  BinaryMask out(ct.geometry());
  for (std::size_t i = 0; i < ct.size(); ++i) out[i] = (within[i] && pred(ct[i])) ? 1 : 0;
  return out;
}

// Mask of voxels carrying `label`.
BinaryMask label_mask(const LabelMap& labels, Label label);

// Inclusive voxel bounding box of the true voxels.
struct BoundingBox {
  Dims lo{0, 0, 0};
  Dims hi{-1, -1, -1};
  bool empty() const { return hi[0] < lo[0]; }
};
BoundingBox bounding_box(const BinaryMask& mask);

}  // namespace bodycomp
