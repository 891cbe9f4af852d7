#pragma once

#include <stdexcept>

#include "bodycomp/volume.hpp"

// Binary morphology with spherical structuring elements sized in millimetres.
//
// The structuring element for radius r on a grid with spacing s is the set of
// integer offsets o with (o.x*s.x)^2 + (o.y*s.y)^2 + (o.z*s.z)^2 <= r^2 (see
// within_radius). Voxels outside the array count as background for erosion.
namespace bodycomp {

class StructuringRadius {
 public:
  constexpr StructuringRadius() = default;
  explicit StructuringRadius(double mm) : mm_(mm) {
    if (!(mm >= 0.0)) throw std::invalid_argument("structuring radius must be >= 0 mm");
  }
  constexpr double mm() const { return mm_; }
  constexpr double squared() const { return mm_ * mm_; }

 private:
  double mm_ = 0.0;
};

// Squared-distance membership test shared by every spherical operation. The
// relative slack absorbs representation error in (offset * spacing)^2 so that
// offsets lying exactly on the sphere stay inside it.
inline bool within_radius(double squared_distance, double squared_radius) {
  return squared_distance <= squared_radius * (1.0 + 1e-12);
}

// Largest per-axis voxel offset that can fall inside the sphere.
int reach_voxels(StructuringRadius r, double spacing);

BinaryMask erode(const BinaryMask& mask, StructuringRadius r);
// Clipped to the array: true iff some mask voxel lies within r.
BinaryMask dilate(const BinaryMask& mask, StructuringRadius r);
// dilate(erode(mask)).
BinaryMask opening(const BinaryMask& mask, StructuringRadius r);
// erode(dilate(mask)) evaluated on a virtually padded grid, so dilation is
// never clipped by the array boundary.
BinaryMask closing(const BinaryMask& mask, StructuringRadius r);

// Adds every background region that is not face-connected to the array
// border.
BinaryMask fill_holes(const BinaryMask& mask);

}  // namespace bodycomp
