#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bodycomp/volume.hpp"

namespace bodycomp {

using DistanceField = Volume<double>;

// Squared physical distance (mm^2) from every voxel centre to the nearest
// false voxel of `mask`. False voxels map to 0. An all-true mask maps to +inf.
DistanceField edt_sq(const BinaryMask& mask);

// Squared physical distance from every voxel of a dims-sized grid to the
// nearest voxel with feature != 0; +inf when there is no feature voxel.
//
// Exact separable lower-envelope transform: one 1-D scan along x, then
// parabola envelopes along y and z. Each partial sum is accumulated in the
// fixed order ((dx*sx)^2 + (dy*sy)^2) + (dz*sz)^2.
std::vector<double> squared_distance_to_features(std::span<const std::uint8_t> feature,
                                                 const Dims& dims, const Vec3& spacing);

}  // namespace bodycomp
