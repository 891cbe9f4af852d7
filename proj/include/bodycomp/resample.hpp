#pragma once

#include "bodycomp/volume.hpp"

namespace bodycomp {

// Number of output slices when resampling `nz` slices at `sz_in` mm to
// `target_sz` mm: floor((nz - 1) * sz_in / target_sz) + 1.
int resampled_slice_count(int nz, double sz_in, double target_sz);

// Resamples along z only; in-plane grid and origin are kept. Output slice k
// sits at origin_z + k * target_sz and is linearly interpolated between the
// two bracketing input slices, rounded half away from zero.
// Throws std::invalid_argument for target_sz <= 0, or nz < 2 when the
// spacing actually changes.
CtVolume resample_z(const CtVolume& volume, double target_sz);

// Same output grid as resample_z, taking the nearest input slice (ties go to
// the higher slice). Keeps masks binary.
BinaryMask resample_z_nearest(const BinaryMask& mask, double target_sz);

}  // namespace bodycomp
