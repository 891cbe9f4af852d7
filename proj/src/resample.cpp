#include "bodycomp/resample.hpp"

#include <cmath>
#include <stdexcept>

namespace bodycomp {

namespace {

// Guards floor() against representation error in (k * target) / sz_in.
constexpr double kIndexSlack = 1e-9;

bool same_spacing(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(a, b); }

Geometry output_geometry(const Geometry& in, double target_sz) {
  if (!(target_sz > 0.0)) throw std::invalid_argument("resample target spacing must be > 0");
  if (in.dims[2] < 2) {
    throw std::invalid_argument("cannot resample along z with fewer than 2 slices");
  }
  Geometry out = in;
  out.dims[2] = resampled_slice_count(in.dims[2], in.spacing[2], target_sz);
  out.spacing[2] = target_sz;
  return out;
}

// Continuous input slice coordinate of output slice k.
double source_position(int k, double sz_in, double target_sz) {
  return static_cast<double>(k) * target_sz / sz_in;
}

}  // namespace

int resampled_slice_count(int nz, double sz_in, double target_sz) {
  const double extent = static_cast<double>(nz - 1) * sz_in;
  return static_cast<int>(std::floor(extent / target_sz + kIndexSlack)) + 1;
}

CtVolume resample_z(const CtVolume& volume, double target_sz) {
  if (!(target_sz > 0.0)) throw std::invalid_argument("resample target spacing must be > 0");
  const double sz_in = volume.spacing()[2];
  if (same_spacing(sz_in, target_sz)) return volume;

  const Geometry out_geom = output_geometry(volume.geometry(), target_sz);
  CtVolume out(out_geom);
  const auto& d = volume.dims();
  const std::size_t plane = static_cast<std::size_t>(d[0]) * static_cast<std::size_t>(d[1]);
  const int last = d[2] - 1;

  for (int k = 0; k < out_geom.dims[2]; ++k) {
    const double t = source_position(k, sz_in, target_sz);
    int lo = static_cast<int>(std::floor(t + kIndexSlack));
    lo = std::clamp(lo, 0, last - 1);
    double w = std::clamp(t - lo, 0.0, 1.0);
    if (std::abs(w) < kIndexSlack) w = 0.0;
    if (std::abs(1.0 - w) < kIndexSlack) w = 1.0;

    const auto src_lo = volume.data().subspan(static_cast<std::size_t>(lo) * plane, plane);
    const auto src_hi = volume.data().subspan(static_cast<std::size_t>(lo + 1) * plane, plane);
    auto dst = out.data().subspan(static_cast<std::size_t>(k) * plane, plane);
    for (std::size_t i = 0; i < plane; ++i) {
      const double v = (1.0 - w) * src_lo[i] + w * src_hi[i];
      dst[i] = clamp_hu(std::lround(v));
    }
  }
  return out;
}

BinaryMask resample_z_nearest(const BinaryMask& mask, double target_sz) {
  if (!(target_sz > 0.0)) throw std::invalid_argument("resample target spacing must be > 0");
  const double sz_in = mask.spacing()[2];
  if (same_spacing(sz_in, target_sz)) return mask;

  const Geometry out_geom = output_geometry(mask.geometry(), target_sz);
  BinaryMask out(out_geom);
  const auto& d = mask.dims();
  const std::size_t plane = static_cast<std::size_t>(d[0]) * static_cast<std::size_t>(d[1]);

  for (int k = 0; k < out_geom.dims[2]; ++k) {
    const double t = source_position(k, sz_in, target_sz);
    const int src = std::clamp(static_cast<int>(std::floor(t + 0.5 + kIndexSlack)), 0, d[2] - 1);
    const auto from = mask.data().subspan(static_cast<std::size_t>(src) * plane, plane);
    auto to = out.data().subspan(static_cast<std::size_t>(k) * plane, plane);
    std::copy(from.begin(), from.end(), to.begin());
  }
  return out;
}

}  // namespace bodycomp
