#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bodycomp/masks.hpp"
#include "bodycomp/volume.hpp"

namespace bodycomp {

enum class Connectivity { Face6, Full26 };

struct Components {
  // 0 for background; components are numbered 1..n in order of their
  // smallest linear index.
  Volume<std::int32_t> labels;
  std::vector<std::size_t> voxel_counts;  // voxel_counts[label - 1]
  double voxel_cc = 0.0;

  std::size_t count() const { return voxel_counts.size(); }
  double size_cc(std::int32_t label) const {
    return static_cast<double>(voxel_counts[static_cast<std::size_t>(label - 1)]) * voxel_cc;
  }
};

// Union-find labeling in one raster pass plus a relabeling pass.
Components components(const BinaryMask& mask, Connectivity conn);

// The component with the most voxels; ties go to the smaller label (the one
// holding the smaller linear index). Empty in, empty out.
BinaryMask largest_component(const BinaryMask& mask, Connectivity conn);

// Keeps a component iff its size rank (largest first, ties by label) is
// within keep_top and its volume is at least min_cc.
BinaryMask drop_small(const BinaryMask& mask, double min_cc, std::size_t keep_top,
                      Connectivity conn);

// Connected components of `grow` that contain at least one `seeds` voxel.
// Throws std::invalid_argument unless seeds is a subset of grow.
BinaryMask hysteresis_masks(const BinaryMask& seeds, const BinaryMask& grow, Connectivity conn);

// Hysteresis thresholding of `ct` restricted to `domain`. Throws
// std::invalid_argument if some HU value satisfies seed but not grow.
template <class SeedPred, class GrowPred>
BinaryMask hysteresis(const CtVolume& ct, SeedPred seed, GrowPred grow, const BinaryMask& domain,
                      Connectivity conn) {
  for (int hu = kMinHu; hu <= kMaxHu; ++hu) {
    const auto v = static_cast<std::int16_t>(hu);
    if (seed(v) && !grow(v)) {
      throw std::invalid_argument("hysteresis seed predicate must imply the grow predicate (fails at " +
                                  std::to_string(hu) + " HU)");
    }
  }
  require_same_geometry(ct.geometry(), domain.geometry(), "hysteresis domain");
  BinaryMask seeds(ct.geometry());
  BinaryMask grows(ct.geometry());
  for (std::size_t i = 0; i < ct.size(); ++i) {
    if (!domain[i]) continue;
    seeds[i] = seed(ct[i]) ? 1 : 0;
    grows[i] = grow(ct[i]) ? 1 : 0;
  }
  return hysteresis_masks(seeds, grows, conn);
}

}  // namespace bodycomp
