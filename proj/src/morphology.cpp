#include "bodycomp/morphology.hpp"

#include <cmath>

#include "bodycomp/components.hpp"
#include "bodycomp/distance.hpp"
#include "bodycomp/masks.hpp"

namespace bodycomp {

namespace {

// A box of voxels addressed relative to the parent array; `lo` may be
// negative and the box may extend past the array.
struct LocalGrid {
  Dims lo{0, 0, 0};
  Dims dims{0, 0, 0};
  std::vector<std::uint8_t> data;

  std::size_t index(int x, int y, int z) const {
    return (static_cast<std::size_t>(z) * static_cast<std::size_t>(dims[1]) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(dims[0]) +
           static_cast<std::size_t>(x);
  }
};

LocalGrid extract(const BinaryMask& mask, const Dims& lo, const Dims& hi) {
  LocalGrid grid;
  grid.lo = lo;
  for (int a = 0; a < 3; ++a) grid.dims[a] = hi[a] - lo[a] + 1;
  grid.data.assign(static_cast<std::size_t>(grid.dims[0]) * grid.dims[1] * grid.dims[2], 0);
  const auto& g = mask.geometry();
  for (int z = 0; z < grid.dims[2]; ++z) {
    for (int y = 0; y < grid.dims[1]; ++y) {
      for (int x = 0; x < grid.dims[0]; ++x) {
        const int px = x + lo[0], py = y + lo[1], pz = z + lo[2];
        if (g.contains(px, py, pz) && mask.at(px, py, pz)) grid.data[grid.index(x, y, z)] = 1;
      }
    }
  }
  return grid;
}

// Writes the in-array part of `grid` into `out`.
void paste(const LocalGrid& grid, BinaryMask& out) {
  const auto& g = out.geometry();
  for (int z = 0; z < grid.dims[2]; ++z) {
    for (int y = 0; y < grid.dims[1]; ++y) {
      for (int x = 0; x < grid.dims[0]; ++x) {
        const int px = x + grid.lo[0], py = y + grid.lo[1], pz = z + grid.lo[2];
        if (g.contains(px, py, pz)) out.at(px, py, pz) = grid.data[grid.index(x, y, z)];
      }
    }
  }
}

// Erosion with everything outside the grid treated as background.
LocalGrid erode_local(const LocalGrid& in, const Vec3& spacing, double r2) {
  // One voxel of background margin makes the outside explicit.
  const Dims padded{in.dims[0] + 2, in.dims[1] + 2, in.dims[2] + 2};
  std::vector<std::uint8_t> background(
      static_cast<std::size_t>(padded[0]) * padded[1] * padded[2], 1);
  auto padded_index = [&](int x, int y, int z) {
    return (static_cast<std::size_t>(z) * padded[1] + y) * padded[0] + x;
  };
  for (int z = 0; z < in.dims[2]; ++z) {
    for (int y = 0; y < in.dims[1]; ++y) {
      for (int x = 0; x < in.dims[0]; ++x) {
        background[padded_index(x + 1, y + 1, z + 1)] = in.data[in.index(x, y, z)] ? 0 : 1;
      }
    }
  }
  const auto d2 = squared_distance_to_features(background, padded, spacing);

  LocalGrid out = in;
  for (int z = 0; z < in.dims[2]; ++z) {
    for (int y = 0; y < in.dims[1]; ++y) {
      for (int x = 0; x < in.dims[0]; ++x) {
        const auto i = in.index(x, y, z);
        out.data[i] = (in.data[i] && !within_radius(d2[padded_index(x + 1, y + 1, z + 1)], r2)) ? 1 : 0;
      }
    }
  }
  return out;
}

// Dilation; the caller sizes the grid so no foreground lies within r of its edge.
LocalGrid dilate_local(const LocalGrid& in, const Vec3& spacing, double r2) {
  const auto d2 = squared_distance_to_features(in.data, in.dims, spacing);
  LocalGrid out = in;
  for (std::size_t i = 0; i < d2.size(); ++i) out.data[i] = within_radius(d2[i], r2) ? 1 : 0;
  return out;
}

Dims reach(StructuringRadius r, const Vec3& spacing) {
  return {reach_voxels(r, spacing[0]), reach_voxels(r, spacing[1]), reach_voxels(r, spacing[2])};
}

}  // namespace

int reach_voxels(StructuringRadius r, double spacing) {
  const double r2 = r.squared();
  int k = static_cast<int>(std::floor(r.mm() / spacing)) + 1;
  while (k > 0 && !within_radius(static_cast<double>(k) * spacing * (static_cast<double>(k) * spacing), r2)) {
    --k;
  }
  return k;
}

BinaryMask erode(const BinaryMask& mask, StructuringRadius r) {
  const auto box = bounding_box(mask);
  if (r.mm() == 0.0 || box.empty()) return mask;
  const auto local = erode_local(extract(mask, box.lo, box.hi), mask.spacing(), r.squared());
  BinaryMask out(mask.geometry());
  paste(local, out);
  return out;
}

BinaryMask dilate(const BinaryMask& mask, StructuringRadius r) {
  const auto box = bounding_box(mask);
  if (r.mm() == 0.0 || box.empty()) return mask;
  const auto ext = reach(r, mask.spacing());
  Dims lo, hi;
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::max(0, box.lo[a] - ext[a]);
    hi[a] = std::min(mask.dims()[a] - 1, box.hi[a] + ext[a]);
  }
  const auto local = dilate_local(extract(mask, lo, hi), mask.spacing(), r.squared());
  BinaryMask out(mask.geometry());
  paste(local, out);
  return out;
}

BinaryMask opening(const BinaryMask& mask, StructuringRadius r) {
  return dilate(erode(mask, r), r);
}

BinaryMask closing(const BinaryMask& mask, StructuringRadius r) {
  const auto box = bounding_box(mask);
  if (r.mm() == 0.0 || box.empty()) return mask;
  // Unclipped box: the dilation may spill past the array, and erosion of
  // in-array voxels must see that spill.
  const auto ext = reach(r, mask.spacing());
  Dims lo, hi;
  for (int a = 0; a < 3; ++a) {
    lo[a] = box.lo[a] - ext[a];
    hi[a] = box.hi[a] + ext[a];
  }
  const auto grown = dilate_local(extract(mask, lo, hi), mask.spacing(), r.squared());
  const auto local = erode_local(grown, mask.spacing(), r.squared());
  BinaryMask out(mask.geometry());
  paste(local, out);
  return out;
}

BinaryMask fill_holes(const BinaryMask& mask) {
  const auto background = mask_not(mask);
  const auto comps = components(background, Connectivity::Face6);
  std::vector<char> touches_border(comps.count() + 1, 0);
  const auto& d = mask.dims();
  std::size_t i = 0;
  for (int z = 0; z < d[2]; ++z) {
    for (int y = 0; y < d[1]; ++y) {
      for (int x = 0; x < d[0]; ++x, ++i) {
        const bool border =
            x == 0 || y == 0 || z == 0 || x == d[0] - 1 || y == d[1] - 1 || z == d[2] - 1;
        if (border && comps.labels[i] > 0) touches_border[static_cast<std::size_t>(comps.labels[i])] = 1;
      }
    }
  }
  BinaryMask out(mask.geometry());
  for (std::size_t v = 0; v < out.size(); ++v) {
    const auto l = comps.labels[v];
    out[v] = (mask[v] || (l > 0 && !touches_border[static_cast<std::size_t>(l)])) ? 1 : 0;
  }
  return out;
}

}  // namespace bodycomp
