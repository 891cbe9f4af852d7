#include "bodycomp/components.hpp"

#include <algorithm>
#include <numeric>

namespace bodycomp {

namespace {

struct Offset {
  int dx, dy, dz;
};

// Neighbours already visited by a raster scan (smaller linear index).
std::vector<Offset> backward_neighbours(Connectivity conn) {
  if (conn == Connectivity::Face6) return {{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}};
  std::vector<Offset> out;
  for (int dz = -1; dz <= 0; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dz == 0 && (dy > 0 || (dy == 0 && dx >= 0))) continue;
        out.push_back({dx, dy, dz});
      }
    }
  }
  return out;  // 13 offsets
}

class DisjointSets {
 public:
  std::int32_t make() {
    parent_.push_back(static_cast<std::int32_t>(parent_.size()));
    return parent_.back();
  }
  std::int32_t find(std::int32_t a) {
    std::int32_t root = a;
    while (parent_[static_cast<std::size_t>(root)] != root) root = parent_[static_cast<std::size_t>(root)];
    while (parent_[static_cast<std::size_t>(a)] != root) {
      const auto next = parent_[static_cast<std::size_t>(a)];
      parent_[static_cast<std::size_t>(a)] = root;
      a = next;
    }
    return root;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
  }

 private:
  std::vector<std::int32_t> parent_;
};

}  // namespace

Components components(const BinaryMask& mask, Connectivity conn) {
  const auto& g = mask.geometry();
  const auto& d = g.dims;
  const auto neighbours = backward_neighbours(conn);

  Components out;
  out.voxel_cc = g.voxel_volume_cc();
  out.labels = Volume<std::int32_t>(g, -1);
  auto& provisional = out.labels;

  DisjointSets sets;
  std::size_t i = 0;
  for (int z = 0; z < d[2]; ++z) {
    for (int y = 0; y < d[1]; ++y) {
      for (int x = 0; x < d[0]; ++x, ++i) {
        if (!mask[i]) continue;
        std::int32_t label = -1;
        for (const auto& o : neighbours) {
          const int nx = x + o.dx, ny = y + o.dy, nz = z + o.dz;
          if (!g.contains(nx, ny, nz)) continue;
          const auto other = provisional[g.index(nx, ny, nz)];
          if (other < 0) continue;
          if (label < 0) {
            label = other;
          } else if (other != label) {
            sets.unite(label, other);
          }
        }
        provisional[i] = label < 0 ? sets.make() : label;
      }
    }
  }

  // Final ids follow first appearance of each root in raster order.
  std::vector<std::int32_t> final_id;
  for (std::size_t v = 0; v < provisional.size(); ++v) {
    const auto p = provisional[v];
    if (p < 0) {
      provisional[v] = 0;
      continue;
    }
    const auto root = static_cast<std::size_t>(sets.find(p));
    if (root >= final_id.size()) final_id.resize(root + 1, 0);
    if (final_id[root] == 0) {
      out.voxel_counts.push_back(0);
      final_id[root] = static_cast<std::int32_t>(out.voxel_counts.size());
    }
    provisional[v] = final_id[root];
    ++out.voxel_counts[static_cast<std::size_t>(final_id[root] - 1)];
  }
  return out;
}

namespace {

BinaryMask select_labels(const Components& comps, const std::vector<char>& keep) {
  BinaryMask out(comps.labels.geometry());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto l = comps.labels[i];
    out[i] = (l > 0 && keep[static_cast<std::size_t>(l)]) ? 1 : 0;
  }
  return out;
}

}  // namespace

BinaryMask largest_component(const BinaryMask& mask, Connectivity conn) {
  const auto comps = components(mask, conn);
  if (comps.count() == 0) return BinaryMask(mask.geometry());
  std::size_t best = 0;
  for (std::size_t c = 1; c < comps.count(); ++c) {
    if (comps.voxel_counts[c] > comps.voxel_counts[best]) best = c;
  }
  std::vector<char> keep(comps.count() + 1, 0);
  keep[best + 1] = 1;
  return select_labels(comps, keep);
}

BinaryMask drop_small(const BinaryMask& mask, double min_cc, std::size_t keep_top,
                      Connectivity conn) {
  if (min_cc < 0.0) throw std::invalid_argument("drop_small: min_cc must be >= 0");
  const auto comps = components(mask, conn);
  std::vector<std::size_t> order(comps.count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return comps.voxel_counts[a] > comps.voxel_counts[b];
  });
  std::vector<char> keep(comps.count() + 1, 0);
  for (std::size_t rank = 0; rank < order.size() && rank < keep_top; ++rank) {
    const auto label = static_cast<std::int32_t>(order[rank] + 1);
    if (comps.size_cc(label) >= min_cc) keep[static_cast<std::size_t>(label)] = 1;
  }
  return select_labels(comps, keep);
}

BinaryMask hysteresis_masks(const BinaryMask& seeds, const BinaryMask& grow, Connectivity conn) {
  require_same_geometry(seeds.geometry(), grow.geometry(), "hysteresis");
  if (!is_subset(seeds, grow)) {
    throw std::invalid_argument("hysteresis seeds must be a subset of the grow mask");
  }
  const auto comps = components(grow, conn);
  std::vector<char> keep(comps.count() + 1, 0);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i]) keep[static_cast<std::size_t>(comps.labels[i])] = 1;
  }
  return select_labels(comps, keep);
}

}  // namespace bodycomp
