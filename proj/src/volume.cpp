#include "bodycomp/volume.hpp"

#include <cmath>

#include "bodycomp/masks.hpp"

namespace bodycomp {

void Geometry::validate() const {
  for (int axis = 0; axis < 3; ++axis) {
    if (dims[axis] < 1) throw GeometryError("dims must be >= 1 on every axis");
    if (!(spacing[axis] > 0.0) || !std::isfinite(spacing[axis])) {
      throw GeometryError("spacing must be finite and > 0 on every axis");
    }
    if (!std::isfinite(origin[axis])) throw GeometryError("origin must be finite");
  }
}

bool geometry_equal(const Geometry& a, const Geometry& b) {
  if (a.dims != b.dims) return false;
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(a.spacing[axis] - b.spacing[axis]) > 1e-6) return false;
    if (std::abs(a.origin[axis] - b.origin[axis]) > 1e-3) return false;
  }
  return true;
}

namespace {

std::string describe(const Geometry& g) {
  auto triple = [](const auto& v) {
    return std::to_string(v[0]) + " " + std::to_string(v[1]) + " " + std::to_string(v[2]);
  };
  return "dims " + triple(g.dims) + ", spacing " + triple(g.spacing) + ", origin " +
         triple(g.origin);
}

}  // namespace

void require_same_geometry(const Geometry& a, const Geometry& b, const std::string& what) {
  if (!geometry_equal(a, b)) {
    throw GeometryError(what + ": geometry mismatch (" + describe(a) + " vs " + describe(b) + ")");
  }
}

const char* label_name(Label label) {
  switch (label) {
    case Label::Background: return "background";
    case Label::Other: return "other";
    case Label::Bone: return "bone";
    case Label::Lung: return "lung";
    case Label::Sat: return "sat";
    case Label::Muscle: return "muscle";
    case Label::Vat: return "vat";
  }
  return "unknown";
}

std::size_t count(const BinaryMask& mask) {
  std::size_t n = 0;
  for (auto v : mask.data()) n += v ? 1 : 0;
  return n;
}

bool empty(const BinaryMask& mask) {
  return std::none_of(mask.data().begin(), mask.data().end(), [](auto v) { return v != 0; });
}

namespace {

template <class Op>
BinaryMask combine(const BinaryMask& a, const BinaryMask& b, const char* what, Op op) {
  require_same_geometry(a.geometry(), b.geometry(), what);
  BinaryMask out(a.geometry());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i] != 0, b[i] != 0) ? 1 : 0;
  return out;
}

}  // namespace

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, "mask_and", [](bool x, bool y) { return x && y; });
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, "mask_or", [](bool x, bool y) { return x || y; });
}

BinaryMask mask_minus(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, "mask_minus", [](bool x, bool y) { return x && !y; });
}

BinaryMask mask_not(const BinaryMask& a) {
  BinaryMask out(a.geometry());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ? 0 : 1;
  return out;
}

bool is_subset(const BinaryMask& a, const BinaryMask& b) {
  require_same_geometry(a.geometry(), b.geometry(), "is_subset");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && !b[i]) return false;
  }
  return true;
}

bool disjoint(const BinaryMask& a, const BinaryMask& b) {
  require_same_geometry(a.geometry(), b.geometry(), "disjoint");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i]) return false;
  }
  return true;
}

BinaryMask label_mask(const LabelMap& labels, Label label) {
  BinaryMask out(labels.geometry());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[i] == label ? 1 : 0;
  return out;
}

BoundingBox bounding_box(const BinaryMask& mask) {
  const auto& d = mask.dims();
  BoundingBox box;
  box.lo = {d[0], d[1], d[2]};
  box.hi = {-1, -1, -1};
  std::size_t i = 0;
  for (int z = 0; z < d[2]; ++z) {
    for (int y = 0; y < d[1]; ++y) {
      for (int x = 0; x < d[0]; ++x, ++i) {
        if (!mask[i]) continue;
        box.lo = {std::min(box.lo[0], x), std::min(box.lo[1], y), std::min(box.lo[2], z)};
        box.hi = {std::max(box.hi[0], x), std::max(box.hi[1], y), std::max(box.hi[2], z)};
      }
    }
  }
  if (box.hi[0] < 0) box = BoundingBox{};
  return box;
}

}  // namespace bodycomp
