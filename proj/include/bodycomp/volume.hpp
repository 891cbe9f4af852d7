#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bodycomp/errors.hpp"

namespace bodycomp {

using Dims = std::array<int, 3>;
using Vec3 = std::array<double, 3>;

// Voxel grid placement. Data is stored x-fastest, then y, then z.
struct Geometry {
  Dims dims{1, 1, 1};
  Vec3 spacing{1.0, 1.0, 1.0};  // mm per voxel
  Vec3 origin{0.0, 0.0, 0.0};   // mm

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
           static_cast<std::size_t>(dims[2]);
  }
  std::size_t index(int x, int y, int z) const {
    return (static_cast<std::size_t>(z) * static_cast<std::size_t>(dims[1]) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(dims[0]) +
           static_cast<std::size_t>(x);
  }
  bool contains(int x, int y, int z) const {
    return x >= 0 && y >= 0 && z >= 0 && x < dims[0] && y < dims[1] && z < dims[2];
  }
  double voxel_volume_mm3() const { return spacing[0] * spacing[1] * spacing[2]; }
  double voxel_volume_cc() const { return voxel_volume_mm3() / 1000.0; }

  // Throws GeometryError unless every dim >= 1 and every spacing > 0.
  void validate() const;

  bool operator==(const Geometry&) const = default;
};

// Dims identical, spacing within 1e-6 mm, origin within 1e-3 mm.
bool geometry_equal(const Geometry& a, const Geometry& b);

// Throws GeometryError naming `what` when geometry_equal fails.
void require_same_geometry(const Geometry& a, const Geometry& b, const std::string& what);

template <class T>
class Volume {
 public:
  using value_type = T;

  Volume() = default;
  explicit Volume(Geometry geometry, T fill = T{})
      : geometry_(std::move(geometry)) {
    geometry_.validate();
    data_.assign(geometry_.voxel_count(), fill);
  }
  Volume(Geometry geometry, std::vector<T> data)
      : geometry_(std::move(geometry)), data_(std::move(data)) {
    geometry_.validate();
    if (data_.size() != geometry_.voxel_count()) {
      throw GeometryError("volume data length " + std::to_string(data_.size()) +
                          " does not match dims (" + std::to_string(geometry_.voxel_count()) +
                          " voxels)");
    }
  }

  const Geometry& geometry() const { return geometry_; }
  const Dims& dims() const { return geometry_.dims; }
  const Vec3& spacing() const { return geometry_.spacing; }
  const Vec3& origin() const { return geometry_.origin; }
  std::size_t size() const { return data_.size(); }

  T operator[](std::size_t i) const { return data_[i]; }
  T& operator[](std::size_t i) { return data_[i]; }
  T at(int x, int y, int z) const { return data_[geometry_.index(x, y, z)]; }
  T& at(int x, int y, int z) { return data_[geometry_.index(x, y, z)]; }

  std::span<const T> data() const { return data_; }
  std::span<T> data() { return data_; }

  // Exact geometry and data equality.
  bool operator==(const Volume&) const = default;

 private:
  Geometry geometry_;
  std::vector<T> data_;
};

inline constexpr std::int16_t kMinHu = -1024;
inline constexpr std::int16_t kMaxHu = 3071;

constexpr std::int16_t clamp_hu(long value) {
  return static_cast<std::int16_t>(std::clamp<long>(value, kMinHu, kMaxHu));
}

// Compartment codes. Values are a stable file-format convention.
enum class Label : std::uint8_t {
  Background = 0,
  Other = 1,
  Bone = 2,
  Lung = 3,
  Sat = 4,
  Muscle = 5,
  Vat = 6,
};
inline constexpr std::uint8_t kMaxLabelCode = 6;

const char* label_name(Label label);

using CtVolume = Volume<std::int16_t>;
using BinaryMask = Volume<std::uint8_t>;  // 0 = false, 1 = true
using LabelMap = Volume<Label>;

}  // namespace bodycomp
