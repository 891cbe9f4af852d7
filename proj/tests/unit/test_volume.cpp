#include "doctest.h"

#include "bodycomp/masks.hpp"
#include "bodycomp/volume.hpp"

using namespace bodycomp;

namespace {

Geometry geom(Dims d, Vec3 s = {1, 1, 1}, Vec3 o = {0, 0, 0}) {
  Geometry g;
  g.dims = d;
  g.spacing = s;
  g.origin = o;
  return g;
}

}  // namespace

TEST_CASE("geometry_equal tolerances") {
  const auto a = geom({4, 5, 6}, {0.98, 0.98, 2.0}, {-10, 5, 3});
  CHECK(geometry_equal(a, a));
  CHECK_FALSE(geometry_equal(a, geom({4, 5, 7}, {0.98, 0.98, 2.0}, {-10, 5, 3})));
  CHECK(geometry_equal(a, geom({4, 5, 6}, {0.98 + 1e-9, 0.98, 2.0}, {-10, 5, 3})));
  CHECK_FALSE(geometry_equal(a, geom({4, 5, 6}, {0.98 + 1e-5, 0.98, 2.0}, {-10, 5, 3})));
  CHECK(geometry_equal(a, geom({4, 5, 6}, {0.98, 0.98, 2.0}, {-10, 5, 3.0005})));
  CHECK_FALSE(geometry_equal(a, geom({4, 5, 6}, {0.98, 0.98, 2.0}, {-10, 5, 3.01})));
  CHECK_THROWS_AS(require_same_geometry(a, geom({1, 1, 1}), "x"), GeometryError);
}

TEST_CASE("geometry validation and indexing") {
  CHECK_THROWS_AS(geom({0, 1, 1}).validate(), GeometryError);
  CHECK_THROWS_AS(geom({1, 1, 1}, {1, 0, 1}).validate(), GeometryError);
  const auto g = geom({3, 4, 5});
  CHECK(g.index(0, 0, 0) == 0);
  CHECK(g.index(1, 0, 0) == 1);
  CHECK(g.index(0, 1, 0) == 3);
  CHECK(g.index(0, 0, 1) == 12);
  CHECK(g.index(2, 3, 4) == 59);
  CHECK(geom({2, 2, 2}, {1, 1, 2}).voxel_volume_cc() == doctest::Approx(0.002));
  CHECK_THROWS_AS(CtVolume(g, std::vector<std::int16_t>(7)), GeometryError);
}

TEST_CASE("HU clamping") {
  CHECK(clamp_hu(-5000) == -1024);
  CHECK(clamp_hu(-1024) == -1024);
  CHECK(clamp_hu(0) == 0);
  CHECK(clamp_hu(3071) == 3071);
  CHECK(clamp_hu(40000) == 3071);
}

TEST_CASE("mask algebra") {
  const auto g = geom({4, 1, 1});
  const BinaryMask a(g, std::vector<std::uint8_t>{1, 1, 0, 0});
  const BinaryMask b(g, std::vector<std::uint8_t>{0, 1, 1, 0});
  CHECK(mask_and(a, b) == BinaryMask(g, std::vector<std::uint8_t>{0, 1, 0, 0}));
  CHECK(mask_or(a, b) == BinaryMask(g, std::vector<std::uint8_t>{1, 1, 1, 0}));
  CHECK(mask_minus(a, b) == BinaryMask(g, std::vector<std::uint8_t>{1, 0, 0, 0}));
  CHECK(mask_not(a) == BinaryMask(g, std::vector<std::uint8_t>{0, 0, 1, 1}));
  CHECK(count(a) == 2);
  CHECK(is_subset(mask_and(a, b), a));
  CHECK_FALSE(is_subset(a, b));
  CHECK(disjoint(mask_minus(a, b), b));
  CHECK(empty(BinaryMask(g)));
  CHECK_THROWS_AS(mask_and(a, BinaryMask(geom({2, 2, 1}))), GeometryError);
}

TEST_CASE("bounding box") {
  BinaryMask m(geom({5, 6, 7}));
  CHECK(bounding_box(m).empty());
  m.at(1, 2, 3) = 1;
  m.at(3, 5, 4) = 1;
  const auto box = bounding_box(m);
  CHECK(box.lo == Dims{1, 2, 3});
  CHECK(box.hi == Dims{3, 5, 4});
}

TEST_CASE("label masks and names") {
  const auto g = geom({7, 1, 1});
  LabelMap labels(g);
  for (int i = 0; i <= kMaxLabelCode; ++i) labels[static_cast<std::size_t>(i)] = static_cast<Label>(i);
  const auto sat = label_mask(labels, Label::Sat);
  CHECK(count(sat) == 1);
  CHECK(sat[4] == 1);
  CHECK(std::string(label_name(Label::Vat)) == "vat");
  CHECK(std::string(label_name(Label::Muscle)) == "muscle");
}
