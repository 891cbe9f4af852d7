#include "doctest.h"

#include <cmath>
#include <random>

#include "bodycomp/resample.hpp"

using namespace bodycomp;

namespace {

CtVolume slices(Dims d, double sz, auto value_at_k) {
  Geometry g;
  g.dims = d;
  g.spacing = {0.8, 0.8, sz};
  g.origin = {1.5, -2.0, -30.0};
  CtVolume v(g);
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x) v.at(x, y, z) = static_cast<std::int16_t>(value_at_k(x, y, z));
  return v;
}

}  // namespace

TEST_CASE("slice count") {
  CHECK(resampled_slice_count(2, 4.0, 2.0) == 3);
  CHECK(resampled_slice_count(10, 5.0, 2.0) == 23);  // floor(45 / 2) + 1
  CHECK(resampled_slice_count(100, 2.0, 2.0) == 100);
  CHECK(resampled_slice_count(4, 0.6, 2.0) == 1);
  CHECK(resampled_slice_count(11, 0.2, 2.0) == 2);  // 10 * 0.2 is 2 up to rounding
}

TEST_CASE("matching spacing is the identity") {
  std::mt19937 rng(3);
  auto v = slices({5, 4, 6}, 2.0, [&](int, int, int) { return static_cast<int>(rng() % 4000) - 1024; });
  CHECK(resample_z(v, 2.0) == v);
  auto single = slices({3, 3, 1}, 5.0, [](int, int, int) { return 7; });
  CHECK(resample_z(single, 5.0) == single);
}

TEST_CASE("midpoint of two slices") {
  auto v = slices({3, 2, 2}, 4.0, [](int, int, int z) { return 4 * z; });
  const auto r = resample_z(v, 2.0);
  REQUIRE(r.dims() == Dims{3, 2, 3});
  CHECK(r.spacing() == Vec3{0.8, 0.8, 2.0});
  CHECK(r.origin() == v.origin());
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 3; ++x) {
      CHECK(r.at(x, y, 0) == 0);
      CHECK(r.at(x, y, 1) == 2);
      CHECK(r.at(x, y, 2) == 4);
    }
}

TEST_CASE("ramp is reproduced exactly") {
  // slice k at z = 5k holds 10k = 2z, so output slice j at z = 2j holds 4j.
  auto v = slices({2, 2, 10}, 5.0, [](int, int, int z) { return 10 * z; });
  const auto r = resample_z(v, 2.0);
  REQUIRE(r.dims()[2] == 23);
  for (int j = 0; j < 23; ++j) CHECK(r.at(1, 1, j) == 4 * j);
}

TEST_CASE("affine volumes within half an HU") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-40.0, 40.0);
  std::uniform_real_distribution<double> spacing(0.5, 6.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = coef(rng) * 10, b = coef(rng), c = coef(rng) / 4, sz = spacing(rng);
    const double target = spacing(rng);
    auto value = [&](int x, int, double zmm) { return a + b * x + c * zmm; };
    auto v = slices({4, 1, 12}, sz, [&](int x, int y, int z) { return std::lround(value(x, y, z * sz)); });
    // Stored input already carries rounding; compare against the rounded-input
    // line so only interpolation error remains.
    const auto r = resample_z(v, target);
    for (int j = 0; j < r.dims()[2]; ++j) {
      const double zmm = j * target;
      for (int x = 0; x < 4; ++x) {
        CHECK(std::abs(r.at(x, 0, j) - value(x, 0, zmm)) <= 1.0 + 1e-9);
      }
    }
  }
  // Exactly representable line: every output sits within 0.5 HU of it.
  auto v = slices({1, 1, 9}, 3.0, [](int, int, int z) { return -600 + 12 * z; });
  const auto r = resample_z(v, 2.0);
  for (int j = 0; j < r.dims()[2]; ++j) {
    CHECK(std::abs(r.at(0, 0, j) - (-600.0 + 8.0 * j)) <= 0.5);
  }
}

TEST_CASE("rounding is half away from zero") {
  auto v = slices({2, 1, 2}, 2.0, [](int x, int, int z) { return x == 0 ? z * 1 : -z * 3; });
  const auto r = resample_z(v, 1.0);
  REQUIRE(r.dims()[2] == 3);
  CHECK(r.at(0, 0, 1) == 1);   // 0.5
  CHECK(r.at(1, 0, 1) == -2);  // -1.5
}

TEST_CASE("resampling is monotone") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = slices({3, 3, 7}, 3.3, [&](int, int, int) { return static_cast<int>(rng() % 3000) - 1024; });
    CtVolume b = a;
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<std::int16_t>(std::min(3071, b[i] + static_cast<int>(rng() % 50)));
    const auto ra = resample_z(a, 1.7), rb = resample_z(b, 1.7);
    for (std::size_t i = 0; i < ra.size(); ++i) REQUIRE(ra[i] <= rb[i]);
  }
}

TEST_CASE("nearest-slice masks") {
  Geometry g;
  g.dims = {1, 1, 3};
  g.spacing = {1, 1, 4};
  BinaryMask m(g, std::vector<std::uint8_t>{1, 0, 1});
  const auto r = resample_z_nearest(m, 2.0);
  REQUIRE(r.dims()[2] == 5);
  // z = 0, 2, 4, 6, 8 mm; 2 and 6 are ties, taken from the higher slice.
  CHECK(std::vector<std::uint8_t>(r.data().begin(), r.data().end()) ==
        std::vector<std::uint8_t>{1, 0, 0, 1, 1});
}

TEST_CASE("invalid requests") {
  auto v = slices({2, 2, 1}, 3.0, [](int, int, int) { return 0; });
  CHECK_THROWS_AS(resample_z(v, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(resample_z(v, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(resample_z(v, -1.0), std::invalid_argument);
}
