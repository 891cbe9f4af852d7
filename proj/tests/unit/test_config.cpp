#include "doctest.h"

#include "bodycomp/config.hpp"
#include "bodycomp/errors.hpp"
#include "support/temp_dir.hpp"

using namespace bodycomp;

TEST_CASE("defaults") {
  const PipelineConfig c;
  CHECK(c.bone_low_hu == 200);
  CHECK(c.bone_high_hu == 400);
  CHECK(c.bone_close_mm == 16);
  CHECK(c.lung_low_hu == -900);
  CHECK(c.lung_high_hu == -300);
  CHECK(c.lung_close_mm == 5);
  CHECK(c.lung_keep_top == 2);
  CHECK(c.lung_min_cc == 200);
  CHECK(c.sat_seed_hu == -50);
  CHECK(c.sat_grow_hu == 0);
  CHECK(c.sat_openclose_mm == 1);
  CHECK(c.muscle_max_hu == 200);
  CHECK(c.muscle_open_mm == 2);
  CHECK(c.vat_floor_hu == -200);
  CHECK(c.vat_seed_hu == -50);
  CHECK(c.vat_grow_hu == 0);
  CHECK(c.vat_openclose_mm == 1);
  CHECK(c.body_erode_mm == 4);
  CHECK(c.target_slice_mm == 2);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("format and parse round-trip") {
  PipelineConfig c;
  c.body_threshold_hu = -312.5;
  c.lung_keep_top = 3;
  c.sat_openclose_mm = 0.98;
  c.target_slice_mm = 2.5;
  CHECK(parse_config(format_config(c)) == c);

  testing_support::TempDir dir;
  write_config(c, dir / "c.txt");
  CHECK(read_config(dir / "c.txt") == c);
}

TEST_CASE("partial files keep defaults") {
  const auto c = parse_config("# tweak\nbone_close_mm = 12   # mm\n\n  lung_min_cc=150\n");
  PipelineConfig want;
  want.bone_close_mm = 12;
  want.lung_min_cc = 150;
  CHECK(c == want);
  CHECK(parse_config("") == PipelineConfig{});
}

TEST_CASE("bad configs are rejected") {
  CHECK_THROWS_AS(parse_config("nonsense_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("bone_close_mm\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("= 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("bone_close_mm = wide\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("lung_keep_top = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("bone_close_mm = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("sat_seed_hu = 10\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("lung_low_hu = -200\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("target_slice_mm = 0\n"), ConfigError);
  CHECK_THROWS_AS(read_config("/nonexistent/config.txt"), ConfigError);
}

TEST_CASE("entries follow declaration order") {
  const auto e = config_entries(PipelineConfig{});
  REQUIRE(e.size() == 20);
  CHECK(e.front().first == "body_threshold_hu");
  CHECK(e.back().first == "target_slice_mm");
}
