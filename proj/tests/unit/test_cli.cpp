#include "doctest.h"

#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

#include "bodycomp/metaimage.hpp"
#include "bodycomp/phantom.hpp"
#include "support/temp_dir.hpp"

using namespace bodycomp;
using testing_support::TempDir;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bodycomp");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

nlohmann::json load_json(const std::filesystem::path& p) { return nlohmann::json::parse(slurp(p)); }

// Small torso: a 40 HU box with a fat rim inside an air margin.
void write_small_case(const std::filesystem::path& dir) {
  Geometry g;
  g.dims = {32, 30, 20};
  g.spacing = {1, 1, 2};
  CtVolume ct(g, static_cast<std::int16_t>(-1000));
  BinaryMask cavity(g);
  for (int z = 2; z < 18; ++z)
    for (int y = 2; y < 28; ++y)
      for (int x = 2; x < 30; ++x) {
        const bool rim = x < 11 || x > 20 || y < 11 || y > 18 || z < 6 || z > 13;
        ct.at(x, y, z) = rim ? -100 : 40;
        if (x >= 12 && x <= 19 && y >= 12 && y <= 17 && z >= 7 && z <= 12) cavity.at(x, y, z) = 1;
      }
  std::filesystem::create_directories(dir);
  write_mhd(ct, dir / "ct.mhd");
  write_mhd(cavity, dir / "cavity.mhd");
}

const char* kSegmentFiles[] = {"labels.mhd", "labels.raw", "body.mhd",   "body.raw",  "cavity.mhd",
                               "cavity.raw", "bone.mhd",   "bone.raw",   "lung.mhd",  "lung.raw",
                               "sat.mhd",    "sat.raw",    "muscle.mhd", "muscle.raw", "vat.mhd",
                               "vat.raw",    "composition.json", "config.txt"};

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli({}).code == 1);
  auto r = run_cli({"segment", "--ct", "a.mhd", "--out", "x"});
  CHECK(r.code == 1);
  CHECK(r.err.find("--cavity") != std::string::npos);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"evaluate", "--pred", "a", "--truth", "b", "--slices", "5"}).code == 1);
  CHECK(run_cli({"--threads", "0", "report", "--labels", "x"}).code == 1);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("phantom command") {
  TempDir dir;
  auto r = run_cli({"phantom", "--preset", "default", "--seed", "7", "--out", (dir / "a").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  run_cli({"phantom", "--preset", "default", "--seed", "7", "--out", (dir / "b").string()});
  for (const char* f : {"ct.raw", "labels.raw", "sat.raw", "phantom.cfg", "ct.mhd"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  CHECK(run_cli({"phantom", "--preset", "pelvis", "--out", (dir / "c").string()}).code == 1);
  r = run_cli({"phantom", "--noise", "20", "--out", (dir / "d").string()});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "d" / "ct.raw"));
  CHECK(slurp(dir / "d" / "ct.raw") != slurp(dir / "a" / "ct.raw"));
}

TEST_CASE("segment, evaluate and report on a small case") {
  TempDir dir;
  write_small_case(dir / "in");
  const auto out = (dir / "out").string();
  auto r = run_cli({"segment", "--ct", (dir / "in" / "ct.mhd").string(), "--cavity",
                (dir / "in" / "cavity.mhd").string(), "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  for (const char* f : kSegmentFiles) CHECK(std::filesystem::exists(dir / "out" / f));

  const auto comp = load_json(dir / "out" / "composition.json");
  CHECK(comp["config_echo"]["bone_close_mm"] == 16.0);
  CHECK(comp["compartments"].contains("vat"));

  // Re-running overwrites with identical bytes.
  const auto labels_before = slurp(dir / "out" / "labels.raw");
  const auto comp_before = slurp(dir / "out" / "composition.json");
  REQUIRE(run_cli({"segment", "--ct", (dir / "in" / "ct.mhd").string(), "--cavity",
               (dir / "in" / "cavity.mhd").string(), "--out", out})
              .code == 0);
  CHECK(slurp(dir / "out" / "labels.raw") == labels_before);
  CHECK(slurp(dir / "out" / "composition.json") == comp_before);

  // report reproduces segment's composition.json byte for byte.
  REQUIRE(run_cli({"report", "--labels", (dir / "out" / "labels.mhd").string()}).code == 0);
  CHECK(slurp(dir / "out" / "composition.json") == comp_before);

  r = run_cli({"evaluate", "--pred", (dir / "out" / "labels.mhd").string(), "--truth",
           (dir / "out" / "labels.mhd").string()});
  REQUIRE(r.code == 0);
  const auto ev = load_json(dir / "out" / "eval.json");
  CHECK(ev["mode"] == "whole-volume");
  for (const char* c : {"bone", "lung", "sat", "muscle", "vat"}) CHECK(ev["compartments"][c]["dice"] == 1.0);
}

TEST_CASE("segment with a config and without resampling") {
  TempDir dir;
  write_small_case(dir / "in");
  {
    std::ofstream cfg(dir / "in" / "my.cfg");
    cfg << "sat_openclose_mm = 0\ntarget_slice_mm = 4\n";
  }
  auto r = run_cli({"segment", "--ct", (dir / "in" / "ct.mhd").string(), "--cavity",
                (dir / "in" / "cavity.mhd").string(), "--out", (dir / "o").string(), "--config",
                (dir / "in" / "my.cfg").string(), "--no-resample"});
  REQUIRE(r.code == 0);
  CHECK(read_labels(dir / "o" / "labels.mhd").dims()[2] == 20);
  CHECK(slurp(dir / "o" / "config.txt").find("target_slice_mm = 4") != std::string::npos);

  r = run_cli({"segment", "--ct", (dir / "in" / "ct.mhd").string(), "--cavity",
           (dir / "in" / "cavity.mhd").string(), "--out", (dir / "p").string(), "--config",
           (dir / "in" / "my.cfg").string()});
  REQUIRE(r.code == 0);
  CHECK(read_labels(dir / "p" / "labels.mhd").dims()[2] == 10);

  std::ofstream(dir / "in" / "bad.cfg") << "no_such_key = 1\n";
  r = run_cli({"segment", "--ct", (dir / "in" / "ct.mhd").string(), "--cavity",
           (dir / "in" / "cavity.mhd").string(), "--out", (dir / "q").string(), "--config",
           (dir / "in" / "bad.cfg").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("no_such_key") != std::string::npos);
}

TEST_CASE("segment failures") {
  TempDir dir;
  write_small_case(dir / "in");
  const auto ct = (dir / "in" / "ct.mhd").string();

  Geometry other;
  other.dims = {32, 30, 21};
  other.spacing = {1, 1, 2};
  write_mhd(BinaryMask(other), dir / "in" / "wrong.mhd");
  auto r = run_cli({"segment", "--ct", ct, "--cavity", (dir / "in" / "wrong.mhd").string(), "--out",
                (dir / "o").string()});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());

  r = run_cli({"segment", "--ct", (dir / "in" / "nope.mhd").string(), "--cavity", ct, "--out",
           (dir / "o").string()});
  CHECK(r.code == 2);

  const auto air = read_ct(ct);
  write_mhd(CtVolume(air.geometry(), static_cast<std::int16_t>(-1000)), dir / "in" / "air.mhd");
  r = run_cli({"segment", "--ct", (dir / "in" / "air.mhd").string(), "--cavity",
           (dir / "in" / "cavity.mhd").string(), "--out", (dir / "o").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("body") != std::string::npos);

  // Empty cavity: succeeds with a warning on the diagnostic stream only.
  write_mhd(BinaryMask(air.geometry()), dir / "in" / "nocav.mhd");
  r = run_cli({"segment", "--ct", ct, "--cavity", (dir / "in" / "nocav.mhd").string(), "--out",
           (dir / "e").string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("evaluate and report errors and sampling") {
  TempDir dir;
  Geometry g;
  g.dims = {4, 4, 100};
  LabelMap labels(g);
  BinaryMask cavity(g);
  for (int z = 10; z <= 90; ++z) {
    cavity.at(1, 1, z) = 1;
    labels.at(2, 2, z) = Label::Sat;
  }
  labels.at(0, 0, 3) = Label::Vat;
  write_mhd(labels, dir / "labels.mhd");
  write_mhd(cavity, dir / "cavity.mhd");

  auto r = run_cli({"evaluate", "--pred", (dir / "labels.mhd").string(), "--truth",
                (dir / "labels.mhd").string(), "--cavity", (dir / "cavity.mhd").string(),
                "--slices", "5"});
  REQUIRE(r.code == 0);
  auto ev = load_json(dir / "eval.json");
  CHECK(ev["mode"] == "sampled-slices");
  CHECK(ev["slices"] == nlohmann::json::array({10, 30, 50, 70, 90}));
  CHECK(ev["duplicate_slices_removed"] == 0);

  BinaryMask thin(g);
  thin.at(0, 0, 7) = 1;
  write_mhd(thin, dir / "thin.mhd");
  r = run_cli({"evaluate", "--pred", (dir / "labels.mhd").string(), "--truth",
           (dir / "labels.mhd").string(), "--cavity", (dir / "thin.mhd").string(), "--slices", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("duplicate") != std::string::npos);
  ev = load_json(dir / "eval.json");
  CHECK(ev["slices"] == nlohmann::json::array({7}));
  CHECK(ev["duplicate_slices_removed"] == 4);

  CHECK(run_cli({"evaluate", "--pred", (dir / "labels.mhd").string(), "--truth",
             (dir / "missing.mhd").string()})
            .code == 2);

  REQUIRE(run_cli({"report", "--labels", (dir / "labels.mhd").string()}).code == 0);
  const auto comp = load_json(dir / "composition.json");
  CHECK(comp["compartments"]["sat"]["voxel_count"] == 81);
  CHECK(comp["vat_sat_ratio"] == doctest::Approx(1.0 / 81.0));
  CHECK(comp["config_echo"].is_null());

  std::filesystem::create_directories(dir / "blank");
  write_mhd(LabelMap(g), dir / "blank" / "labels.mhd");
  REQUIRE(run_cli({"report", "--labels", (dir / "blank" / "labels.mhd").string()}).code == 0);
  const auto blank = load_json(dir / "blank" / "composition.json");
  CHECK(blank["vat_sat_ratio"].is_null());
  CHECK(blank["body_volume_cc"] == 0.0);

  std::ofstream(dir / "corrupt.mhd") << "ObjectType = Image\nNDims = 3\nDimSize = 4 4\n";
  CHECK(run_cli({"report", "--labels", (dir / "corrupt.mhd").string()}).code == 2);
}
