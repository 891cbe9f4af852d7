#include "bodycomp/phantom.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bodycomp/metaimage.hpp"

namespace bodycomp {

namespace {

enum class Tissue : std::uint8_t {
  Air, Skin, Sat, Muscle, Organ, Cortical, Marrow, Lung, Vat, Gas, Contrast, Table
};

bool in_ellipse(double x, double y, double a, double b) {
  return (x / a) * (x / a) + (y / b) * (y / b) <= 1.0;
}

bool in_sphere(const Vec3& p, const Sphere& s) {
  const double dx = p[0] - s.center[0], dy = p[1] - s.center[1], dz = p[2] - s.center[2];
  return dx * dx + dy * dy + dz * dz <= s.radius * s.radius;
}

bool in_ellipsoid(const Vec3& p, const Ellipsoid& e) {
  double sum = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double t = (p[a] - e.center[a]) / e.semi_axes[a];
    sum += t * t;
  }
  return sum <= 1.0;
}

// Distance from (x, y) to the filled ellipse with semi-axes a, b (0 inside).
// Closest boundary point is (a^2 x / (t + a^2), b^2 y / (t + b^2)) for the
// root t > 0 of the secular equation, found by bisection.
double ellipse_outside_distance(double x, double y, double a, double b) {
  x = std::abs(x);
  y = std::abs(y);
  if (in_ellipse(x, y, a, b)) return 0.0;
  const double a2 = a * a, b2 = b * b;
  auto secular = [&](double t) {
    const double u = a * x / (t + a2), v = b * y / (t + b2);
    return u * u + v * v - 1.0;
  };
  double lo = 0.0;
  double hi = 2.0 * std::max(a, b) * std::hypot(x, y) + 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (secular(mid) > 0.0 ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return std::hypot(a2 * x / (t + a2) - x, b2 * y / (t + b2) - y);
}

class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

int nominal_hu(Tissue t, const TissueHu& hu) {
  switch (t) {
    case Tissue::Air: return hu.air;
    case Tissue::Skin:
    case Tissue::Sat:
    case Tissue::Vat: return hu.fat;
    case Tissue::Muscle: return hu.muscle;
    case Tissue::Organ: return hu.organ;
    case Tissue::Cortical: return hu.cortical;
    case Tissue::Marrow: return hu.marrow;
    case Tissue::Lung: return hu.lung;
    case Tissue::Gas: return hu.gas;
    case Tissue::Contrast: return hu.contrast;
    case Tissue::Table: return hu.table;
  }
  return hu.air;
}

void check(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("inconsistent phantom geometry: " + what);
}

std::vector<Sphere> default_vat_blobs() {
  std::vector<Sphere> blobs;
  for (double z : {-18.0, -60.0}) {
    for (double y : {-38.0, 6.0}) {
      for (double x : {-62.0, 62.0}) blobs.push_back({{x, y, z}, 9.0});
    }
  }
  return blobs;
}

std::vector<Ellipsoid> lung_pair(double center_x) {
  return {{{-center_x, -16.0, 42.0}, {40.0, 38.0, 36.0}},
          {{center_x, -16.0, 42.0}, {40.0, 38.0, 36.0}}};
}

}  // namespace

double sphere_radius_for_cc(double cc) {
  return std::cbrt(cc * 1000.0 * 3.0 / (4.0 * std::numbers::pi));
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"default",     "merged-lungs", "contrast-bowel",
                                              "gas-pockets", "with-table",   "no-thorax"};
  return names;
}

PhantomSpec preset(const std::string& name) {
  PhantomSpec spec;
  spec.lungs = lung_pair(50.0);
  spec.vat_blobs = default_vat_blobs();
  spec.gas_pockets = {{{0.0, -16.0, -40.0}, sphere_radius_for_cc(50.0)}};

  if (name == "default") return spec;
  if (name == "merged-lungs") {
    spec.lungs = lung_pair(30.0);
    return spec;
  }
  if (name == "contrast-bowel") {
    spec.contrast_bowel = Sphere{{0.0, 16.0, -66.0}, 10.0};
    return spec;
  }
  if (name == "gas-pockets") {
    // One merged lung component, so the largest pocket ranks second and only
    // the volume floor can reject it.
    spec.lungs = lung_pair(30.0);
    spec.gas_pockets.push_back({{0.0, 18.0, -68.0}, 9.0});
    spec.gas_pockets.push_back({{-34.0, -16.0, -70.0}, 8.0});
    return spec;
  }
  if (name == "with-table") {
    spec.table_y = std::pair{100.0, 108.0};
    return spec;
  }
  if (name == "no-thorax") {
    spec.lungs.clear();
    return spec;
  }
  throw std::invalid_argument("unknown phantom preset '" + name + "'");
}

Phantom generate(const PhantomSpec& spec) {
  Geometry geom;
  geom.dims = spec.dims;
  geom.spacing = spec.spacing;
  geom.validate();
  check(spec.noise_sigma >= 0.0, "noise sigma must be >= 0");
  check(spec.sat_mm > 0.0 && spec.sat_mm < std::min({spec.body_semi_x, spec.body_semi_y,
                                                      spec.body_half_z}),
        "SAT thickness must leave a muscle shell");
  check(spec.spine_inner_mm > 0.0 && spec.spine_inner_mm < spec.spine_outer_mm,
        "spine marrow radius must be inside the cortical radius");
  if (spec.table_y) {
    check(spec.table_y->first < spec.table_y->second, "table slab must have positive thickness");
    check(spec.table_y->first - (spec.body_semi_y + spec.skin_mm) >= spec.spacing[1],
          "table must be separated from the torso by at least one voxel");
  }

  const double muscle_a = spec.body_semi_x - spec.sat_mm;
  const double muscle_b = spec.body_semi_y - spec.sat_mm;
  const double muscle_hz = spec.body_half_z - spec.sat_mm;
  const double marrow_hz = spec.spine_half_z - (spec.spine_outer_mm - spec.spine_inner_mm);

  const auto& d = geom.dims;
  auto coord = [&](int i, int axis) { return (i - 0.5 * (d[axis] - 1)) * geom.spacing[axis]; };

  // Per-column (x, y) quantities shared by every slice.
  const std::size_t plane = static_cast<std::size_t>(d[0]) * static_cast<std::size_t>(d[1]);
  std::vector<double> outside_xy(plane);
  for (int y = 0; y < d[1]; ++y) {
    for (int x = 0; x < d[0]; ++x) {
      outside_xy[static_cast<std::size_t>(y) * d[0] + x] =
          ellipse_outside_distance(coord(x, 0), coord(y, 1), spec.body_semi_x, spec.body_semi_y);
    }
  }

  std::vector<Tissue> tissue(geom.voxel_count(), Tissue::Air);
  Phantom ph;
  ph.body = BinaryMask(geom);
  ph.cavity = BinaryMask(geom);
  ph.gas = BinaryMask(geom);
  ph.contrast = BinaryMask(geom);
  ph.table = BinaryMask(geom);

  std::size_t i = 0;
  for (int z = 0; z < d[2]; ++z) {
    const double pz = coord(z, 2);
    const double az = std::abs(pz);
    for (int y = 0; y < d[1]; ++y) {
      const double py = coord(y, 1);
      for (int x = 0; x < d[0]; ++x, ++i) {
        const double px = coord(x, 0);
        const Vec3 p{px, py, pz};

        const bool in_cavity = in_ellipse(px, py - spec.cavity_center_y, spec.cavity_semi_x,
                                          spec.cavity_semi_y) &&
                               az <= spec.cavity_half_z;
        int contents = 0;
        Tissue inner = Tissue::Organ;
        for (const auto& l : spec.lungs) {
          if (in_ellipsoid(p, l)) ++contents, inner = Tissue::Lung;
        }
        for (const auto& s : spec.vat_blobs) {
          if (in_sphere(p, s)) ++contents, inner = Tissue::Vat;
        }
        for (const auto& s : spec.gas_pockets) {
          if (in_sphere(p, s)) ++contents, inner = Tissue::Gas;
        }
        if (spec.contrast_bowel && in_sphere(p, *spec.contrast_bowel)) {
          ++contents, inner = Tissue::Contrast;
        }
        // Lungs may overlap each other (merged lungs); other parts may not.
        const bool only_lungs = inner == Tissue::Lung && contents > 1 &&
                                [&] {
                                  int others = 0;
                                  for (const auto& s : spec.vat_blobs) others += in_sphere(p, s);
                                  for (const auto& s : spec.gas_pockets) others += in_sphere(p, s);
                                  if (spec.contrast_bowel) others += in_sphere(p, *spec.contrast_bowel);
                                  return others == 0;
                                }();
        check(contents <= 1 || only_lungs, "cavity contents overlap");
        check(contents == 0 || in_cavity, "cavity contents must lie inside the cavity");

        const double spine_r = std::hypot(px, py - spec.spine_center_y);
        const bool in_spine = spine_r <= spec.spine_outer_mm && az <= spec.spine_half_z;

        const bool in_table =
            spec.table_y && py >= spec.table_y->first && py <= spec.table_y->second;
        if (in_table) ph.table[i] = 1;

        const bool in_body = outside_xy[static_cast<std::size_t>(y) * d[0] + x] == 0.0 &&
                             az <= spec.body_half_z;
        if (!in_body) {
          check(!in_cavity && !in_spine, "cavity and spine must lie inside the muscle shell");
          const double gap_z = std::max(0.0, az - spec.body_half_z);
          const double dist = std::hypot(outside_xy[static_cast<std::size_t>(y) * d[0] + x], gap_z);
          if (dist <= spec.skin_mm) {
            check(!in_table, "table overlaps the torso");
            tissue[i] = Tissue::Skin;
          } else if (in_table) {
            tissue[i] = Tissue::Table;
          }
          continue;
        }
        check(!in_table, "table overlaps the torso");
        ph.body[i] = 1;

        const bool in_muscle = in_ellipse(px, py, muscle_a, muscle_b) && az <= muscle_hz;
        if (!in_muscle) {
          check(!in_cavity && !in_spine, "cavity and spine must lie inside the muscle shell");
          tissue[i] = Tissue::Sat;
          continue;
        }
        check(!(in_cavity && in_spine), "spine overlaps the cavity");
        if (in_spine) {
          tissue[i] = (spine_r <= spec.spine_inner_mm && az <= marrow_hz) ? Tissue::Marrow
                                                                          : Tissue::Cortical;
        } else if (in_cavity) {
          ph.cavity[i] = 1;
          tissue[i] = inner;
          if (inner == Tissue::Gas) ph.gas[i] = 1;
          if (inner == Tissue::Contrast) ph.contrast[i] = 1;
        } else {
          tissue[i] = Tissue::Muscle;
        }
      }
    }
  }

  ph.ct = CtVolume(geom);
  ph.labels = LabelMap(geom);
  ph.bone = BinaryMask(geom);
  ph.lung = BinaryMask(geom);
  ph.sat = BinaryMask(geom);
  ph.muscle = BinaryMask(geom);
  ph.vat = BinaryMask(geom);

  std::optional<GaussianSource> noise;
  if (spec.noise_sigma > 0.0) noise.emplace(spec.seed);
  for (std::size_t v = 0; v < tissue.size(); ++v) {
    const Tissue t = tissue[v];
    double hu = nominal_hu(t, spec.hu);
    if (noise) hu += spec.noise_sigma * noise->next();
    ph.ct[v] = clamp_hu(std::lround(hu));

    Label label = ph.body[v] ? Label::Other : Label::Background;
    switch (t) {
      case Tissue::Cortical:
      case Tissue::Marrow: label = Label::Bone, ph.bone[v] = 1; break;
      case Tissue::Lung: label = Label::Lung, ph.lung[v] = 1; break;
      case Tissue::Sat: label = Label::Sat, ph.sat[v] = 1; break;
      case Tissue::Muscle: label = Label::Muscle, ph.muscle[v] = 1; break;
      case Tissue::Vat: label = Label::Vat, ph.vat[v] = 1; break;
      default: break;
    }
    ph.labels[v] = label;
  }
  return ph;
}

std::string format_phantom_spec(const PhantomSpec& spec, const std::string& preset_name) {
  std::ostringstream out;
  auto num = [](double v) { return format_double(v); };
  auto vec = [&](const Vec3& v) { return num(v[0]) + " " + num(v[1]) + " " + num(v[2]); };
  out << "# synthetic torso phantom (lengths in mm, intensities in HU)\n";
  out << "preset = " << preset_name << "\n";
  out << "dims = " << spec.dims[0] << " " << spec.dims[1] << " " << spec.dims[2] << "\n";
  out << "spacing = " << vec(spec.spacing) << "\n";
  out << "seed = " << spec.seed << "\n";
  out << "noise_sigma = " << num(spec.noise_sigma) << "\n";
  out << "noise_generator = mt19937_64+box-muller\n";
  out << "body_semi_axes = " << num(spec.body_semi_x) << " " << num(spec.body_semi_y) << "\n";
  out << "body_half_z = " << num(spec.body_half_z) << "\n";
  out << "skin_mm = " << num(spec.skin_mm) << "\n";
  out << "sat_mm = " << num(spec.sat_mm) << "\n";
  out << "cavity_semi_axes = " << num(spec.cavity_semi_x) << " " << num(spec.cavity_semi_y) << "\n";
  out << "cavity_center_y = " << num(spec.cavity_center_y) << "\n";
  out << "cavity_half_z = " << num(spec.cavity_half_z) << "\n";
  out << "spine_center_y = " << num(spec.spine_center_y) << "\n";
  out << "spine_radii = " << num(spec.spine_inner_mm) << " " << num(spec.spine_outer_mm) << "\n";
  out << "spine_half_z = " << num(spec.spine_half_z) << "\n";
  for (std::size_t k = 0; k < spec.lungs.size(); ++k) {
    out << "lung." << k << " = " << vec(spec.lungs[k].center) << " / "
        << vec(spec.lungs[k].semi_axes) << "\n";
  }
  for (std::size_t k = 0; k < spec.vat_blobs.size(); ++k) {
    out << "vat_blob." << k << " = " << vec(spec.vat_blobs[k].center) << " / "
        << num(spec.vat_blobs[k].radius) << "\n";
  }
  for (std::size_t k = 0; k < spec.gas_pockets.size(); ++k) {
    out << "gas_pocket." << k << " = " << vec(spec.gas_pockets[k].center) << " / "
        << num(spec.gas_pockets[k].radius) << "\n";
  }
  if (spec.contrast_bowel) {
    out << "contrast_bowel = " << vec(spec.contrast_bowel->center) << " / "
        << num(spec.contrast_bowel->radius) << "\n";
  }
  if (spec.table_y) {
    out << "table_y = " << num(spec.table_y->first) << " " << num(spec.table_y->second) << "\n";
  }
  const auto& hu = spec.hu;
  out << "hu.air = " << hu.air << "\nhu.lung = " << hu.lung << "\nhu.gas = " << hu.gas
      << "\nhu.fat = " << hu.fat << "\nhu.organ = " << hu.organ << "\nhu.muscle = " << hu.muscle
      << "\nhu.marrow = " << hu.marrow << "\nhu.contrast = " << hu.contrast
      << "\nhu.cortical = " << hu.cortical << "\nhu.table = " << hu.table << "\n";
  return out.str();
}

void write_phantom(const Phantom& ph, const PhantomSpec& spec, const std::string& preset_name,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_mhd(ph.ct, dir / "ct.mhd");
  write_mhd(ph.body, dir / "body.mhd");
  write_mhd(ph.cavity, dir / "cavity.mhd");
  write_mhd(ph.bone, dir / "bone.mhd");
  write_mhd(ph.lung, dir / "lung.mhd");
  write_mhd(ph.sat, dir / "sat.mhd");
  write_mhd(ph.muscle, dir / "muscle.mhd");
  write_mhd(ph.vat, dir / "vat.mhd");
  write_mhd(ph.labels, dir / "labels.mhd");
  std::ofstream cfg(dir / "phantom.cfg", std::ios::trunc);
  if (!cfg) throw IoError("cannot write " + (dir / "phantom.cfg").string());
  cfg << format_phantom_spec(spec, preset_name);
}

}  // namespace bodycomp
