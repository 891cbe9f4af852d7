#include "bodycomp/distance.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "bodycomp/parallel.hpp"

namespace bodycomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double axis_term(long offset, double spacing) {
  const double t = static_cast<double>(offset) * spacing;
  return t * t;
}

// Scratch buffers for one 1-D envelope pass.
struct EnvelopeScratch {
  std::vector<double> f;
  std::vector<double> out;
  std::vector<int> sites;
  std::vector<double> bounds;

  explicit EnvelopeScratch(int n)
      : f(static_cast<std::size_t>(n)),
        out(static_cast<std::size_t>(n)),
        sites(static_cast<std::size_t>(n)),
        bounds(static_cast<std::size_t>(n) + 1) {}
};

// out[i] = min_q f[q] + ((i - q) * spacing)^2 over finite f[q].
void lower_envelope(int n, double spacing, EnvelopeScratch& s) {
  int k = -1;
  for (int q = 0; q < n; ++q) {
    const double fq = s.f[static_cast<std::size_t>(q)];
    if (fq == kInf) continue;
    const double pq = q * spacing;
    if (k < 0) {
      k = 0;
      s.sites[0] = q;
      s.bounds[0] = -kInf;
      s.bounds[1] = kInf;
      continue;
    }
    double cut;
    while (true) {
      const int v = s.sites[static_cast<std::size_t>(k)];
      const double pv = v * spacing;
      cut = ((fq + pq * pq) - (s.f[static_cast<std::size_t>(v)] + pv * pv)) / (2.0 * (pq - pv));
      if (cut > s.bounds[static_cast<std::size_t>(k)]) break;
      --k;  // bounds[0] is -inf, so k never drops below 0 here
    }
    ++k;
    s.sites[static_cast<std::size_t>(k)] = q;
    s.bounds[static_cast<std::size_t>(k)] = cut;
    s.bounds[static_cast<std::size_t>(k) + 1] = kInf;
  }

  if (k < 0) {
    std::fill(s.out.begin(), s.out.begin() + n, kInf);
    return;
  }
  int j = 0;
  for (int i = 0; i < n; ++i) {
    const double p = i * spacing;
    while (s.bounds[static_cast<std::size_t>(j) + 1] < p) ++j;
    // Rounded cuts can misplace a near-tie by one site; take the float minimum
    // over the neighbours too.
    double best = kInf;
    for (int c = std::max(0, j - 1); c <= std::min(k, j + 1); ++c) {
      const int v = s.sites[static_cast<std::size_t>(c)];
      best = std::min(best, s.f[static_cast<std::size_t>(v)] + axis_term(i - v, spacing));
    }
    s.out[static_cast<std::size_t>(i)] = best;
  }
}

}  // namespace

std::vector<double> squared_distance_to_features(std::span<const std::uint8_t> feature,
                                                 const Dims& dims, const Vec3& spacing) {
  const int nx = dims[0], ny = dims[1], nz = dims[2];
  const std::size_t sx = 1;
  const std::size_t sy = static_cast<std::size_t>(nx);
  const std::size_t sz = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  const std::size_t total = sz * static_cast<std::size_t>(nz);
  if (feature.size() != total) throw std::invalid_argument("feature grid size mismatch");

  std::vector<double> dist(total);

  // x: nearest feature in the row by forward/backward scans.
  parallel_for(static_cast<std::size_t>(ny) * nz, [&](std::size_t begin, std::size_t end) {
    std::vector<long> gap(static_cast<std::size_t>(nx));
    for (std::size_t row = begin; row < end; ++row) {
      const std::size_t base = row * sy;
      constexpr long kNone = std::numeric_limits<long>::max();
      long last = -1;
      for (int x = 0; x < nx; ++x) {
        if (feature[base + x]) last = x;
        gap[static_cast<std::size_t>(x)] = last < 0 ? kNone : x - last;
      }
      last = -1;
      for (int x = nx - 1; x >= 0; --x) {
        if (feature[base + x]) last = x;
        if (last >= 0) gap[static_cast<std::size_t>(x)] = std::min(gap[static_cast<std::size_t>(x)], last - x);
        const long g = gap[static_cast<std::size_t>(x)];
        dist[base + static_cast<std::size_t>(x) * sx] = g == kNone ? kInf : axis_term(g, spacing[0]);
      }
    }
  });

  // y and z: lower envelope of parabolas along each line.
  auto envelope_pass = [&](int n, std::size_t stride, double step, std::size_t lines,
                           auto line_base) {
    parallel_for(lines, [&](std::size_t begin, std::size_t end) {
      EnvelopeScratch scratch(n);
      for (std::size_t line = begin; line < end; ++line) {
        const std::size_t base = line_base(line);
        for (int i = 0; i < n; ++i) scratch.f[static_cast<std::size_t>(i)] = dist[base + i * stride];
        lower_envelope(n, step, scratch);
        for (int i = 0; i < n; ++i) dist[base + i * stride] = scratch.out[static_cast<std::size_t>(i)];
      }
    });
  };

  if (ny > 1) {
    envelope_pass(ny, sy, spacing[1], static_cast<std::size_t>(nx) * nz, [&](std::size_t line) {
      const std::size_t z = line / static_cast<std::size_t>(nx);
      const std::size_t x = line % static_cast<std::size_t>(nx);
      return z * sz + x;
    });
  }
  if (nz > 1) {
    envelope_pass(nz, sz, spacing[2], sz, [](std::size_t line) { return line; });
  }
  return dist;
}

DistanceField edt_sq(const BinaryMask& mask) {
  std::vector<std::uint8_t> background(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) background[i] = mask[i] ? 0 : 1;
  return DistanceField(mask.geometry(),
                       squared_distance_to_features(background, mask.dims(), mask.spacing()));
}

}  // namespace bodycomp
