#pragma once

// Test-only oracles and fixture generators. Everything here is deliberately
// independent of the library code paths it is used to check: brute-force
// loops, direct formulas, no shared helpers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "raymask/mask.hpp"
#include "raymask/netops.hpp"

namespace testsupport {

// ---------------------------------------------------------------------------
// Point-in-polygon oracle (PNPOLY crossing test, half-open in y, crossings
// strictly to the right).
inline bool point_in_polygon(double px, double py,
                             const std::vector<raymask::PointF>& poly) {
  bool inside = false;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    if ((a.y > py) != (b.y > py) &&
        px < a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y))
      inside = !inside;
  }
  return inside;
}

// ---------------------------------------------------------------------------
// Connected-component oracle: recursive-style DFS labeling, 8-connectivity.
struct ComponentInfo {
  std::size_t pixel_count = 0;
  int y_min = 0;
  int x_min = 0;
};

inline std::vector<ComponentInfo> label_components(const raymask::BinaryMask& m) {
  std::vector<int> label(static_cast<std::size_t>(m.width()) * m.height(), -1);
  std::vector<ComponentInfo> comps;
  std::vector<std::pair<int, int>> todo;
  for (int sy = 0; sy < m.height(); ++sy)
    for (int sx = 0; sx < m.width(); ++sx) {
      if (!m.at(sx, sy) || label[sy * m.width() + sx] >= 0) continue;
      const int id = static_cast<int>(comps.size());
      ComponentInfo info{0, sy, sx};
      todo.push_back({sx, sy});
      label[sy * m.width() + sx] = id;
      while (!todo.empty()) {
        auto [x, y] = todo.back();
        todo.pop_back();
        ++info.pixel_count;
        info.y_min = std::min(info.y_min, y);
        info.x_min = std::min(info.x_min, x);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if ((dx || dy) && m.in_bounds(nx, ny) && m.at(nx, ny) &&
                label[ny * m.width() + nx] < 0) {
              label[ny * m.width() + nx] = id;
              todo.push_back({nx, ny});
            }
          }
      }
      comps.push_back(info);
    }
  return comps;
}

// Mask of the 8-connected component containing (sx, sy).
inline raymask::BinaryMask component_of(const raymask::BinaryMask& m, int sx,
                                        int sy) {
  raymask::BinaryMask out(m.width(), m.height());
  std::vector<std::pair<int, int>> todo{{sx, sy}};
  out.set(sx, sy, true);
  while (!todo.empty()) {
    auto [x, y] = todo.back();
    todo.pop_back();
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if ((dx || dy) && m.in_bounds(nx, ny) && m.at(nx, ny) &&
            !out.at(nx, ny)) {
          out.set(nx, ny, true);
          todo.push_back({nx, ny});
        }
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Angle-binning oracle for encode: contour edges are walked at 0.2 px
// spacing, then for a target angle the farthest sample whose angle falls in
// the fine window wins; else the farthest within +-delta; else the sentinel.
inline std::vector<raymask::PointF> densify_contours(
    const std::vector<raymask::Contour>& contours) {
  std::vector<raymask::PointF> out;
  for (const auto& contour : contours) {
    const std::size_t n = contour.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = contour[i];
      const auto& b = contour[(i + 1) % n];
      const double len = std::hypot(static_cast<double>(b.x - a.x),
                                    static_cast<double>(b.y - a.y));
      const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.2)));
      for (int k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        out.push_back({a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t});
      }
    }
  }
  return out;
}

inline double encode_bin_oracle(const std::vector<raymask::PointF>& samples,
                                raymask::PointF center, double theta_deg,
                                int ray_count) {
  const double fine = std::min(0.5, 180.0 / ray_count);
  const double delta = 180.0 / ray_count;
  double best_fine = -1.0, best_near = -1.0;
  for (const auto& p : samples) {
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    double ang = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
    if (ang <= 0.0) ang += 360.0;
    double diff = std::fmod(std::abs(ang - theta_deg), 360.0);
    diff = std::min(diff, 360.0 - diff);
    const double dist = std::sqrt(dx * dx + dy * dy);
    if (diff <= fine)
      best_fine = std::max(best_fine, dist);
    else if (diff <= delta)
      best_near = std::max(best_near, dist);
  }
  if (best_fine >= 0.0) return std::max(best_fine, 1e-6);
  if (best_near >= 0.0) return std::max(best_near, 1e-6);
  return 1e-6;
}

// ---------------------------------------------------------------------------
// Brute-force correlation oracles.
inline double corr_at(const raymask::FeatureMap& s, const raymask::FeatureMap& t,
                      int oy, int ox) {
  double acc = 0.0;
  for (int y = 0; y < t.height(); ++y)
    for (int x = 0; x < t.width(); ++x)
      for (int c = 0; c < t.channels(); ++c)
        acc += s.at(oy + y, ox + x, c) * t.at(y, x, c);
  return acc;
}

inline double corr_at_channel(const raymask::FeatureMap& s,
                              const raymask::FeatureMap& t, int oy, int ox,
                              int ch) {
  double acc = 0.0;
  for (int y = 0; y < t.height(); ++y)
    for (int x = 0; x < t.width(); ++x)
      acc += s.at(oy + y, ox + x, ch) * t.at(y, x, ch);
  return acc;
}

// ---------------------------------------------------------------------------
// Fixture generators (deterministic per seed).

// Disc by analytic containment, the reference for round shapes.
inline raymask::BinaryMask make_disc(int width, int height, double cx, double cy,
                                     double radius) {
  raymask::BinaryMask m(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius)
        m.set(x, y, true);
  return m;
}

inline raymask::BinaryMask make_ellipse(int width, int height, double cx,
                                        double cy, double rx, double ry) {
  raymask::BinaryMask m(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double nx = (x - cx) / rx;
      const double ny = (y - cy) / ry;
      if (nx * nx + ny * ny <= 1.0) m.set(x, y, true);
    }
  return m;
}

// Star-convex radial shape: r(theta) = base * (1 + sum_k a_k cos(k theta +
// phi_k)) with sum |a_k| <= 0.4, rasterized by analytic containment so the
// mask itself is an independent reference. Returns the mask and the star
// center.
struct StarShape {
  raymask::BinaryMask mask;
  raymask::PointF center;
};

inline StarShape make_star_shape_at(std::mt19937& rng, int size, double cx,
                                    double cy) {
  std::uniform_real_distribution<double> base_dist(34.0, 50.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double base = base_dist(rng);

  double amp[4], phi[4];
  double budget = 0.3;
  for (int k = 0; k < 4; ++k) {
    amp[k] = unit(rng) * budget / (4 - k);
    budget -= amp[k];
    phi[k] = phase(rng);
  }

  auto radius_at = [&](double theta) {
    double r = 1.0;
    for (int k = 0; k < 4; ++k) r += amp[k] * std::cos((k + 1) * theta + phi[k]);
    return base * r;
  };

  raymask::BinaryMask m(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      const double rho = std::sqrt(dx * dx + dy * dy);
      if (rho <= radius_at(std::atan2(dy, dx))) m.set(x, y, true);
    }
  return {std::move(m), {cx, cy}};
}

inline StarShape make_star_shape(std::mt19937& rng, int size = 128) {
  std::uniform_real_distribution<double> jitter(-3.0, 3.0);
  const double cx = size / 2.0 + jitter(rng);
  const double cy = size / 2.0 + jitter(rng);
  return make_star_shape_at(rng, size, cx, cy);
}

// Union of a few random discs; may have several components.
inline raymask::BinaryMask make_blob_mask(std::mt19937& rng, int size = 96,
                                          int min_discs = 1, int max_discs = 4) {
  std::uniform_int_distribution<int> count(min_discs, max_discs);
  std::uniform_real_distribution<double> pos(12.0, size - 12.0);
  std::uniform_real_distribution<double> rad(3.0, 11.0);
  raymask::BinaryMask m(size, size);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const double cx = pos(rng), cy = pos(rng), r = rad(rng);
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x)
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r)
          m.set(x, y, true);
  }
  return m;
}

inline raymask::FeatureMap random_feature_map(std::mt19937& rng, int h, int w,
                                              int c, bool integers = false) {
  std::vector<double> data(static_cast<std::size_t>(h) * w * c);
  if (integers) {
    std::uniform_int_distribution<int> d(-9, 9);
    for (auto& v : data) v = d(rng);
  } else {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (auto& v : data) v = d(rng);
  }
  return raymask::FeatureMap(h, w, c, std::move(data));
}

inline std::vector<double> random_rays(std::mt19937& rng, int n, double lo = 1.0,
                                       double hi = 100.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> out(n);
  for (auto& v : out) v = d(rng);
  return out;
}

}  // namespace testsupport
