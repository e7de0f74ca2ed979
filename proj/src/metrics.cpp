#include "raymask/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace raymask {

namespace {

void check_same_size(const BinaryMask& m, const BinaryMask& g) {
  if (m.width() != g.width() || m.height() != g.height())
    throw std::invalid_argument("mask dimensions differ");
}

// Foreground pixels touching background or the raster edge (4-connectivity).
std::vector<PointI> boundary_pixels(const BinaryMask& mask) {
  std::vector<PointI> out;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      const bool edge = !mask.in_bounds(x - 1, y) || !mask.at(x - 1, y) ||
                        !mask.in_bounds(x + 1, y) || !mask.at(x + 1, y) ||
                        !mask.in_bounds(x, y - 1) || !mask.at(x, y - 1) ||
                        !mask.in_bounds(x, y + 1) || !mask.at(x, y + 1);
      if (edge) out.push_back({x, y});
    }
  return out;
}

double matched_fraction(const std::vector<PointI>& points,
                        const BinaryMask& other_boundary, double tol) {
  const int radius = static_cast<int>(std::floor(tol));
  const double tol2 = tol * tol;
  std::size_t matched = 0;
  for (const auto& p : points) {
    bool hit = false;
    for (int dy = -radius; dy <= radius && !hit; ++dy)
      for (int dx = -radius; dx <= radius && !hit; ++dx) {
        if (dx * dx + dy * dy > tol2) continue;
        const int nx = p.x + dx;
        const int ny = p.y + dy;
        if (other_boundary.in_bounds(nx, ny) && other_boundary.at(nx, ny))
          hit = true;
      }
    if (hit) ++matched;
  }
  return static_cast<double>(matched) / static_cast<double>(points.size());
}

BinaryMask as_mask(const std::vector<PointI>& points, int w, int h) {
  BinaryMask m(w, h);
  for (const auto& p : points) m.set(p.x, p.y, true);
  return m;
}

}  // namespace

double jaccard(const BinaryMask& m, const BinaryMask& g) {
  check_same_size(m, g);
  std::size_t inter = 0, uni = 0;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      const bool a = m.at(x, y);
      const bool b = g.at(x, y);
      if (a && b) ++inter;
      if (a || b) ++uni;
    }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double contour_f(const BinaryMask& m, const BinaryMask& g, double tol) {
  check_same_size(m, g);
  if (tol < 0.0) throw std::invalid_argument("tol must be non-negative");

  const auto bm = boundary_pixels(m);
  const auto bg = boundary_pixels(g);
  if (bm.empty() && bg.empty()) return 1.0;
  if (bm.empty() || bg.empty()) return 0.0;

  const auto gm_mask = as_mask(bg, g.width(), g.height());
  const auto mm_mask = as_mask(bm, m.width(), m.height());
  const double precision = matched_fraction(bm, gm_mask, tol);
  const double recall = matched_fraction(bg, mm_mask, tol);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double ape(std::span<const BinaryMask> ms, std::span<const BinaryMask> gs,
           ApeMode mode) {
  if (ms.size() != gs.size())
    throw std::invalid_argument("frame counts differ");
  if (ms.empty()) throw std::invalid_argument("no frames");

  double total = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    check_same_size(ms[i], gs[i]);
    std::size_t err = 0;
    for (int y = 0; y < ms[i].height(); ++y)
      for (int x = 0; x < ms[i].width(); ++x) {
        const bool a = ms[i].at(x, y);
        const bool b = gs[i].at(x, y);
        if (a && !b) ++err;
        if (mode == ApeMode::symmetric && !a && b) ++err;
      }
    total += static_cast<double>(err);
  }
  return total / static_cast<double>(ms.size());
}

AggregateStats aggregate(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("no values");
  const std::size_t n = values.size();
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) /
      static_cast<double>(n);
  const auto above = std::count_if(values.begin(), values.end(),
                                   [](double v) { return v > 0.5; });
  const std::size_t quartile = (n + 3) / 4;
  const double head =
      std::accumulate(values.begin(), values.begin() + quartile, 0.0) /
      static_cast<double>(quartile);
  const double tail =
      std::accumulate(values.end() - quartile, values.end(), 0.0) /
      static_cast<double>(quartile);
  return {mean, static_cast<double>(above) / static_cast<double>(n),
          head - tail};
}

}  // namespace raymask
