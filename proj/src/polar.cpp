#include "raymask/polar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace raymask {

namespace {

PointF centroid(const Contour& c) {
  double sx = 0.0, sy = 0.0;
  for (const auto& p : c) {
    sx += p.x;
    sy += p.y;
  }
  return {sx / static_cast<double>(c.size()),
          sy / static_cast<double>(c.size())};
}

double shoelace_area(const Contour& c) {
  double acc = 0.0;
  for (std::size_t i = 0, n = c.size(); i < n; ++i) {
    const auto& a = c[i];
    const auto& b = c[(i + 1) % n];
    acc += static_cast<double>(a.x) * b.y - static_cast<double>(b.x) * a.y;
  }
  return std::abs(acc) * 0.5;
}

double distance(PointF a, PointF b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Extents {
  double x_lo = std::numeric_limits<double>::infinity();
  double y_lo = std::numeric_limits<double>::infinity();
  double x_hi = -std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();

  void add(const Contour& c) {
    for (const auto& p : c) {
      x_lo = std::min(x_lo, static_cast<double>(p.x));
      y_lo = std::min(y_lo, static_cast<double>(p.y));
      x_hi = std::max(x_hi, static_cast<double>(p.x));
      y_hi = std::max(y_hi, static_cast<double>(p.y));
    }
  }
  double diameter() const { return std::hypot(x_hi - x_lo, y_hi - y_lo); }
};

double single_diameter(const Contour& c) {
  Extents e;
  e.add(c);
  return e.diameter();
}

// Absolute angular difference on the circle, in degrees.
double circular_diff(double a, double b) {
  double d = std::fmod(std::abs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

}  // namespace

double contour_diameter(std::span<const Contour> contours) {
  if (contours.empty()) throw std::invalid_argument("empty contour set");
  Extents e;
  for (const auto& c : contours) e.add(c);
  return e.diameter();
}

std::vector<Contour> merge_contours(std::vector<Contour> contours,
                                    const MergeConfig& cfg) {
  if (contours.empty()) throw std::invalid_argument("empty contour set");
  if (!(cfg.mu > 0.0)) throw std::invalid_argument("mu must be positive");

  std::size_t biggest = 0;
  double best_area = -1.0;
  for (std::size_t i = 0; i < contours.size(); ++i) {
    const double area = shoelace_area(contours[i]);
    if (area > best_area) {
      best_area = area;
      biggest = i;
    }
  }

  std::vector<bool> taken(contours.size(), false);
  taken[biggest] = true;
  std::vector<std::size_t> result{biggest};
  Extents merged_extents;
  merged_extents.add(contours[biggest]);
  PointF p = centroid(contours[biggest]);

  bool added = true;
  while (added) {
    added = false;
    for (std::size_t i = 0; i < contours.size(); ++i) {
      if (taken[i]) continue;
      const PointF pi = centroid(contours[i]);
      const double threshold =
          cfg.mu * (merged_extents.diameter() + single_diameter(contours[i]));
      if (distance(p, pi) < threshold) {
        taken[i] = true;
        result.push_back(i);
        merged_extents.add(contours[i]);
        p = {(p.x + pi.x) * 0.5, (p.y + pi.y) * 0.5};
        added = true;
      }
    }
  }

  std::vector<Contour> out;
  out.reserve(result.size());
  for (std::size_t i : result) out.push_back(std::move(contours[i]));
  return out;
}

PolarMask encode(const BinaryMask& mask, PointF center, int ray_count,
                 const MergeConfig& cfg) {
  if (ray_count < 1) throw std::invalid_argument("ray_count must be positive");
  if (center.x < 0.0 || center.x > mask.width() - 1 || center.y < 0.0 ||
      center.y > mask.height() - 1)
    throw std::invalid_argument("center outside raster");

  auto contours = extract_contours(mask);
  if (contours.empty()) throw std::invalid_argument("empty mask");
  const auto merged = merge_contours(std::move(contours), cfg);

  struct Sample {
    double dist;
    double angle;  // degrees in (0, 360]
  };
  std::vector<Sample> samples;
  auto add_sample = [&](double x, double y) {
    const double dx = x - center.x;
    const double dy = y - center.y;
    double deg = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
    if (deg <= 0.0) deg += 360.0;
    samples.push_back({std::hypot(dx, dy), deg});
  };
  // Contours are resampled along their edges so that no angular bin misses a
  // covered direction just because pixel centers are sparse at this radius;
  // the sentinel then marks directions with genuinely no contour.
  constexpr double kSampleSpacing = 0.2;
  for (const auto& contour : merged) {
    for (std::size_t i = 0, n = contour.size(); i < n; ++i) {
      const auto& a = contour[i];
      const auto& b = contour[(i + 1) % n];
      const double len = std::hypot(static_cast<double>(b.x - a.x),
                                    static_cast<double>(b.y - a.y));
      const int steps = std::max(1, static_cast<int>(std::ceil(len / kSampleSpacing)));
      for (int k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        add_sample(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t);
      }
    }
  }

  const double spacing = 360.0 / ray_count;
  // Point angles are quantized to (at most) whole degrees; the wider +-delta
  // window is the near-miss fallback, after which the sentinel applies.
  const double fine = std::min(0.5, 0.5 * spacing);
  const double delta = 0.5 * spacing;

  PolarMask polar{center, ray_count, std::vector<double>(ray_count)};
  for (int i = 1; i <= ray_count; ++i) {
    const double theta = spacing * i;
    double best_fine = -1.0;
    double best_near = -1.0;
    for (const auto& s : samples) {
      const double diff = circular_diff(s.angle, theta);
      if (diff <= fine)
        best_fine = std::max(best_fine, s.dist);
      else if (diff <= delta)
        best_near = std::max(best_near, s.dist);
    }
    const double d = best_fine >= 0.0  ? best_fine
                     : best_near >= 0.0 ? best_near
                                        : kSentinelDistance;
    polar.distances[i - 1] = std::max(d, kSentinelDistance);
  }
  return polar;
}

BinaryMask decode(const PolarMask& polar, int width, int height) {
  if (polar.ray_count < 1 ||
      polar.distances.size() != static_cast<std::size_t>(polar.ray_count))
    throw std::invalid_argument("malformed polar mask");
  if (polar.ray_count < 3) return BinaryMask(width, height);

  std::vector<PointF> vertices(polar.ray_count);
  const double step = 2.0 * std::numbers::pi / polar.ray_count;
  for (int i = 1; i <= polar.ray_count; ++i) {
    const double theta = step * i;
    const double d = polar.distances[i - 1];
    vertices[i - 1] = {std::cos(theta) * d + polar.center.x,
                       std::sin(theta) * d + polar.center.y};
  }
  return rasterize_polygon(vertices, width, height);
}

std::vector<CenterCandidate> sample_center_candidates(
    const BinaryMask& mask, const CenterSampleConfig& cfg, double cell) {
  if (cfg.grid != 3 && cfg.grid != 4)
    throw std::invalid_argument("grid must be 3 or 4");
  if (!(cfg.stride > 0.0)) throw std::invalid_argument("stride must be positive");
  if (!(cell > 0.0)) throw std::invalid_argument("cell must be positive");

  const PointF mc = mass_center(mask);
  const double half = (cfg.grid - 1) / 2.0;
  const double reach = cfg.stride * cell;

  std::vector<CenterCandidate> out;
  out.reserve(static_cast<std::size_t>(cfg.grid) * cfg.grid);
  for (int gy = 0; gy < cfg.grid; ++gy) {
    for (int gx = 0; gx < cfg.grid; ++gx) {
      const double ox = (gx - half) * cell;
      const double oy = (gy - half) * cell;
      const double chebyshev = std::max(std::abs(ox), std::abs(oy));
      out.push_back({{mc.x + ox, mc.y + oy}, chebyshev <= reach});
    }
  }
  return out;
}

std::string to_jsonl(const PolarMask& polar) {
  nlohmann::ordered_json j;
  j["center"] = {polar.center.x, polar.center.y};
  j["n"] = polar.ray_count;
  j["d"] = polar.distances;
  return j.dump();
}

PolarMask from_jsonl(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("bad polar mask json: ") + e.what());
  }
  if (!j.contains("center") || !j.contains("n") || !j.contains("d"))
    throw std::invalid_argument("polar mask json needs center, n and d");
  const auto& c = j["center"];
  if (!c.is_array() || c.size() != 2)
    throw std::invalid_argument("center must be [x, y]");

  PolarMask polar;
  polar.center = {c[0].get<double>(), c[1].get<double>()};
  polar.ray_count = j["n"].get<int>();
  polar.distances = j["d"].get<std::vector<double>>();
  if (polar.ray_count < 1 ||
      polar.distances.size() != static_cast<std::size_t>(polar.ray_count))
    throw std::invalid_argument("distance count does not match n");
  for (double d : polar.distances)
    if (!(d >= kSentinelDistance))
      throw std::invalid_argument("ray length below sentinel");
  return polar;
}

}  // namespace raymask
