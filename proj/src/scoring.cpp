#include "raymask/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "raymask/metrics.hpp"

namespace raymask {

namespace {

void check_positive(std::span<const double> distances) {
  if (distances.empty()) throw std::invalid_argument("empty ray set");
  for (double d : distances)
    if (!(d > 0.0)) throw std::invalid_argument("non-positive ray length");
}

double huber(double d) {
  const double a = std::abs(d);
  return a <= 1.0 ? 0.5 * d * d : a - 0.5;
}

}  // namespace

double focal_loss(double p_pred, double p_gt, double gamma) {
  if (!(p_pred > 0.0) || p_pred > 1.0)
    throw std::invalid_argument("p_pred must be in (0, 1]");
  if (p_gt < 0.0 || p_gt > 1.0)
    throw std::invalid_argument("p_gt must be in [0, 1]");
  if (gamma < 0.0) throw std::invalid_argument("gamma must be non-negative");
  return -std::pow(1.0 - p_pred * p_gt, gamma) * std::log(p_pred);
}

double standard_focal_loss(double p_pred, bool positive, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be non-negative");
  if (positive) {
    if (!(p_pred > 0.0) || p_pred > 1.0)
      throw std::invalid_argument("p_pred must be in (0, 1]");
    return -std::pow(1.0 - p_pred, gamma) * std::log(p_pred);
  }
  if (p_pred < 0.0 || !(p_pred < 1.0))
    throw std::invalid_argument("p_pred must be in [0, 1) for negatives");
  return -std::pow(p_pred, gamma) * std::log(1.0 - p_pred);
}

double smooth_l1_bbox(const BBoxDeltas& deltas) {
  return huber(deltas.t) + huber(deltas.b) + huber(deltas.l) + huber(deltas.r);
}

double polar_centerness_original(std::span<const double> distances) {
  check_positive(distances);
  const auto [lo, hi] = std::minmax_element(distances.begin(), distances.end());
  if (*lo == *hi) return 1.0;
  return std::sqrt(*lo / *hi);
}

double polar_centerness_improved(std::span<const double> distances) {
  check_positive(distances);
  const auto [lo, hi] = std::minmax_element(distances.begin(), distances.end());
  if (*lo == *hi) return 1.0;
  // summed in ascending order so the score is exactly permutation invariant
  std::vector<double> sorted(distances.begin(), distances.end());
  std::sort(sorted.begin(), sorted.end());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
                      static_cast<double>(sorted.size());
  return std::sqrt(0.5 * (sorted.front() / mean + mean / sorted.back()));
}

double polar_iou(std::span<const double> d, std::span<const double> e,
                 bool squared) {
  if (d.size() != e.size())
    throw std::invalid_argument("ray sets differ in length");
  if (d.empty()) throw std::invalid_argument("empty ray set");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double lo = std::min(d[i], e[i]);
    const double hi = std::max(d[i], e[i]);
    num += squared ? lo * lo : lo;
    den += squared ? hi * hi : hi;
  }
  if (den == 0.0) throw std::invalid_argument("degenerate ray sets");
  return num / den;
}

PolarIoULossResult polar_iou_loss(std::span<const double> target,
                                  std::span<const double> predicted) {
  if (target.size() != predicted.size())
    throw std::invalid_argument("ray sets differ in length");
  check_positive(target);
  check_positive(predicted);

  double sum_min = 0.0, sum_max = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    sum_min += std::min(target[i], predicted[i]);
    sum_max += std::max(target[i], predicted[i]);
  }

  PolarIoULossResult result;
  result.loss = -std::log(polar_iou(target, predicted));
  result.grad.resize(predicted.size());
  for (std::size_t i = 0; i < predicted.size(); ++i)
    result.grad[i] =
        predicted[i] > target[i] ? 1.0 / sum_max : -1.0 / sum_min;
  return result;
}

double total_loss(double cls, double centerness, double bbox, double mask) {
  if (!(centerness > 0.0) || centerness > 1.0)
    throw std::invalid_argument("centerness must be in (0, 1]");
  return cls * centerness + bbox + mask;
}

std::vector<std::pair<double, double>> default_scale_ranges() {
  return {{-1.0, 256.0},
          {256.0, 512.0},
          {512.0, 1024.0},
          {1024.0, 2048.0},
          {2048.0, 1e8}};
}

int assign_fpn_level(const PolarMask& polar,
                     std::span<const std::pair<double, double>> ranges) {
  if (ranges.empty()) throw std::invalid_argument("empty range list");
  if (polar.distances.empty())
    throw std::invalid_argument("polar mask has no rays");
  const double diameter =
      2.0 * *std::max_element(polar.distances.begin(), polar.distances.end());
  for (std::size_t i = 0; i < ranges.size(); ++i)
    if (diameter > ranges[i].first && diameter <= ranges[i].second)
      return static_cast<int>(i);
  return static_cast<int>(ranges.size()) - 1;
}

int assign_fpn_level(const PolarMask& polar) {
  const auto ranges = default_scale_ranges();
  return assign_fpn_level(polar, ranges);
}

namespace {

bool all_sentinel(const PolarMask& polar) {
  return std::all_of(polar.distances.begin(), polar.distances.end(),
                     [](double d) { return d <= kSentinelDistance; });
}

// Translation-invariant pixel IoU of the decoded masks, rendered on a raster
// just covering both.
double decoded_pixel_iou(const PolarMask& a, const PolarMask& b) {
  auto reach = [](const PolarMask& p) {
    return *std::max_element(p.distances.begin(), p.distances.end());
  };
  const double ra = reach(a), rb = reach(b);
  const double x0 = std::floor(std::min(a.center.x - ra, b.center.x - rb)) - 1;
  const double y0 = std::floor(std::min(a.center.y - ra, b.center.y - rb)) - 1;
  const double x1 = std::ceil(std::max(a.center.x + ra, b.center.x + rb)) + 1;
  const double y1 = std::ceil(std::max(a.center.y + ra, b.center.y + rb)) + 1;
  const int w = std::max(1, static_cast<int>(x1 - x0) + 1);
  const int h = std::max(1, static_cast<int>(y1 - y0) + 1);

  PolarMask sa = a, sb = b;
  sa.center = {a.center.x - x0, a.center.y - y0};
  sb.center = {b.center.x - x0, b.center.y - y0};
  return jaccard(decode(sa, w, h), decode(sb, w, h));
}

double overlap(const ScoredMask& a, const ScoredMask& b) {
  const double dx = a.polar.center.x - b.polar.center.x;
  const double dy = a.polar.center.y - b.polar.center.y;
  if (a.polar.ray_count == b.polar.ray_count && std::hypot(dx, dy) <= 1.0)
    return polar_iou(a.polar.distances, b.polar.distances);
  return decoded_pixel_iou(a.polar, b.polar);
}

}  // namespace

std::vector<ScoredMask> nms(std::vector<ScoredMask> candidates,
                            double iou_threshold) {
  if (iou_threshold < 0.0 || iou_threshold > 1.0)
    throw std::invalid_argument("iou_threshold must be in [0, 1]");

  std::erase_if(candidates,
                [](const ScoredMask& m) { return all_sentinel(m.polar); });
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const ScoredMask& a, const ScoredMask& b) {
                     return a.score() > b.score();
                   });

  std::vector<ScoredMask> kept;
  for (const auto& candidate : candidates) {
    bool suppressed = false;
    for (const auto& keeper : kept)
      if (overlap(keeper, candidate) >= iou_threshold) {
        suppressed = true;
        break;
      }
    if (!suppressed) kept.push_back(candidate);
  }
  return kept;
}

}  // namespace raymask
