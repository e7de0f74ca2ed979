#include "raymask/mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace raymask {

BinaryMask::BinaryMask(int width, int height)
    : width_(width),
      height_(height),
      bits_(static_cast<std::size_t>(width) * height, 0) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("mask dimensions must be positive");
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("mask dimensions must be positive");
  if (bits_.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("mask bit count does not match dimensions");
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(
      std::count_if(bits_.begin(), bits_.end(), [](auto b) { return b != 0; }));
}

namespace {

// 8-neighborhood in clockwise screen order (y down), starting west.
constexpr int kDx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr int kDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

int direction_of(PointI from, PointI to) {
  for (int d = 0; d < 8; ++d)
    if (from.x + kDx[d] == to.x && from.y + kDy[d] == to.y) return d;
  return -1;
}

// Moore-neighbor tracing from the component's topmost-leftmost pixel; stops
// when the start pixel is re-entered with the starting backtrack (Jacob's
// criterion), so 8-shaped components are walked completely.
Contour trace_outer_border(const BinaryMask& mask, PointI start) {
  auto fg = [&](int x, int y) { return mask.in_bounds(x, y) && mask.at(x, y); };

  const PointI start_backtrack{start.x - 1, start.y};
  PointI cur = start;
  PointI backtrack = start_backtrack;
  Contour contour{start};

  const std::size_t guard =
      8 * (static_cast<std::size_t>(mask.width()) * mask.height() + 8);
  for (std::size_t step = 0; step < guard; ++step) {
    const int dir = direction_of(cur, backtrack);
    PointI next{};
    PointI last_bg = backtrack;
    bool found = false;
    for (int k = 1; k <= 8; ++k) {
      const int d = (dir + k) & 7;
      const PointI n{cur.x + kDx[d], cur.y + kDy[d]};
      if (fg(n.x, n.y)) {
        next = n;
        found = true;
        break;
      }
      last_bg = n;
    }
    if (!found) break;  // isolated pixel
    if (next == start && last_bg == start_backtrack) break;
    contour.push_back(next);
    backtrack = last_bg;
    cur = next;
  }

  // Degenerate 1- and 2-pixel traces are padded cyclically so every contour
  // closes with at least 3 vertices.
  while (contour.size() < 3) contour.push_back(contour[0]);
  return contour;
}

struct Component {
  PointI seed;        // topmost-leftmost pixel
  std::size_t count;  // pixel count
  int y_min;
  int x_min;
};

}  // namespace

std::vector<Contour> extract_contours(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, 0);
  std::vector<Component> components;
  std::vector<PointI> stack;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (!mask.at(x, y) || label[i]) continue;
      const int id = static_cast<int>(components.size()) + 1;
      // Row-major discovery: the seed is the topmost-leftmost pixel.
      Component comp{{x, y}, 0, y, x};
      label[i] = id;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const PointI p = stack.back();
        stack.pop_back();
        ++comp.count;
        for (int d = 0; d < 8; ++d) {
          const int nx = p.x + kDx[d];
          const int ny = p.y + kDy[d];
          if (!mask.in_bounds(nx, ny) || !mask.at(nx, ny)) continue;
          const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
          if (label[ni]) continue;
          label[ni] = id;
          stack.push_back({nx, ny});
        }
      }
      components.push_back(comp);
    }
  }

  // x_min above tracks the top row only; recover the component bbox x_min.
  std::vector<int> bbox_x_min(components.size(), w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int id = label[static_cast<std::size_t>(y) * w + x];
      if (id) bbox_x_min[id - 1] = std::min(bbox_x_min[id - 1], x);
    }
  for (std::size_t c = 0; c < components.size(); ++c)
    components[c].x_min = bbox_x_min[c];

  std::vector<std::size_t> order(components.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ca = components[a];
    const auto& cb = components[b];
    if (ca.count != cb.count) return ca.count > cb.count;
    if (ca.y_min != cb.y_min) return ca.y_min < cb.y_min;
    return ca.x_min < cb.x_min;
  });

  std::vector<Contour> contours;
  contours.reserve(components.size());
  for (std::size_t idx : order)
    contours.push_back(trace_outer_border(mask, components[idx].seed));
  return contours;
}

PointF mass_center(const BinaryMask& mask) {
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask.at(x, y)) {
        sx += x;
        sy += y;
        ++n;
      }
  if (n == 0) throw std::invalid_argument("empty mask");
  return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

BinaryMask rasterize_polygon(std::span<const PointF> points, int width,
                             int height) {
  if (points.size() < 3)
    throw std::invalid_argument("polygon needs at least 3 points");
  BinaryMask out(width, height);

  double y_lo = points[0].y, y_hi = points[0].y;
  for (const auto& p : points) {
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  }
  const int y_begin = std::max(0, static_cast<int>(std::ceil(y_lo)));
  const int y_end = std::min(height - 1, static_cast<int>(std::floor(y_hi)));

  std::vector<double> crossings;
  for (int y = y_begin; y <= y_end; ++y) {
    crossings.clear();
    const double py = y;
    for (std::size_t i = 0, n = points.size(); i < n; ++i) {
      const PointF& a = points[i];
      const PointF& b = points[(i + 1) % n];
      if ((a.y > py) != (b.y > py))
        crossings.push_back(a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(crossings.begin(), crossings.end());
    // A pixel center is inside iff an odd number of crossings lies strictly
    // to its right, i.e. x in [c[2k], c[2k+1]).
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      const int x_from =
          std::max(0, static_cast<int>(std::ceil(crossings[k])));
      const int x_to = std::min(
          width - 1, static_cast<int>(std::ceil(crossings[k + 1])) - 1);
      for (int x = x_from; x <= x_to; ++x) out.set(x, y, true);
    }
  }
  return out;
}

BBox bbox_of(const BinaryMask& mask) {
  BBox box{mask.width(), mask.height(), -1, -1};
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask.at(x, y)) {
        box.x_min = std::min(box.x_min, x);
        box.y_min = std::min(box.y_min, y);
        box.x_max = std::max(box.x_max, x);
        box.y_max = std::max(box.y_max, y);
      }
  if (box.x_max < 0) throw std::invalid_argument("empty mask");
  return box;
}

}  // namespace raymask
