#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace raymask {

struct PointI {
  int x = 0;
  int y = 0;
  bool operator==(const PointI&) const = default;
};

struct PointF {
  double x = 0.0;
  double y = 0.0;
};

struct BBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;
  bool operator==(const BBox&) const = default;
};

// Row-major boolean raster. Pixel (x, y) lives at index y * width + x and its
// center sits at real coordinate (x, y); x grows rightward, y downward.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height);
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }
  bool at(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool value) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
  }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  bool operator==(const BinaryMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Closed polyline over pixel coordinates; the last vertex connects to the
// first implicitly.
using Contour = std::vector<PointI>;

// Outer border of every 8-connected foreground component, one closed contour
// per component, ordered by descending pixel count (ties: smaller y_min, then
// x_min). Hole borders are never emitted.
std::vector<Contour> extract_contours(const BinaryMask& mask);

// Arithmetic mean of the foreground pixel coordinates. Throws on empty masks.
PointF mass_center(const BinaryMask& mask);

// Even-odd scanline fill: a pixel is set iff its center (x, y) lies inside
// the polygon. Needs at least 3 vertices; zero-area polygons give an all
// false mask.
BinaryMask rasterize_polygon(std::span<const PointF> points, int width,
                             int height);

// Tight axis-aligned bounds of the foreground. Throws on empty masks.
BBox bbox_of(const BinaryMask& mask);

}  // namespace raymask
