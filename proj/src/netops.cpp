#include "raymask/netops.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "raymask/io.hpp"

namespace raymask {

namespace {

void check_dims(int height, int width, int channels) {
  if (height <= 0 || width <= 0 || channels <= 0)
    throw std::invalid_argument("feature map dimensions must be positive");
}

void check_correlatable(const FeatureMap& search, const FeatureMap& tmpl) {
  if (tmpl.channels() != search.channels())
    throw std::invalid_argument("channel counts differ");
  if (tmpl.height() > search.height() || tmpl.width() > search.width())
    throw std::invalid_argument("template larger than search");
}

double lerp(double a, double b, double t) { return a + t * (b - a); }

}  // namespace

FeatureMap::FeatureMap(int height, int width, int channels)
    : height_(height),
      width_(width),
      channels_(channels),
      data_(static_cast<std::size_t>(height) * width * channels, 0.0) {
  check_dims(height, width, channels);
}

FeatureMap::FeatureMap(int height, int width, int channels,
                       std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  check_dims(height, width, channels);
  if (data_.size() != static_cast<std::size_t>(height) * width * channels)
    throw std::invalid_argument("feature map data size mismatch");
}

FeatureMap cross_correlate(const FeatureMap& search, const FeatureMap& tmpl) {
  check_correlatable(search, tmpl);
  const int oh = search.height() - tmpl.height() + 1;
  const int ow = search.width() - tmpl.width() + 1;
  FeatureMap out(oh, ow, 1);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int ty = 0; ty < tmpl.height(); ++ty)
        for (int tx = 0; tx < tmpl.width(); ++tx)
          for (int c = 0; c < tmpl.channels(); ++c)
            acc += search.at(y + ty, x + tx, c) * tmpl.at(ty, tx, c);
      out.at(y, x, 0) = acc;
    }
  return out;
}

FeatureMap depthwise_cross_correlate(const FeatureMap& search,
                                     const FeatureMap& tmpl) {
  check_correlatable(search, tmpl);
  const int oh = search.height() - tmpl.height() + 1;
  const int ow = search.width() - tmpl.width() + 1;
  FeatureMap out(oh, ow, search.channels());
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x)
      for (int c = 0; c < search.channels(); ++c) {
        double acc = 0.0;
        for (int ty = 0; ty < tmpl.height(); ++ty)
          for (int tx = 0; tx < tmpl.width(); ++tx)
            acc += search.at(y + ty, x + tx, c) * tmpl.at(ty, tx, c);
        out.at(y, x, c) = acc;
      }
  return out;
}

FeatureMap repeated_cross_correlate(const FeatureMap& search,
                                    const FeatureMap& tmpl,
                                    const FusionWeights& w) {
  const FeatureMap similarity = cross_correlate(search, tmpl);
  const int oh = similarity.height();
  const int ow = similarity.width();
  const int oy = (search.height() - oh) / 2;
  const int ox = (search.width() - ow) / 2;

  FeatureMap out(oh, ow, search.channels());
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      const double s = similarity.at(y, x, 0);
      for (int c = 0; c < search.channels(); ++c)
        out.at(y, x, c) = w.alpha * s + w.beta * search.at(y + oy, x + ox, c);
    }
  return out;
}

FeatureMap semi_fpn_fuse(const FeatureMap& upper, const FeatureMap& lateral,
                         const FusionWeights& w) {
  if (upper.channels() != lateral.channels())
    throw std::invalid_argument("channel counts differ");
  if (upper.height() > lateral.height() || upper.width() > lateral.width())
    throw std::invalid_argument("upper exceeds lateral spatially");

  const int oh = lateral.height();
  const int ow = lateral.width();
  const double sy = static_cast<double>(upper.height()) / oh;
  const double sx = static_cast<double>(upper.width()) / ow;

  FeatureMap out(oh, ow, lateral.channels());
  for (int y = 0; y < oh; ++y) {
    const double src_y = (y + 0.5) * sy - 0.5;
    const int y0 = static_cast<int>(std::floor(src_y));
    const double fy = src_y - y0;
    const int y0c = std::clamp(y0, 0, upper.height() - 1);
    const int y1c = std::clamp(y0 + 1, 0, upper.height() - 1);
    for (int x = 0; x < ow; ++x) {
      const double src_x = (x + 0.5) * sx - 0.5;
      const int x0 = static_cast<int>(std::floor(src_x));
      const double fx = src_x - x0;
      const int x0c = std::clamp(x0, 0, upper.width() - 1);
      const int x1c = std::clamp(x0 + 1, 0, upper.width() - 1);
      for (int c = 0; c < lateral.channels(); ++c) {
        const double top =
            lerp(upper.at(y0c, x0c, c), upper.at(y0c, x1c, c), fx);
        const double bottom =
            lerp(upper.at(y1c, x0c, c), upper.at(y1c, x1c, c), fx);
        const double up = lerp(top, bottom, fy);
        out.at(y, x, c) = w.alpha * up + w.beta * lateral.at(y, x, c);
      }
    }
  }
  return out;
}

FeatureMap load_feature_map_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open tensor file: " + path.string());
  int h = 0, w = 0, c = 0;
  if (!(in >> h >> w >> c))
    throw io_error("malformed tensor header in " + path.string());
  if (h <= 0 || w <= 0 || c <= 0)
    throw io_error("non-positive tensor dimensions in " + path.string());
  std::vector<double> data(static_cast<std::size_t>(h) * w * c);
  for (auto& v : data) {
    if (!(in >> v)) throw io_error("truncated tensor data in " + path.string());
    if (!std::isfinite(v))
      throw io_error("non-finite tensor value in " + path.string());
  }
  return FeatureMap(h, w, c, std::move(data));
}

void save_feature_map_text(const FeatureMap& map,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write tensor file: " + path.string());
  out << map.height() << ' ' << map.width() << ' ' << map.channels() << '\n';
  out.precision(17);
  const auto& data = map.data();
  for (std::size_t i = 0; i < data.size(); ++i)
    out << data[i] << ((i + 1) % map.channels() == 0 ? '\n' : ' ');
  if (!out) throw io_error("failed writing tensor file: " + path.string());
}

}  // namespace raymask
