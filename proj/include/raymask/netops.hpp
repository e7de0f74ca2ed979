#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace raymask {

// Dense height x width x channels tensor, row-major with channels innermost.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int height, int width, int channels);
  FeatureMap(int height, int width, int channels, std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  double at(int y, int x, int c) const { return data_[index(y, x, c)]; }
  double& at(int y, int x, int c) { return data_[index(y, x, c)]; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

struct FusionWeights {
  double alpha = 1.0;
  double beta = 1.0;
};

// Valid-mode sliding-window correlation summed over all channels; output is
// single channel, (H-h+1) x (W-w+1).
FeatureMap cross_correlate(const FeatureMap& search, const FeatureMap& tmpl);

// Per-channel valid correlation, preserving the channel count.
FeatureMap depthwise_cross_correlate(const FeatureMap& search,
                                     const FeatureMap& tmpl);

// Single-channel correlation replicated across channels and fused with the
// center-cropped search features: alpha * replicated + beta * crop. No
// learned weights are involved. (The up-channel correlation variant needs
// learned projection weights and is deliberately not provided here.)
FeatureMap repeated_cross_correlate(const FeatureMap& search,
                                    const FeatureMap& tmpl,
                                    const FusionWeights& w);

// Bilinear (half-pixel convention) upsample of `upper` to `lateral`'s spatial
// size, then alpha * upsampled + beta * lateral.
FeatureMap semi_fpn_fuse(const FeatureMap& upper, const FeatureMap& lateral,
                         const FusionWeights& w);

// Text tensor format: "height width channels" on the first line followed by
// whitespace-separated values in storage order.
FeatureMap load_feature_map_text(const std::filesystem::path& path);
void save_feature_map_text(const FeatureMap& map,
                           const std::filesystem::path& path);

}  // namespace raymask
