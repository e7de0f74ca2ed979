#pragma once

#include <span>
#include <string>
#include <vector>

#include "raymask/mask.hpp"

namespace raymask {

// Rays with no contour support carry this value; such rays mark negative
// samples and are filtered before NMS.
inline constexpr double kSentinelDistance = 1e-6;

// Center plus N equiangular ray lengths. Ray i (1-based) points along
// theta_i = i * (360/N) degrees, measured by atan2(dy, dx) in the image
// frame (y down), mapped to (0, 360].
struct PolarMask {
  PointF center;
  int ray_count = 0;
  std::vector<double> distances;
};

struct MergeConfig {
  double mu = 0.5;
};

struct CenterSampleConfig {
  double stride = 1.5;
  int grid = 3;  // 3 -> 9 candidates, 4 -> 16
};

// Diagonal of the joint axis-aligned bounding box of all contour points.
double contour_diameter(std::span<const Contour> contours);

// Greedy contour merging: start from the biggest contour, repeatedly absorb
// any contour whose midpoint lies within mu * (W(R) + W([c])) of the running
// midpoint, until a full pass adds nothing. Candidates are scanned in input
// order; the running midpoint moves to the halfway point after each absorb.
std::vector<Contour> merge_contours(std::vector<Contour> contours,
                                    const MergeConfig& cfg);

// Distance-label generation: extracts and merges contours, then for each
// target angle takes the farthest contour point whose quantized angle matches;
// failing that, the farthest point within +-(180/N) degrees; failing that, the
// sentinel distance.
PolarMask encode(const BinaryMask& mask, PointF center, int ray_count,
                 const MergeConfig& cfg = {});

// Assembles vertices x_i = cos(theta_i) * d_i + x_c (same for y with sin) and
// rasterizes the resulting polygon. Sentinel rays collapse to the center.
BinaryMask decode(const PolarMask& polar, int width, int height);

struct CenterCandidate {
  PointF position;
  bool positive = false;
};

// grid x grid lattice spaced `cell` pixels apart, centered on the mass
// center; a candidate is positive iff its Chebyshev distance to the mass
// center is at most stride * cell.
std::vector<CenterCandidate> sample_center_candidates(
    const BinaryMask& mask, const CenterSampleConfig& cfg, double cell);

// One-line JSON form: {"center":[x,y],"n":N,"d":[...]}. Distances round-trip
// exactly.
std::string to_jsonl(const PolarMask& polar);
PolarMask from_jsonl(const std::string& line);

}  // namespace raymask
