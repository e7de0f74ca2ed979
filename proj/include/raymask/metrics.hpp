#pragma once

#include <span>
#include <string>
#include <vector>

#include "raymask/mask.hpp"

namespace raymask {

// |M n G| / |M u G|; two empty masks score 1.
double jaccard(const BinaryMask& m, const BinaryMask& g);

// Boundary F-measure: precision = fraction of M boundary pixels within tol
// (Euclidean) of a G boundary pixel, recall symmetric, F their harmonic mean.
// Boundary pixels are foreground pixels with a 4-neighbor that is background
// or outside the raster.
double contour_f(const BinaryMask& m, const BinaryMask& g, double tol = 1.0);

enum class ApeMode {
  one_sided,  // |M \ G|, as published
  symmetric,  // |M xor G|, provided for comparison (not the published form)
};

// Average pixel error: mean over frames of the (one-sided) set difference
// count.
double ape(std::span<const BinaryMask> ms, std::span<const BinaryMask> gs,
           ApeMode mode = ApeMode::one_sided);

struct AggregateStats {
  double mean = 0.0;
  double recall = 0.0;  // fraction of frames above 0.5
  double decay = 0.0;   // first temporal quartile mean minus last
};

// Values must be in temporal order. The quartiles used for decay are the
// first and last ceil(n/4) frames.
AggregateStats aggregate(std::span<const double> values);

struct SequenceResult {
  std::string name;
  std::vector<double> per_frame_j;
  std::vector<double> per_frame_f;
  std::vector<double> per_frame_ape;
};

}  // namespace raymask
