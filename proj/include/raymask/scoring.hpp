#pragma once

#include <span>
#include <utility>
#include <vector>

#include "raymask/polar.hpp"

namespace raymask {

// -(1 - p_pred * p_gt)^gamma * ln(p_pred), taken as printed. Note this is not
// the standard two-branch focal loss; see standard_focal_loss for that.
double focal_loss(double p_pred, double p_gt, double gamma = 2.0);

// Conventional focal loss for comparison: -(1-p)^g ln(p) on positives,
// -p^g ln(1-p) on negatives.
double standard_focal_loss(double p_pred, bool positive, double gamma = 2.0);

// Signed offsets prediction minus target for the four box sides.
struct BBoxDeltas {
  double t = 0.0;
  double b = 0.0;
  double l = 0.0;
  double r = 0.0;
};

// Smooth-L1 summed over {t, b, l, r}: 0.5 d^2 inside |d| <= 1, |d| - 0.5
// outside.
double smooth_l1_bbox(const BBoxDeltas& deltas);

// sqrt(min/max) over the ray lengths.
double polar_centerness_original(std::span<const double> distances);

// sqrt(0.5 * (min/mean + mean/max)) over the ray lengths.
double polar_centerness_improved(std::span<const double> distances);

// Ray-wise IoU: sum(min(d_i, e_i)) / sum(max(d_i, e_i)); with squared = true
// the integrand keeps its d^2 form (sector-area ratio).
double polar_iou(std::span<const double> d, std::span<const double> e,
                 bool squared = false);

struct PolarIoULossResult {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d predicted_i
};

// loss = ln(sum max / sum min) = -ln(polar_iou); the gradient is taken with
// respect to the prediction, with ties assigned to the min branch.
PolarIoULossResult polar_iou_loss(std::span<const double> target,
                                  std::span<const double> predicted);

// L = L_cls * C_polar + L_bbox + L_mask, as printed.
double total_loss(double cls, double centerness, double bbox, double mask);

// The five (low, high] scale ranges used for pyramid level assignment.
std::vector<std::pair<double, double>> default_scale_ranges();

// Level whose (low, high] range contains 2 * max(distances); values beyond
// every range fall into the last level.
int assign_fpn_level(const PolarMask& polar,
                     std::span<const std::pair<double, double>> ranges);
int assign_fpn_level(const PolarMask& polar);

struct ScoredMask {
  PolarMask polar;
  double cls_prob = 0.0;
  double centerness = 1.0;
  int fpn_level = 0;
  double score() const { return cls_prob * centerness; }
};

// Greedy NMS on cls_prob * centerness. Masks whose rays are all sentinel are
// dropped up front. Overlap uses polar_iou when two masks share a center
// (within 1 px) and a ray count, pixel IoU of the decoded masks otherwise.
std::vector<ScoredMask> nms(std::vector<ScoredMask> candidates,
                            double iou_threshold = 0.5);

}  // namespace raymask
