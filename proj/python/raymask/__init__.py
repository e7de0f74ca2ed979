"""Polar (center + rays) mask representation for video object segmentation.

Numpy-facing bindings over the C++ core: polar encode/decode with contour
merging, the loss and centerness family, polar-mask NMS, VOS metrics
(J / F / APE with mean, recall and decay) and the parameter-free neck
operators (cross-correlation variants and semi-FPN fusion).
"""

from ._raymask import (
    SENTINEL_DISTANCE,
    AggregateStats,
    PolarMask,
    ScoredMask,
    __version__,
    aggregate,
    ape,
    assign_fpn_level,
    bbox_of,
    contour_diameter,
    contour_f,
    cross_correlate,
    decode,
    default_scale_ranges,
    depthwise_cross_correlate,
    encode,
    extract_contours,
    focal_loss,
    jaccard,
    mass_center,
    merge_contours,
    nms,
    polar_centerness_improved,
    polar_centerness_original,
    polar_iou,
    polar_iou_loss,
    rasterize_polygon,
    repeated_cross_correlate,
    sample_center_candidates,
    semi_fpn_fuse,
    smooth_l1_bbox,
    standard_focal_loss,
    total_loss,
)

__all__ = [
    "SENTINEL_DISTANCE",
    "AggregateStats",
    "PolarMask",
    "ScoredMask",
    "__version__",
    "aggregate",
    "ape",
    "assign_fpn_level",
    "bbox_of",
    "contour_diameter",
    "contour_f",
    "cross_correlate",
    "decode",
    "default_scale_ranges",
    "depthwise_cross_correlate",
    "encode",
    "extract_contours",
    "focal_loss",
    "jaccard",
    "mass_center",
    "merge_contours",
    "nms",
    "polar_centerness_improved",
    "polar_centerness_original",
    "polar_iou",
    "polar_iou_loss",
    "rasterize_polygon",
    "repeated_cross_correlate",
    "sample_center_candidates",
    "semi_fpn_fuse",
    "smooth_l1_bbox",
    "standard_focal_loss",
    "total_loss",
]
