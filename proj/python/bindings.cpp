#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "raymask/mask.hpp"
#include "raymask/metrics.hpp"
#include "raymask/netops.hpp"
#include "raymask/polar.hpp"
#include "raymask/scoring.hpp"

namespace py = pybind11;
using namespace raymask;

namespace {

using MaskArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using FloatArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

BinaryMask mask_from_array(const MaskArray& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("mask must be a 2-D array");
  const int h = static_cast<int>(arr.shape(0));
  const int w = static_cast<int>(arr.shape(1));
  std::vector<std::uint8_t> bits(arr.data(),
                                 arr.data() + static_cast<std::size_t>(h) * w);
  return BinaryMask(w, h, std::move(bits));
}

py::array_t<bool> mask_to_array(const BinaryMask& mask) {
  py::array_t<bool> out({mask.height(), mask.width()});
  auto view = out.mutable_unchecked<2>();
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) view(y, x) = mask.at(x, y);
  return out;
}

Contour contour_from_array(const IntArray& arr) {
  if (arr.ndim() != 2 || arr.shape(1) != 2)
    throw std::invalid_argument("contour must be an (N, 2) array of x, y");
  Contour c(static_cast<std::size_t>(arr.shape(0)));
  auto view = arr.unchecked<2>();
  for (py::ssize_t i = 0; i < arr.shape(0); ++i)
    c[i] = {view(i, 0), view(i, 1)};
  return c;
}

py::array_t<int> contour_to_array(const Contour& c) {
  py::array_t<int> out({static_cast<py::ssize_t>(c.size()), py::ssize_t{2}});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < c.size(); ++i) {
    view(i, 0) = c[i].x;
    view(i, 1) = c[i].y;
  }
  return out;
}

std::vector<Contour> contours_from_list(const std::vector<IntArray>& arrays) {
  std::vector<Contour> out;
  out.reserve(arrays.size());
  for (const auto& a : arrays) out.push_back(contour_from_array(a));
  return out;
}

std::vector<double> rays_from_array(const FloatArray& arr) {
  if (arr.ndim() != 1) throw std::invalid_argument("ray set must be 1-D");
  return {arr.data(), arr.data() + arr.shape(0)};
}

py::array_t<double> doubles_to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
  return out;
}

FeatureMap fmap_from_array(const FloatArray& arr) {
  if (arr.ndim() != 3)
    throw std::invalid_argument("feature map must be (height, width, channels)");
  const int h = static_cast<int>(arr.shape(0));
  const int w = static_cast<int>(arr.shape(1));
  const int c = static_cast<int>(arr.shape(2));
  std::vector<double> data(arr.data(),
                           arr.data() + static_cast<std::size_t>(h) * w * c);
  return FeatureMap(h, w, c, std::move(data));
}

py::array_t<double> fmap_to_array(const FeatureMap& f) {
  py::array_t<double> out({f.height(), f.width(), f.channels()});
  std::memcpy(out.mutable_data(), f.data().data(),
              f.data().size() * sizeof(double));
  return out;
}

PointF point_from_pair(std::pair<double, double> p) { return {p.first, p.second}; }

}  // namespace

PYBIND11_MODULE(_raymask, m) {
  m.doc() = "Polar (center + rays) mask representation for video object "
            "segmentation: encode/decode, losses, metrics and neck operators";
  m.attr("__version__") = "0.1.0";
  m.attr("SENTINEL_DISTANCE") = kSentinelDistance;

  py::class_<PolarMask>(m, "PolarMask",
                        "Center plus N equiangular ray lengths; ray i points "
                        "along i * (360 / N) degrees, y axis down")
      .def(py::init([](std::pair<double, double> center, const FloatArray& d) {
             PolarMask p;
             p.center = point_from_pair(center);
             p.distances = rays_from_array(d);
             p.ray_count = static_cast<int>(p.distances.size());
             return p;
           }),
           py::arg("center"), py::arg("distances"))
      .def_property_readonly("center",
                             [](const PolarMask& p) {
                               return py::make_tuple(p.center.x, p.center.y);
                             })
      .def_property_readonly("ray_count",
                             [](const PolarMask& p) { return p.ray_count; })
      .def_property_readonly(
          "distances",
          [](const PolarMask& p) { return doubles_to_array(p.distances); })
      .def("to_json", [](const PolarMask& p) { return to_jsonl(p); })
      .def_static("from_json", [](const std::string& s) { return from_jsonl(s); },
                  py::arg("line"))
      .def("__repr__", [](const PolarMask& p) {
        return "PolarMask(center=(" + std::to_string(p.center.x) + ", " +
               std::to_string(p.center.y) +
               "), rays=" + std::to_string(p.ray_count) + ")";
      });

  py::class_<ScoredMask>(m, "ScoredMask")
      .def(py::init([](const PolarMask& polar, double cls_prob,
                       double centerness, int fpn_level) {
             return ScoredMask{polar, cls_prob, centerness, fpn_level};
           }),
           py::arg("polar"), py::arg("cls_prob"), py::arg("centerness") = 1.0,
           py::arg("fpn_level") = 0)
      .def_readonly("polar", &ScoredMask::polar)
      .def_readonly("cls_prob", &ScoredMask::cls_prob)
      .def_readonly("centerness", &ScoredMask::centerness)
      .def_readonly("fpn_level", &ScoredMask::fpn_level)
      .def_property_readonly("score", &ScoredMask::score);

  py::class_<AggregateStats>(m, "AggregateStats")
      .def_readonly("mean", &AggregateStats::mean)
      .def_readonly("recall", &AggregateStats::recall)
      .def_readonly("decay", &AggregateStats::decay)
      .def("__repr__", [](const AggregateStats& s) {
        return "AggregateStats(mean=" + std::to_string(s.mean) +
               ", recall=" + std::to_string(s.recall) +
               ", decay=" + std::to_string(s.decay) + ")";
      });

  // mask primitives
  m.def(
      "extract_contours",
      [](const MaskArray& mask) {
        const auto contours = extract_contours(mask_from_array(mask));
        std::vector<py::array_t<int>> out;
        out.reserve(contours.size());
        for (const auto& c : contours) out.push_back(contour_to_array(c));
        return out;
      },
      py::arg("mask"),
      "Outer border of every 8-connected component, largest first");
  m.def(
      "mass_center",
      [](const MaskArray& mask) {
        const auto c = mass_center(mask_from_array(mask));
        return py::make_tuple(c.x, c.y);
      },
      py::arg("mask"));
  m.def(
      "rasterize_polygon",
      [](const FloatArray& points, int width, int height) {
        if (points.ndim() != 2 || points.shape(1) != 2)
          throw std::invalid_argument("points must be an (N, 2) array");
        std::vector<PointF> pts(static_cast<std::size_t>(points.shape(0)));
        auto view = points.unchecked<2>();
        for (py::ssize_t i = 0; i < points.shape(0); ++i)
          pts[i] = {view(i, 0), view(i, 1)};
        return mask_to_array(rasterize_polygon(pts, width, height));
      },
      py::arg("points"), py::arg("width"), py::arg("height"));
  m.def(
      "bbox_of",
      [](const MaskArray& mask) {
        const auto b = bbox_of(mask_from_array(mask));
        return py::make_tuple(b.x_min, b.y_min, b.x_max, b.y_max);
      },
      py::arg("mask"));

  // polar codec
  m.def(
      "contour_diameter",
      [](const std::vector<IntArray>& contours) {
        return contour_diameter(contours_from_list(contours));
      },
      py::arg("contours"));
  m.def(
      "merge_contours",
      [](const std::vector<IntArray>& contours, double mu) {
        const auto merged =
            merge_contours(contours_from_list(contours), MergeConfig{mu});
        std::vector<py::array_t<int>> out;
        out.reserve(merged.size());
        for (const auto& c : merged) out.push_back(contour_to_array(c));
        return out;
      },
      py::arg("contours"), py::arg("mu") = 0.5);
  m.def(
      "encode",
      [](const MaskArray& mask, std::pair<double, double> center, int rays,
         double mu) {
        return encode(mask_from_array(mask), point_from_pair(center), rays,
                      MergeConfig{mu});
      },
      py::arg("mask"), py::arg("center"), py::arg("rays") = 36,
      py::arg("mu") = 0.5);
  m.def(
      "decode",
      [](const PolarMask& polar, int width, int height) {
        return mask_to_array(decode(polar, width, height));
      },
      py::arg("polar"), py::arg("width"), py::arg("height"));
  m.def(
      "sample_center_candidates",
      [](const MaskArray& mask, double stride, int grid, double cell) {
        const auto candidates = sample_center_candidates(
            mask_from_array(mask), CenterSampleConfig{stride, grid}, cell);
        py::list out;
        for (const auto& c : candidates)
          out.append(py::make_tuple(
              py::make_tuple(c.position.x, c.position.y), c.positive));
        return out;
      },
      py::arg("mask"), py::arg("stride") = 1.5, py::arg("grid") = 3,
      py::arg("cell") = 8.0);

  // scoring
  m.def("focal_loss", &focal_loss, py::arg("p_pred"), py::arg("p_gt"),
        py::arg("gamma") = 2.0);
  m.def("standard_focal_loss", &standard_focal_loss, py::arg("p_pred"),
        py::arg("positive"), py::arg("gamma") = 2.0);
  m.def(
      "smooth_l1_bbox",
      [](double t, double b, double l, double r) {
        return smooth_l1_bbox({t, b, l, r});
      },
      py::arg("t"), py::arg("b"), py::arg("l"), py::arg("r"));
  m.def(
      "polar_centerness_original",
      [](const FloatArray& d) {
        return polar_centerness_original(rays_from_array(d));
      },
      py::arg("distances"));
  m.def(
      "polar_centerness_improved",
      [](const FloatArray& d) {
        return polar_centerness_improved(rays_from_array(d));
      },
      py::arg("distances"));
  m.def(
      "polar_iou",
      [](const FloatArray& d, const FloatArray& e, bool squared) {
        return polar_iou(rays_from_array(d), rays_from_array(e), squared);
      },
      py::arg("d"), py::arg("e"), py::arg("squared") = false);
  m.def(
      "polar_iou_loss",
      [](const FloatArray& target, const FloatArray& predicted) {
        const auto r =
            polar_iou_loss(rays_from_array(target), rays_from_array(predicted));
        return py::make_tuple(r.loss, doubles_to_array(r.grad));
      },
      py::arg("target"), py::arg("predicted"),
      "Returns (loss, gradient w.r.t. the prediction)");
  m.def("total_loss", &total_loss, py::arg("cls"), py::arg("centerness"),
        py::arg("bbox"), py::arg("mask"));
  m.def("default_scale_ranges", &default_scale_ranges);
  m.def(
      "assign_fpn_level",
      [](const PolarMask& polar,
         std::optional<std::vector<std::pair<double, double>>> ranges) {
        if (ranges) return assign_fpn_level(polar, *ranges);
        return assign_fpn_level(polar);
      },
      py::arg("polar"), py::arg("ranges") = py::none());
  m.def("nms", &nms, py::arg("candidates"), py::arg("iou_threshold") = 0.5);

  // metrics
  m.def(
      "jaccard",
      [](const MaskArray& a, const MaskArray& b) {
        return jaccard(mask_from_array(a), mask_from_array(b));
      },
      py::arg("m"), py::arg("g"));
  m.def(
      "contour_f",
      [](const MaskArray& a, const MaskArray& b, double tol) {
        return contour_f(mask_from_array(a), mask_from_array(b), tol);
      },
      py::arg("m"), py::arg("g"), py::arg("tol") = 1.0);
  m.def(
      "ape",
      [](const std::vector<MaskArray>& ms, const std::vector<MaskArray>& gs,
         bool symmetric) {
        std::vector<BinaryMask> a, b;
        a.reserve(ms.size());
        b.reserve(gs.size());
        for (const auto& x : ms) a.push_back(mask_from_array(x));
        for (const auto& x : gs) b.push_back(mask_from_array(x));
        return ape(a, b, symmetric ? ApeMode::symmetric : ApeMode::one_sided);
      },
      py::arg("ms"), py::arg("gs"), py::arg("symmetric") = false);
  m.def(
      "aggregate",
      [](const FloatArray& values) { return aggregate(rays_from_array(values)); },
      py::arg("values"),
      "Mean, recall (> 0.5) and first-minus-last quartile decay of a "
      "temporally ordered series");

  // neck operators
  m.def(
      "cross_correlate",
      [](const FloatArray& search, const FloatArray& tmpl) {
        return fmap_to_array(
            cross_correlate(fmap_from_array(search), fmap_from_array(tmpl)));
      },
      py::arg("search"), py::arg("template"));
  m.def(
      "depthwise_cross_correlate",
      [](const FloatArray& search, const FloatArray& tmpl) {
        return fmap_to_array(depthwise_cross_correlate(
            fmap_from_array(search), fmap_from_array(tmpl)));
      },
      py::arg("search"), py::arg("template"));
  m.def(
      "repeated_cross_correlate",
      [](const FloatArray& search, const FloatArray& tmpl, double alpha,
         double beta) {
        return fmap_to_array(repeated_cross_correlate(
            fmap_from_array(search), fmap_from_array(tmpl), {alpha, beta}));
      },
      py::arg("search"), py::arg("template"), py::arg("alpha") = 1.0,
      py::arg("beta") = 1.0);
  m.def(
      "semi_fpn_fuse",
      [](const FloatArray& upper, const FloatArray& lateral, double alpha,
         double beta) {
        return fmap_to_array(semi_fpn_fuse(fmap_from_array(upper),
                                           fmap_from_array(lateral),
                                           {alpha, beta}));
      },
      py::arg("upper"), py::arg("lateral"), py::arg("alpha") = 1.0,
      py::arg("beta") = 1.0);
}
