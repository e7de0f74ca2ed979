#include <cmath>
#include <filesystem>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "raymask/netops.hpp"
#include "support.hpp"

using namespace raymask;
namespace ts = testsupport;

TEST_SUITE_BEGIN("netops");

TEST_CASE("cross_correlate: unit 1x1 template is the channel sum identity") {
  FeatureMap t(1, 1, 1, {1.0});
  std::mt19937 rng(107);
  const auto s = ts::random_feature_map(rng, 4, 5, 1);
  const auto out = cross_correlate(s, t);
  REQUIRE(out.height() == 4);
  REQUIRE(out.width() == 5);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 5; ++x) CHECK(out.at(y, x, 0) == s.at(y, x, 0));
}

TEST_CASE("cross_correlate: 3x3 by all-ones 2x2 hand example") {
  FeatureMap s(3, 3, 1, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  FeatureMap t(2, 2, 1, {1, 1, 1, 1});
  const auto out = cross_correlate(s, t);
  REQUIRE(out.height() == 2);
  REQUIRE(out.width() == 2);
  CHECK(out.at(0, 0, 0) == 12.0);
  CHECK(out.at(0, 1, 0) == 16.0);
  CHECK(out.at(1, 0, 0) == 24.0);
  CHECK(out.at(1, 1, 0) == 28.0);
}

TEST_CASE("cross_correlate matches the quadruple-loop oracle") {
  std::mt19937 rng(109);
  for (int trial = 0; trial < 10; ++trial) {
    const bool integers = trial % 2 == 0;
    const auto s = ts::random_feature_map(rng, 6, 7, 3, integers);
    const auto t = ts::random_feature_map(rng, 3, 2, 3, integers);
    const auto out = cross_correlate(s, t);
    for (int y = 0; y < out.height(); ++y)
      for (int x = 0; x < out.width(); ++x) {
        const double expected = ts::corr_at(s, t, y, x);
        if (integers)
          CHECK(out.at(y, x, 0) == expected);
        else
          CHECK(out.at(y, x, 0) ==
                doctest::Approx(expected).epsilon(1e-12));
      }
  }
}

TEST_CASE("cross_correlate rejects oversized templates and channel mismatch") {
  FeatureMap s(3, 3, 2);
  CHECK_THROWS_AS(cross_correlate(s, FeatureMap(4, 2, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(cross_correlate(s, FeatureMap(2, 2, 3)),
                  std::invalid_argument);
}

TEST_CASE("cross_correlate is linear in the search argument") {
  std::mt19937 rng(113);
  const auto s1 = ts::random_feature_map(rng, 5, 5, 2);
  const auto s2 = ts::random_feature_map(rng, 5, 5, 2);
  const auto t = ts::random_feature_map(rng, 2, 3, 2);
  const double a = 1.7, b = -0.6;

  std::vector<double> combo(s1.data().size());
  for (std::size_t i = 0; i < combo.size(); ++i)
    combo[i] = a * s1.data()[i] + b * s2.data()[i];
  const auto lhs = cross_correlate(FeatureMap(5, 5, 2, std::move(combo)), t);
  const auto r1 = cross_correlate(s1, t);
  const auto r2 = cross_correlate(s2, t);
  for (int y = 0; y < lhs.height(); ++y)
    for (int x = 0; x < lhs.width(); ++x)
      CHECK(lhs.at(y, x, 0) ==
            doctest::Approx(a * r1.at(y, x, 0) + b * r2.at(y, x, 0))
                .epsilon(1e-9));
}

TEST_CASE("depthwise: single channel degenerates to full correlation") {
  std::mt19937 rng(127);
  const auto s = ts::random_feature_map(rng, 5, 6, 1);
  const auto t = ts::random_feature_map(rng, 2, 2, 1);
  const auto dw = depthwise_cross_correlate(s, t);
  const auto full = cross_correlate(s, t);
  for (int y = 0; y < dw.height(); ++y)
    for (int x = 0; x < dw.width(); ++x)
      CHECK(dw.at(y, x, 0) == full.at(y, x, 0));
}

TEST_CASE("depthwise: each channel matches its per-channel oracle") {
  std::mt19937 rng(131);
  const auto s = ts::random_feature_map(rng, 6, 6, 3, true);
  const auto t = ts::random_feature_map(rng, 3, 3, 3, true);
  const auto dw = depthwise_cross_correlate(s, t);
  REQUIRE(dw.channels() == 3);
  for (int y = 0; y < dw.height(); ++y)
    for (int x = 0; x < dw.width(); ++x)
      for (int c = 0; c < 3; ++c)
        CHECK(dw.at(y, x, c) == ts::corr_at_channel(s, t, y, x, c));
}

TEST_CASE("depthwise: zero template gives zero output") {
  std::mt19937 rng(137);
  const auto s = ts::random_feature_map(rng, 4, 4, 2);
  const FeatureMap t(2, 2, 2);
  const auto out = depthwise_cross_correlate(s, t);
  for (double v : out.data()) CHECK(v == 0.0);
}

TEST_CASE("depthwise channel sum equals the full correlation") {
  std::mt19937 rng(139);
  const auto s_int = ts::random_feature_map(rng, 6, 5, 4, true);
  const auto t_int = ts::random_feature_map(rng, 2, 3, 4, true);
  const auto dw = depthwise_cross_correlate(s_int, t_int);
  const auto full = cross_correlate(s_int, t_int);
  for (int y = 0; y < dw.height(); ++y)
    for (int x = 0; x < dw.width(); ++x) {
      double sum = 0.0;
      for (int c = 0; c < dw.channels(); ++c) sum += dw.at(y, x, c);
      CHECK(sum == full.at(y, x, 0));  // exact on integer data
    }

  const auto s_real = ts::random_feature_map(rng, 6, 5, 4);
  const auto t_real = ts::random_feature_map(rng, 2, 3, 4);
  const auto dwr = depthwise_cross_correlate(s_real, t_real);
  const auto fullr = cross_correlate(s_real, t_real);
  for (int y = 0; y < dwr.height(); ++y)
    for (int x = 0; x < dwr.width(); ++x) {
      double sum = 0.0;
      for (int c = 0; c < dwr.channels(); ++c) sum += dwr.at(y, x, c);
      CHECK(sum == doctest::Approx(fullr.at(y, x, 0)).epsilon(1e-12));
    }
}

TEST_CASE("repeated: beta-only output is the center-cropped search") {
  std::mt19937 rng(149);
  const auto s = ts::random_feature_map(rng, 6, 7, 3);
  const auto t = ts::random_feature_map(rng, 3, 2, 3);
  const auto out = repeated_cross_correlate(s, t, {0.0, 1.0});
  const int oy = (s.height() - out.height()) / 2;
  const int ox = (s.width() - out.width()) / 2;
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      for (int c = 0; c < 3; ++c)
        CHECK(out.at(y, x, c) == s.at(y + oy, x + ox, c));
}

TEST_CASE("repeated: alpha-only channels replicate the similarity bitwise") {
  std::mt19937 rng(151);
  const auto s = ts::random_feature_map(rng, 7, 6, 4);
  const auto t = ts::random_feature_map(rng, 2, 2, 4);
  const auto out = repeated_cross_correlate(s, t, {1.0, 0.0});
  const auto sim = cross_correlate(s, t);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      for (int c = 0; c < 4; ++c)
        CHECK(out.at(y, x, c) == sim.at(y, x, 0));  // bit-for-bit
}

TEST_CASE("repeated: general weights match the composed oracle") {
  std::mt19937 rng(157);
  const auto s = ts::random_feature_map(rng, 5, 5, 2);
  const auto t = ts::random_feature_map(rng, 2, 2, 2);
  const FusionWeights w{0.7, -1.3};
  const auto out = repeated_cross_correlate(s, t, w);
  const int oy = (s.height() - out.height()) / 2;
  const int ox = (s.width() - out.width()) / 2;
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      for (int c = 0; c < 2; ++c)
        CHECK(out.at(y, x, c) ==
              doctest::Approx(w.alpha * ts::corr_at(s, t, y, x) +
                              w.beta * s.at(y + oy, x + ox, c))
                  .epsilon(1e-12));
}

TEST_CASE("semi_fpn_fuse: equal sizes with unit weights is elementwise sum") {
  std::mt19937 rng(163);
  const auto upper = ts::random_feature_map(rng, 4, 5, 2);
  const auto lateral = ts::random_feature_map(rng, 4, 5, 2);
  const auto out = semi_fpn_fuse(upper, lateral, {1.0, 1.0});
  for (std::size_t i = 0; i < out.data().size(); ++i)
    CHECK(out.data()[i] == upper.data()[i] + lateral.data()[i]);
}

TEST_CASE("semi_fpn_fuse: bilinear upsampling preserves constants exactly") {
  std::mt19937 rng(167);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double c = val(rng);
    FeatureMap upper(3, 2, 2,
                     std::vector<double>(3 * 2 * 2, c));
    const FeatureMap lateral(7, 9, 2);
    const auto out = semi_fpn_fuse(upper, lateral, {1.0, 0.0});
    for (double v : out.data()) CHECK(v == c);  // exact
  }
}

TEST_CASE("semi_fpn_fuse: frozen 2x2 -> 4x4 half-pixel bilinear values") {
  FeatureMap upper(2, 2, 1, {0.0, 1.0, 1.0, 0.0});
  const FeatureMap lateral(4, 4, 1);
  const auto out = semi_fpn_fuse(upper, lateral, {1.0, 0.0});
  const double expected[4][4] = {{0.0, 0.25, 0.75, 1.0},
                                 {0.25, 0.375, 0.625, 0.75},
                                 {0.75, 0.625, 0.375, 0.25},
                                 {1.0, 0.75, 0.25, 0.0}};
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x)
      CHECK(out.at(y, x, 0) == doctest::Approx(expected[y][x]).epsilon(1e-12));
}

TEST_CASE("semi_fpn_fuse is linear in both inputs") {
  std::mt19937 rng(173);
  const auto u1 = ts::random_feature_map(rng, 2, 3, 2);
  const auto u2 = ts::random_feature_map(rng, 2, 3, 2);
  const auto lat = ts::random_feature_map(rng, 5, 6, 2);
  const double a = 0.4, b = 2.1;

  std::vector<double> combo(u1.data().size());
  for (std::size_t i = 0; i < combo.size(); ++i)
    combo[i] = a * u1.data()[i] + b * u2.data()[i];
  const auto fused =
      semi_fpn_fuse(FeatureMap(2, 3, 2, std::move(combo)), lat, {1.0, 0.0});
  const auto f1 = semi_fpn_fuse(u1, lat, {1.0, 0.0});
  const auto f2 = semi_fpn_fuse(u2, lat, {1.0, 0.0});
  for (std::size_t i = 0; i < fused.data().size(); ++i)
    CHECK(fused.data()[i] ==
          doctest::Approx(a * f1.data()[i] + b * f2.data()[i]).epsilon(1e-9));
}

TEST_CASE("semi_fpn_fuse validates shapes") {
  CHECK_THROWS_AS(semi_fpn_fuse(FeatureMap(4, 4, 2), FeatureMap(4, 4, 3),
                                {1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(semi_fpn_fuse(FeatureMap(6, 4, 2), FeatureMap(4, 4, 2),
                                {1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("feature map text format round trip") {
  std::mt19937 rng(179);
  const auto fm = ts::random_feature_map(rng, 3, 4, 2);
  const auto path =
      std::filesystem::temp_directory_path() / "raymask_tensor_test.txt";
  save_feature_map_text(fm, path);
  const auto back = load_feature_map_text(path);
  CHECK(back.height() == 3);
  CHECK(back.width() == 4);
  CHECK(back.channels() == 2);
  for (std::size_t i = 0; i < fm.data().size(); ++i)
    CHECK(back.data()[i] == fm.data()[i]);
  std::filesystem::remove(path);
}

TEST_SUITE_END();
