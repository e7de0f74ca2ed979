#include <algorithm>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "raymask/metrics.hpp"
#include "support.hpp"

using namespace raymask;
namespace ts = testsupport;

namespace {

BinaryMask block(int size, int x0, int y0, int x1, int y1) {
  BinaryMask m(size, size);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) m.set(x, y, true);
  return m;
}

// 4-connected (cross structuring element) dilation by one pixel.
BinaryMask dilate_cross(const BinaryMask& m) {
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      out.set(x, y, true);
      if (m.in_bounds(x - 1, y)) out.set(x - 1, y, true);
      if (m.in_bounds(x + 1, y)) out.set(x + 1, y, true);
      if (m.in_bounds(x, y - 1)) out.set(x, y - 1, true);
      if (m.in_bounds(x, y + 1)) out.set(x, y + 1, true);
    }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("jaccard examples") {
  const auto a = block(8, 2, 2, 3, 3);
  CHECK(jaccard(a, a) == doctest::Approx(1.0));

  const auto disjoint = block(8, 5, 5, 6, 6);
  CHECK(jaccard(a, disjoint) == doctest::Approx(0.0));

  const auto shifted = block(8, 3, 2, 4, 3);
  CHECK(jaccard(a, shifted) == doctest::Approx(2.0 / 6.0));

  CHECK(jaccard(BinaryMask(4, 4), BinaryMask(4, 4)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(jaccard(a, BinaryMask(4, 4)), std::invalid_argument);
}

TEST_CASE("jaccard is symmetric and tops out only on identical masks") {
  std::mt19937 rng(89);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = ts::make_blob_mask(rng, 48);
    const auto b = ts::make_blob_mask(rng, 48);
    const double j = jaccard(a, b);
    CHECK(j >= 0.0);
    CHECK(j <= 1.0);
    CHECK(jaccard(b, a) == j);
    if (j == 1.0) CHECK(a == b);
  }
}

TEST_CASE("contour_f: identical masks and empty-vs-nonempty") {
  const auto a = block(12, 4, 4, 8, 8);
  CHECK(contour_f(a, a, 1.0) == doctest::Approx(1.0));
  CHECK(contour_f(BinaryMask(12, 12), a, 1.0) == doctest::Approx(0.0));
  CHECK(contour_f(BinaryMask(12, 12), BinaryMask(12, 12), 1.0) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(contour_f(a, a, -0.5), std::invalid_argument);
}

TEST_CASE("contour_f: one-pixel cross dilation is perfect at tol 1, not at 0") {
  const auto m = block(16, 5, 5, 10, 10);
  const auto g = dilate_cross(m);
  CHECK(contour_f(m, g, 1.0) == doctest::Approx(1.0));
  CHECK(contour_f(m, g, 0.0) < 1.0);
}

TEST_CASE("contour_f is non-decreasing in tol") {
  std::mt19937 rng(97);
  for (int trial = 0; trial < 15; ++trial) {
    const auto a = ts::make_blob_mask(rng, 48);
    const auto b = ts::make_blob_mask(rng, 48);
    double prev = -1.0;
    for (double tol : {0.0, 1.0, 2.0, 4.0}) {
      const double f = contour_f(a, b, tol);
      CHECK(f >= prev);
      prev = f;
    }
  }
}

TEST_CASE("ape examples") {
  const auto g = block(10, 2, 2, 5, 5);
  std::vector<BinaryMask> ms{g}, gs{g};
  CHECK(ape(ms, gs) == doctest::Approx(0.0));

  std::vector<BinaryMask> ten_px{block(10, 0, 0, 4, 1)};  // 10 pixels
  std::vector<BinaryMask> empty{BinaryMask(10, 10)};
  CHECK(ape(ten_px, empty) == doctest::Approx(10.0));

  // strict subset scores zero in the published one-sided mode
  std::vector<BinaryMask> subset{block(10, 3, 3, 4, 4)};
  CHECK(ape(subset, gs) == doctest::Approx(0.0));
  CHECK(ape(subset, gs, ApeMode::symmetric) > 0.0);

  CHECK_THROWS_AS(ape(ms, std::vector<BinaryMask>{}), std::invalid_argument);
}

TEST_CASE("ape: one-sided never exceeds symmetric") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<BinaryMask> ms, gs;
    for (int f = 0; f < 3; ++f) {
      ms.push_back(ts::make_blob_mask(rng, 40));
      gs.push_back(ts::make_blob_mask(rng, 40));
    }
    CHECK(ape(ms, gs) <= ape(ms, gs, ApeMode::symmetric));
  }
}

TEST_CASE("aggregate examples") {
  const std::vector<double> constant{0.7, 0.7, 0.7, 0.7};
  auto s = aggregate(constant);
  CHECK(s.decay == doctest::Approx(0.0));
  CHECK(s.recall == doctest::Approx(1.0));

  const std::vector<double> fading{0.9, 0.9, 0.1, 0.1};
  s = aggregate(fading);
  CHECK(s.mean == doctest::Approx(0.5));
  CHECK(s.recall == doctest::Approx(0.5));
  CHECK(s.decay == doctest::Approx(0.8));

  const std::vector<double> mid{0.6, 0.6, 0.6};
  CHECK(aggregate(mid).recall == doctest::Approx(1.0));
  CHECK(aggregate(std::vector<double>{0.5}).recall == doctest::Approx(0.0));
  CHECK_THROWS_AS(aggregate(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("aggregate: reversing the series flips the decay sign") {
  std::mt19937 rng(103);
  std::uniform_real_distribution<double> v(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 40);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> series(len(rng));
    for (auto& x : series) x = v(rng);
    auto reversed = series;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(aggregate(reversed).decay ==
          doctest::Approx(-aggregate(series).decay).epsilon(1e-12));
  }
}

TEST_SUITE_END();
