#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "simdist/error.hpp"
#include "simdist/metrics.hpp"

namespace simdist {
namespace {

using testing::BoxGen;

const NormParams kUnit = NormParams::manual(1.0, 1.0);

TEST(CBoxTest, RejectsDegenerateAndNonFinite) {
  EXPECT_THROW(CBox(0, 0, 0, 1), Error);
  EXPECT_THROW(CBox(0, 0, 1, -2), Error);
  EXPECT_THROW(CBox(std::nan(""), 0, 1, 1), Error);
  EXPECT_THROW(CBox(0, std::numeric_limits<double>::infinity(), 1, 1), Error);
  EXPECT_NO_THROW(CBox(-5, -5, 1e-3, 1e-3));
}

TEST(NormParamsTest, FloorIsEnforced) {
  EXPECT_THROW(NormParams::manual(0.0, 1.0), Error);
  EXPECT_THROW(NormParams::manual(1.0, 5e-5), Error);
  EXPECT_NO_THROW(NormParams::manual(kEpsNorm, kEpsNorm));
}

TEST(SimdComponentsTest, WorkedExamples) {
  const CBox gt(10, 10, 8, 8);
  auto same = simd_components(gt, CBox(10, 10, 8, 8), kUnit);
  EXPECT_EQ(same.location, 0.0);
  EXPECT_EQ(same.shape, 0.0);

  auto shifted = simd_components(gt, CBox(12, 10, 8, 8), kUnit);
  EXPECT_DOUBLE_EQ(shifted.location, 0.125);
  EXPECT_EQ(shifted.shape, 0.0);

  auto bigger = simd_components(gt, CBox(10, 10, 16, 16), kUnit);
  EXPECT_EQ(bigger.location, 0.0);
  EXPECT_NEAR(bigger.shape, 0.47140452079103173, 1e-12);
}

TEST(SimdComponentsTest, NormParamsScaleTheTerms) {
  // The denominator is (1/m)(w_g + w_a): m multiplies the x ratio.
  const auto c = simd_components(CBox(10, 10, 8, 8), CBox(12, 14, 8, 8), NormParams::manual(2.0, 0.5));
  EXPECT_NEAR(c.location, std::sqrt(0.25 * 0.25 + 0.125 * 0.125), 1e-15);
}

TEST(SimdComponentsTest, NormModeSubstitutesOne) {
  const CBox gt(10, 10, 8, 8), anchor(12, 14, 8, 8);
  const NormParams p = NormParams::manual(2.0, 0.5);
  const auto both = simd_components(gt, anchor, p, NormMode::both);
  const auto width = simd_components(gt, anchor, p, NormMode::width_only);
  const auto height = simd_components(gt, anchor, p, NormMode::height_only);
  const auto none = simd_components(gt, anchor, p, NormMode::none);
  EXPECT_EQ(none.location, simd_components(gt, anchor, kUnit).location);
  EXPECT_NEAR(width.location, std::hypot(2.0 * 2.0 / 16.0, 4.0 / 16.0), 1e-15);
  EXPECT_NEAR(height.location, std::hypot(2.0 / 16.0, 0.5 * 4.0 / 16.0), 1e-15);
  EXPECT_NEAR(both.location, std::hypot(2.0 * 2.0 / 16.0, 0.5 * 4.0 / 16.0), 1e-15);
}

TEST(SimdComponentsTest, OverflowIsAnError) {
  const CBox tiny(0, 0, 1e-300, 1e-300);
  const CBox far(1e300, 0, 1e-300, 1e-300);
  try {
    simd_components(tiny, far, NormParams::manual(10, 10));
    FAIL() << "expected non-finite error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::non_finite);
  }
}

TEST(SimdPairTest, StaysPositiveWhenExpUnderflows) {
  const CBox gt(0, 0, 1, 1), far(2000, 0, 1, 1);  // location 1000: exp rounds to 0
  ASSERT_GT(simd_components(gt, far, kUnit).location, 745.0);
  const double v = simd_pair(gt, far, kUnit);
  EXPECT_EQ(v, std::numeric_limits<double>::min());
  const std::vector<CBox> g{gt}, a{far};
  EXPECT_EQ(simd_matrix(g, a, kUnit)(0, 0), v);
}

TEST(SimdMatrixTest, OverflowIsAnError) {
  const std::vector<CBox> g{CBox(0, 0, 1e-300, 1e-300)}, a{CBox(1e300, 0, 1e-300, 1e-300)};
  EXPECT_THROW(simd_matrix(g, a, NormParams::manual(10, 10)), Error);
}

TEST(SimdPairTest, WorkedExamples) {
  const CBox gt(10, 10, 8, 8);
  EXPECT_EQ(simd_pair(gt, gt, NormParams::manual(3.7, 0.2)), 1.0);
  EXPECT_NEAR(simd_pair(gt, CBox(12, 10, 8, 8), kUnit), 0.8824969025845955, 1e-12);
  EXPECT_NEAR(simd_pair(gt, CBox(10, 10, 16, 16), kUnit), 0.6241250557782609, 1e-12);
}

TEST(SimdMatrixTest, SmallCases) {
  const CBox gt(10, 10, 8, 8);
  const std::vector<CBox> one{gt};
  const MetricMatrix same = simd_matrix(one, one, kUnit);
  ASSERT_EQ(same.rows(), 1u);
  ASSERT_EQ(same.cols(), 1u);
  EXPECT_EQ(same(0, 0), 1.0);

  const std::vector<CBox> anchors{CBox(12, 10, 8, 8), CBox(10, 10, 16, 16)};
  const MetricMatrix row = simd_matrix(one, anchors, kUnit);
  EXPECT_NEAR(row(0, 0), 0.8825, 1e-4);
  EXPECT_NEAR(row(0, 1), 0.6241, 1e-4);

  EXPECT_THROW(simd_matrix({}, anchors, kUnit), Error);
  EXPECT_THROW(simd_matrix(one, {}, kUnit), Error);
}

TEST(SimdMatrixTest, BitIdenticalToScalarLoop) {
  BoxGen gen(11);
  for (const NormMode mode : {NormMode::both, NormMode::width_only, NormMode::height_only, NormMode::none}) {
    const auto gts = gen.boxes(100);
    const auto anchors = gen.boxes(100);
    const NormParams p = gen.params();
    const MetricMatrix m = simd_matrix(gts, anchors, p, mode);
    for (std::size_t i = 0; i < gts.size(); ++i) {
      for (std::size_t j = 0; j < anchors.size(); ++j) {
        ASSERT_EQ(m(i, j), simd_pair(gts[i], anchors[j], p, mode)) << i << "," << j;
      }
    }
  }
}

TEST(SimdPropertyTest, SymmetryTranslationScaleRange) {
  BoxGen gen(21);
  for (int t = 0; t < 2000; ++t) {
    const CBox a = gen.box(), b = gen.box();
    const NormParams p = gen.params();
    const double v = simd_pair(a, b, p);
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    ASSERT_EQ(v, simd_pair(b, a, p));

    const double dx = gen.uniform(-1000, 1000), dy = gen.uniform(-1000, 1000);
    const double vt = simd_pair(a.translated(dx, dy), b.translated(dx, dy), p);
    ASSERT_LE(std::abs(vt - v), 1e-12 * v);

    const double s = gen.uniform(0.01, 100.0);
    const double vs = simd_pair(a.scaled(s), b.scaled(s), p);
    ASSERT_LE(std::abs(vs - v), 1e-9 * v);
  }
}

TEST(SimdPropertyTest, StrictlyDecreasingInCenterOffset) {
  BoxGen gen(5);
  for (int t = 0; t < 200; ++t) {
    const CBox gt = gen.box();
    const double w = gen.uniform(1, 50), h = gen.uniform(1, 50);
    const NormParams p = gen.params();
    double prev = 2.0;
    for (int k = 0; k < 20; ++k) {
      const double v = simd_pair(gt, CBox(gt.cx() + 0.5 * k, gt.cy(), w, h), p);
      ASSERT_LT(v, prev);
      prev = v;
    }
  }
}

TEST(SimdPropertyTest, OneOnlyForIdenticalBoxes) {
  const CBox gt(10, 10, 8, 8);
  EXPECT_LT(simd_pair(gt, CBox(10 + 1e-9, 10, 8, 8), kUnit), 1.0 + 0.0);
  EXPECT_LT(simd_pair(gt, CBox(10, 10, 8, 8.001), kUnit), 1.0);
}

TEST(IouTest, Examples) {
  const CBox a(5, 5, 10, 10), b(10, 5, 10, 10);
  EXPECT_EQ(iou(a, a), 1.0);
  EXPECT_EQ(iou(a, CBox(100, 100, 4, 4)), 0.0);
  EXPECT_EQ(iou(a, CBox(15, 5, 10, 10)), 0.0);  // touching edges
  EXPECT_DOUBLE_EQ(iou(a, b), 1.0 / 3.0);
  EXPECT_NEAR(iou(a, b), testing::raster_iou(a, b, 0.05), 1e-9);
}

TEST(IouTest, AgreesWithRasterOracle) {
  BoxGen gen(3);
  for (int t = 0; t < 50; ++t) {
    const CBox a = gen.box(40, 2, 30), b = gen.box(40, 2, 30);
    EXPECT_NEAR(iou(a, b), testing::raster_iou(a, b, 0.05), 0.01);
    EXPECT_EQ(iou(a, b), iou(b, a));
  }
}

TEST(DotdTest, Examples) {
  const CBox g(0, 0, 4, 4);
  EXPECT_EQ(dotd(g, CBox(0, 0, 9, 2), 3.0), 1.0);
  EXPECT_NEAR(dotd(g, CBox(3, 4, 4, 4), 10.0), 0.6065306597126334, 1e-15);
  EXPECT_NEAR(dotd(g, CBox(3, 4, 4, 4), 5.0), 0.36787944117144233, 1e-15);
  EXPECT_THROW(dotd(g, g, 0.0), Error);
  EXPECT_THROW(dotd(g, g, -1.0), Error);
}

TEST(NwdTest, Examples) {
  EXPECT_EQ(nwd(CBox(3, 3, 10, 10), CBox(3, 3, 10, 10), 12.8), 1.0);
  EXPECT_NEAR(nwd(CBox(0, 0, 10, 10), CBox(0, 0, 14, 10), 2.0), 0.36787944117144233, 1e-15);
  EXPECT_NEAR(nwd(CBox(0, 0, 6, 6), CBox(3, 4, 6, 6), 5.0), 0.36787944117144233, 1e-15);
  EXPECT_THROW(nwd(CBox(0, 0, 1, 1), CBox(0, 0, 1, 1), 0.0), Error);
}

TEST(RfdTest, Examples) {
  const CBox g(0, 0, 8, 8);
  EXPECT_EQ(rfd_divergence(g, g, 1.0), 0.0);
  EXPECT_EQ(rfd(g, g, 1.0), 1.0);
  EXPECT_NEAR(rfd_divergence(g, CBox(4, 0, 8, 8), 1.0), 0.5, 1e-15);
  EXPECT_NEAR(rfd(g, CBox(4, 0, 8, 8), 1.0), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(rfd_divergence(g, g, 2.0), -0.3862943611198906, 1e-12);
  EXPECT_EQ(rfd(g, g, 2.0), 1.0);
  EXPECT_THROW(rfd(g, g, 0.0), Error);
}

TEST(MetricTest, RangesOnRandomPairs) {
  BoxGen gen(8);
  for (int t = 0; t < 2000; ++t) {
    const CBox a = gen.box(200), b = gen.box(200);
    const double i = iou(a, b);
    ASSERT_GE(i, 0.0);
    ASSERT_LE(i, 1.0);
    for (const double v : {dotd(a, b, 20.0), nwd(a, b, 12.8), rfd(a, b, gen.uniform(0.1, 3.0))}) {
      ASSERT_GT(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(MetricTest, PairwiseDispatchMatchesScalar) {
  BoxGen gen(9);
  const auto gts = gen.boxes(7, 100, 2, 20);
  const auto anchors = gen.boxes(13, 100, 2, 20);
  for (const MetricKind kind :
       {MetricKind::iou, MetricKind::dotd, MetricKind::nwd, MetricKind::rfd, MetricKind::simd}) {
    Metric m;
    m.kind = kind;
    m.dotd_scale = 9.0;
    m.norm = NormParams::manual(0.7, 1.3);
    const MetricMatrix mat = pairwise(m, gts, anchors);
    for (std::size_t i = 0; i < gts.size(); ++i) {
      for (std::size_t j = 0; j < anchors.size(); ++j) ASSERT_EQ(mat(i, j), m(gts[i], anchors[j]));
    }
  }
  Metric bad;
  bad.kind = MetricKind::dotd;  // no scale
  EXPECT_THROW(pairwise(bad, gts, anchors), Error);
}

TEST(MetricMatrixTest, ValidatesShapeAndRange) {
  EXPECT_THROW(MetricMatrix(2, 2, {0.1, 0.2, 0.3}), Error);
  EXPECT_THROW(MetricMatrix(1, 2, {0.1, 1.5}), Error);
  EXPECT_THROW(MetricMatrix(1, 1, {std::nan("")}), Error);
  EXPECT_NO_THROW(MetricMatrix(1, 2, {0.0, 1.0}));
}

TEST(MetricTest, NamesRoundTrip) {
  for (const MetricKind kind :
       {MetricKind::iou, MetricKind::dotd, MetricKind::nwd, MetricKind::rfd, MetricKind::simd}) {
    EXPECT_EQ(parse_metric_kind(to_string(kind)), kind);
  }
  for (const NormMode mode : {NormMode::both, NormMode::width_only, NormMode::height_only, NormMode::none}) {
    EXPECT_EQ(parse_norm_mode(to_string(mode)), mode);
  }
  EXPECT_THROW(parse_metric_kind("giou"), Error);
}

}  // namespace
}  // namespace simdist
