#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "simdist/calibration.hpp"
#include "simdist/error.hpp"

namespace simdist {
namespace {

AnnotationSet one_image(std::vector<CBox> gts, double w, double h, std::int64_t id = 1) {
  AnnotationSet set;
  set.categories.push_back({1, "x"});
  ImageRecord img;
  img.id = id;
  img.width = w;
  img.height = h;
  for (const CBox& b : gts) img.gts.push_back({b, 1});
  set.images.push_back(img);
  return set;
}

TEST(CompensatedSumTest, RecoversCancellation) {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), 1.0);
}

TEST(AccumulateTest, Examples) {
  const CalibrationAccumulator empty;
  const std::vector<CBox> anchors{CBox(4, 8, 8, 8), CBox(8, 12, 8, 8)};
  EXPECT_EQ(accumulate_image({}, anchors, empty), empty);
  const std::vector<CBox> gt{CBox(8, 8, 8, 8)};
  EXPECT_EQ(accumulate_image(gt, {}, empty), empty);

  const CalibrationAccumulator acc = accumulate_image(gt, anchors, empty);
  EXPECT_EQ(acc.sum_x_ratio(), 0.25);
  EXPECT_EQ(acc.sum_y_ratio(), 0.25);
  EXPECT_EQ(acc.pair_count, 2u);

  const CalibrationAccumulator same = accumulate_image(gt, gt, empty);
  EXPECT_EQ(same.sum_x_ratio(), 0.0);
  EXPECT_EQ(same.sum_y_ratio(), 0.0);
  EXPECT_EQ(same.pair_count, 1u);
}

TEST(FinalizeTest, Examples) {
  const std::vector<CBox> gt{CBox(8, 8, 8, 8)};
  const std::vector<CBox> anchors{CBox(4, 8, 8, 8), CBox(8, 12, 8, 8)};
  const NormParams p = finalize(accumulate_image(gt, anchors, {}));
  EXPECT_EQ(p.m, 0.125);
  EXPECT_EQ(p.n, 0.125);
  EXPECT_EQ(p.pair_count, 2u);

  const NormParams floored = finalize(accumulate_image(gt, gt, {}));
  EXPECT_EQ(floored.m, kEpsNorm);
  EXPECT_EQ(floored.n, kEpsNorm);

  try {
    finalize({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_input);
  }
}

// Two single-cell levels put anchors at (4,4) and (8,8) in a 16x16 image, so a
// gt at (8,8) reproduces the hand-evaluated accumulator: 4/16 + 0 per axis.
AnchorSpec fixture_spec() {
  AnchorSpec s;
  s.levels = {{16, 8}, {32, 8}};
  s.scales = {1.0};
  s.ratios = {1.0};
  s.center_offset = 0.25;
  return s;
}

TEST(CalibrateTest, SingleImageFixture) {
  const AnnotationSet set = one_image({CBox(8, 8, 8, 8)}, 16, 16);
  const AnchorGrid grid = build_grid(fixture_spec(), {16, 16});
  ASSERT_EQ(grid.anchors, (std::vector<CBox>{CBox(4, 4, 8, 8), CBox(8, 8, 8, 8)}));
  const NormParams p = calibrate(set, fixture_spec());
  EXPECT_EQ(p.m, 0.125);
  EXPECT_EQ(p.n, 0.125);
  EXPECT_EQ(p.pair_count, 2u);
  const NormParams direct = finalize(accumulate_image(set.images[0].boxes(), grid.anchors, {}));
  EXPECT_EQ(p.m, direct.m);
  EXPECT_EQ(p.n, direct.n);
}

TEST(CalibrateTest, DuplicationInvariant) {
  SynthOptions o;
  o.images = 6;
  o.image_size = {64, 48};
  o.objects_per_image = 4;
  o.seed = 3;
  AnnotationSet set = synth_dataset(o);
  const NormParams base = calibrate(set, AnchorSpec::default_spec());
  AnnotationSet doubled = set;
  for (ImageRecord img : set.images) {
    img.id += 1000;
    doubled.images.push_back(img);
  }
  const NormParams dup = calibrate(doubled, AnchorSpec::default_spec());
  EXPECT_NEAR(dup.m, base.m, 1e-14 * base.m);
  EXPECT_NEAR(dup.n, base.n, 1e-14 * base.n);
  EXPECT_EQ(dup.pair_count, 2 * base.pair_count);
}

TEST(CalibrateTest, MatchesOneShotOracle) {
  SynthOptions o;
  o.images = 10;
  o.image_size = {128, 96};
  o.scale_min = 2;
  o.scale_max = 16;
  o.objects_per_image = 5;
  o.seed = 17;
  const AnnotationSet set = synth_dataset(o);
  const AnchorSpec spec = AnchorSpec::default_spec();
  const NormParams p = calibrate(set, spec);
  const testing::OneShotMN ref = testing::one_shot_calibration(set, spec);
  EXPECT_EQ(p.pair_count, ref.pairs);
  EXPECT_NEAR(p.m, ref.m, 1e-10 * ref.m);
  EXPECT_NEAR(p.n, ref.n, 1e-10 * ref.n);
  EXPECT_GT(p.m, kEpsNorm);
  EXPECT_LT(p.m, 10.0);
  EXPECT_LT(p.n, 10.0);
}

TEST(CalibrateTest, ThreadCountAndImageOrderDoNotMatter) {
  SynthOptions o;
  o.images = 12;
  o.image_size = {100, 80};
  o.objects_per_image = 6;
  o.seed = 5;
  AnnotationSet set = synth_dataset(o);
  const AnchorSpec spec = AnchorSpec::default_spec();
  CalibrationOptions opt;
  const NormParams one = calibrate(set, spec, opt);
  for (const std::size_t threads : {2u, 3u, 8u}) {
    opt.threads = threads;
    EXPECT_EQ(calibrate(set, spec, opt), one);
  }
  testing::BoxGen gen(1);
  std::shuffle(set.images.begin(), set.images.end(), gen.engine());
  EXPECT_EQ(calibrate(set, spec, opt), one);
}

TEST(CalibrateTest, ScaleInvariant) {
  SynthOptions o;
  o.images = 4;
  o.image_size = {96, 96};
  o.objects_per_image = 5;
  o.seed = 8;
  const AnnotationSet set = synth_dataset(o);
  const AnchorSpec spec = AnchorSpec::default_spec();
  const NormParams base = calibrate(set, spec);
  for (const double s : {0.5, 3.0, 7.25}) {
    AnnotationSet scaled = set;
    for (ImageRecord& img : scaled.images) {
      img.width *= s;
      img.height *= s;
      for (GroundTruth& gt : img.gts) gt.box = gt.box.scaled(s);
    }
    AnchorSpec scaled_spec = spec;
    for (AnchorLevel& l : scaled_spec.levels) {
      l.stride *= s;
      l.base_size *= s;
    }
    const NormParams p = calibrate(scaled, scaled_spec);
    EXPECT_NEAR(p.m, base.m, 1e-9 * base.m);
    EXPECT_NEAR(p.n, base.n, 1e-9 * base.n);
  }
}

TEST(CalibrateTest, LevelFilterAndSubsample) {
  SynthOptions o;
  o.images = 3;
  o.image_size = {64, 64};
  o.objects_per_image = 3;
  const AnnotationSet set = synth_dataset(o);
  const AnchorSpec spec = AnchorSpec::default_spec();

  CalibrationOptions levels;
  levels.levels = {1};
  AnchorSpec only = spec;
  only.levels = {spec.levels[1]};
  const NormParams filtered = calibrate(set, spec, levels);
  EXPECT_EQ(filtered.m, calibrate(set, only).m);
  EXPECT_EQ(filtered.source_tag, "calibrated levels=1 subsample=off");

  CalibrationOptions sub;
  sub.subsample_rate = 0.25;
  sub.seed = 11;
  const NormParams a = calibrate(set, spec, sub);
  EXPECT_EQ(a, calibrate(set, spec, sub));
  EXPECT_LT(a.pair_count, calibrate(set, spec).pair_count);
  EXPECT_NE(a.source_tag.find("subsample=0.25"), std::string::npos);

  levels.levels = {9};
  EXPECT_THROW(calibrate(set, spec, levels), Error);
  sub.subsample_rate = 0.0;
  EXPECT_THROW(calibrate(set, spec, sub), Error);
}

TEST(CalibrateTest, EmptySetFails) {
  AnnotationSet set = one_image({}, 32, 32);
  EXPECT_THROW(calibrate(set, AnchorSpec::default_spec()), Error);
  EXPECT_THROW(calibrate(AnnotationSet{}, AnchorSpec::default_spec()), Error);
}

}  // namespace
}  // namespace simdist
