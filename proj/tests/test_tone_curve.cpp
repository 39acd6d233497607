#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "namedcurves/error.hpp"
#include "namedcurves/tone_curve.hpp"
#include "test_util.hpp"

namespace namedcurves {
namespace {

ControlPoints points(std::vector<double> p) { return ControlPoints{std::move(p)}; }

TEST(NormalizeTest, CumulativeSumExample) {
  const std::vector<double> deltas{2, 1, 1};
  const ControlPoints cp = normalize_increments(deltas);
  EXPECT_EQ(cp.points, (std::vector<double>{0.0, 0.5, 0.75, 1.0}));
}

TEST(NormalizeTest, EqualIncrementsGiveIdentitySpacing) {
  const std::vector<double> deltas(10, 0.37);
  const ControlPoints cp = normalize_increments(deltas);
  for (int m = 0; m < 11; ++m) EXPECT_NEAR(cp.points[m], m / 10.0, 1e-15);
  EXPECT_EQ(cp.points.front(), 0.0);
  EXPECT_EQ(cp.points.back(), 1.0);
}

TEST(NormalizeTest, DegenerateAndInvalid) {
  try {
    normalize_increments(std::vector<double>{0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateIncrements);
  }
  EXPECT_THROW(normalize_increments(std::vector<double>{1, -0.5}), Error);
  EXPECT_THROW(normalize_increments(std::vector<double>{}), Error);
}

TEST(NormalizeTest, ZeroIncrementsKeepFlatSegments) {
  const ControlPoints cp = normalize_increments(std::vector<double>{0, 1, 0});
  EXPECT_EQ(cp.points, (std::vector<double>{0, 0, 1, 1}));
  validate_control_points(cp);
}

TEST(ValidateTest, RejectsBrokenCurves) {
  EXPECT_THROW(validate_control_points(points({0.1, 1})), Error);
  EXPECT_THROW(validate_control_points(points({0, 0.99})), Error);
  EXPECT_THROW(validate_control_points(points({0, 0.6, 0.4, 1})), Error);
  EXPECT_THROW(validate_control_points(points({0, 1.2, 1})), Error);
  EXPECT_THROW(validate_control_points(points({0})), Error);
  EXPECT_NO_THROW(validate_control_points(points({0, 1})));
}

TEST(BinomialTest, PascalRows) {
  EXPECT_EQ(binomial(10, 0), 1u);
  EXPECT_EQ(binomial(10, 3), 120u);
  EXPECT_EQ(binomial(15, 7), 6435u);
  EXPECT_EQ(binomial(30, 15), 155117520u);
  EXPECT_EQ(binomial(4, 5), 0u);
}

TEST(BezierTest, HandExpansion) {
  // 0 * 0.25 + 0.8 * 2 * 0.25 + 1 * 0.25
  const ControlPoints cp = points({0, 0.8, 1});
  EXPECT_NEAR(bezier_eval(cp, 0.5), 0.65, 1e-15);
  EXPECT_NEAR(de_casteljau_eval(cp, 0.5), 0.65, 1e-15);
}

TEST(BezierTest, EndpointsAndClamping) {
  std::mt19937_64 rng(1);
  std::exponential_distribution<double> inc(1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ControlPoints cp = testing::random_curve(2 + trial % 15, rng, inc);
    EXPECT_EQ(bezier_eval(cp, 0.0), 0.0);
    EXPECT_EQ(bezier_eval(cp, 1.0), 1.0);
    EXPECT_EQ(de_casteljau_eval(cp, 1.0), 1.0);
    EXPECT_EQ(bezier_eval(cp, -0.5), 0.0);
    EXPECT_EQ(bezier_eval(cp, 2.0), 1.0);
  }
}

TEST(BezierTest, IdentityCurveIsLinear) {
  for (int m = 2; m <= 16; ++m) {
    const ControlPoints id = ControlPoints::identity(m);
    for (int i = 0; i <= 1000; ++i) {
      const double t = i / 1000.0;
      ASSERT_NEAR(bezier_eval(id, t), t, 1e-12) << "M=" << m;
    }
  }
}

TEST(BezierTest, MatchesDeCasteljau) {
  std::mt19937_64 rng(99);
  std::exponential_distribution<double> inc(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const ControlPoints cp = testing::random_curve(2 + trial % 15, rng, inc);
    const double t = u(rng);
    ASSERT_NEAR(bezier_eval(cp, t), de_casteljau_eval(cp, t), 1e-12);
  }
}

TEST(BezierTest, MonotoneAndInRange) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> inc(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const ControlPoints cp = testing::random_curve(11, rng, inc);
    double prev = 0.0;
    for (int i = 0; i <= 500; ++i) {
      const double v = bezier_eval(cp, i / 500.0);
      ASSERT_GE(v, prev - 1e-12);
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
      prev = v;
    }
  }
}

TEST(LutTest, BakeExamples) {
  const TonemapLut two = bake_lut(ControlPoints::identity(11), 2);
  EXPECT_EQ(two.samples()[0], 0.0);
  EXPECT_EQ(two.samples()[1], 1.0);

  const TonemapLut id = bake_lut(ControlPoints::identity(7), 257);
  for (int r = 0; r < 257; ++r) EXPECT_NEAR(id.samples()[r], r / 256.0, 1e-12);

  const TonemapLut three = bake_lut(points({0, 0.8, 1}), 3);
  EXPECT_EQ(three.samples()[0], 0.0);
  EXPECT_NEAR(three.samples()[1], 0.65, 1e-15);
  EXPECT_EQ(three.samples()[2], 1.0);
  EXPECT_NEAR(three(0.25), 0.325, 1e-15);

  try {
    bake_lut(ControlPoints::identity(3), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBadResolution);
  }
}

TEST(CurveSetTest, IdentityAndValidation) {
  CurveSet cs(5);
  EXPECT_EQ(cs.control_points(), 5);
  EXPECT_EQ(cs.curve(ColorGroup::kOby, Channel::kG), ControlPoints::identity(5));
  EXPECT_THROW(cs.set_curve(ColorGroup::kRed, Channel::kR, ControlPoints::identity(4)), Error);
  EXPECT_THROW(cs.set_curve(ColorGroup::kRed, Channel::kR, points({0, 0.7, 0.6, 0.9, 1})), Error);
}

TEST(ApplyTest, IdentityCurvesCopyInput) {
  std::mt19937_64 rng(4);
  const ImageBuffer img = testing::random_image(6, 5, rng);
  const GroupImages out = apply_curveset(CurveSet::identity(), img);
  for (const ImageBuffer& o : out) {
    for (std::size_t i = 0; i < img.data().size(); ++i) ASSERT_NEAR(o.data()[i], img.data()[i], 1e-12);
  }
}

TEST(ApplyTest, ConstantImageThroughRedGroup) {
  CurveSet cs(3);
  for (int c = 0; c < 3; ++c) cs.set_curve(ColorGroup::kRed, static_cast<Channel>(c), points({0, 0.8, 1}));
  const GroupImages out = apply_curveset(cs, testing::constant_image(4, 4, {0.5, 0.5, 0.5}));
  for (double v : out[0].data()) EXPECT_NEAR(v, 0.65, 1e-15);
  for (double v : out[1].data()) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(ApplyTest, ChannelsUseTheirOwnCurve) {
  CurveSet cs(3);
  cs.set_curve(ColorGroup::kBlue, Channel::kB, points({0, 0, 1}));
  const GroupImages out = apply_curveset(cs, testing::constant_image(1, 1, {0.5, 0.5, 0.5}));
  EXPECT_NEAR(out[2].at(0, 0, 0), 0.5, 1e-15);
  EXPECT_NEAR(out[2].at(0, 0, 2), 0.25, 1e-15);
}

TEST(ApplyTest, LutModeTracksDirectEvaluation) {
  std::mt19937_64 rng(8);
  const ImageBuffer img = testing::random_image(64, 64, rng);
  for (int trial = 0; trial < 5; ++trial) {
    const CurveSet cs = testing::random_curveset(11, rng);
    const GroupImages direct = apply_curveset(cs, img, ApplyMode::kDirect);
    const GroupImages lut = apply_curveset(cs, img, ApplyMode::kLut, 4096);
    double worst = 0.0;
    for (int g = 0; g < 6; ++g) {
      for (std::size_t i = 0; i < img.data().size(); ++i) {
        worst = std::max(worst, std::abs(direct[g].data()[i] - lut[g].data()[i]));
      }
    }
    EXPECT_LE(worst, 1e-6);
  }
}

}  // namespace
}  // namespace namedcurves
