#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "namedcurves/error.hpp"
#include "namedcurves/metrics.hpp"
#include "test_util.hpp"

namespace namedcurves {
namespace {

struct ReferencePair {
  LabPixel x, y;
  double expected;
};

std::vector<ReferencePair> load_reference_pairs() {
  std::ifstream in(std::string(NAMEDCURVES_ORACLE_DIR) + "/ciede2000_pairs.txt");
  std::vector<ReferencePair> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    ReferencePair p;
    ss >> p.x.L >> p.x.a >> p.x.b >> p.y.L >> p.y.a >> p.y.b >> p.expected;
    pairs.push_back(p);
  }
  return pairs;
}

TEST(PsnrTest, Examples) {
  const ImageBuffer a(8, 8, 0.5);
  EXPECT_TRUE(std::isinf(psnr(a, a)));
  EXPECT_NEAR(psnr(a, ImageBuffer(8, 8, 0.6)), 20.0, 1e-9);
  EXPECT_NEAR(psnr(ImageBuffer(8, 8, 0.0), ImageBuffer(8, 8, 1.0)), 0.0, 1e-12);
  EXPECT_THROW(psnr(a, ImageBuffer(8, 7, 0.5)), Error);
}

TEST(PsnrTest, DecreasesWithError) {
  const ImageBuffer a(4, 4, 0.0);
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 100; ++i) {
    const double v = psnr(a, ImageBuffer(4, 4, i / 100.0));
    ASSERT_LT(v, prev);
    prev = v;
  }
}

TEST(SsimTest, Examples) {
  std::mt19937_64 rng(1);
  const ImageBuffer a = testing::random_image(24, 20, rng);
  EXPECT_EQ(ssim(a, a), 1.0);
  // Constant images: means 0 and 1, no variance -> C1 / (1 + C1).
  const double c1 = 1e-4;
  EXPECT_NEAR(ssim(ImageBuffer(16, 16, 0.0), ImageBuffer(16, 16, 1.0)), c1 / (1.0 + c1), 1e-15);
  EXPECT_LT(ssim(ImageBuffer(16, 16, 0.0), ImageBuffer(16, 16, 1.0)), 0.01);

  ImageBuffer b = a;
  for (double& v : b.data()) v += 1e-7;
  EXPECT_NEAR(ssim(a, b), 1.0, 1e-9);
}

TEST(SsimTest, Errors) {
  try {
    ssim(ImageBuffer(10, 20), ImageBuffer(10, 20));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kImageTooSmall);
  }
  EXPECT_THROW(ssim(ImageBuffer(12, 12), ImageBuffer(13, 12)), Error);
}

TEST(SsimTest, MatchesBruteForceWindowSum) {
  // Direct 2D window sum on a tiny image, computed without the separable path.
  std::mt19937_64 rng(5);
  const ImageBuffer a = testing::random_image(13, 12, rng);
  const ImageBuffer b = testing::random_image(13, 12, rng);
  double w[11][11];
  double total_w = 0.0;
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j < 11; ++j) {
      w[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2 * 1.5 * 1.5));
      total_w += w[i][j];
    }
  }
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    double acc = 0.0;
    int count = 0;
    for (int y0 = 0; y0 + 11 <= 12; ++y0) {
      for (int x0 = 0; x0 + 11 <= 13; ++x0) {
        double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
        for (int i = 0; i < 11; ++i) {
          for (int j = 0; j < 11; ++j) {
            const double k = w[i][j] / total_w;
            const double va = a.at(x0 + j, y0 + i, c);
            const double vb = b.at(x0 + j, y0 + i, c);
            ma += k * va;
            mb += k * vb;
            saa += k * va * va;
            sbb += k * vb * vb;
            sab += k * va * vb;
          }
        }
        const double c1 = 1e-4, c2 = 9e-4;
        acc += ((2 * ma * mb + c1) * (2 * (sab - ma * mb) + c2)) /
               ((ma * ma + mb * mb + c1) * (saa - ma * ma + sbb - mb * mb + c2));
        ++count;
      }
    }
    total += acc / count;
  }
  EXPECT_NEAR(ssim(a, b), total / 3.0, 1e-12);
}

TEST(DeltaETest, ImageExamples) {
  const ImageBuffer black(3, 3, 0.0);
  const ImageBuffer white(3, 3, 1.0);
  EXPECT_EQ(delta_e_ab(black, black), 0.0);
  EXPECT_EQ(delta_e_00(white, white), 0.0);
  EXPECT_NEAR(delta_e_ab(black, white), 100.0, 1e-3);
  EXPECT_THROW(delta_e_00(black, ImageBuffer(2, 3)), Error);
}

TEST(DeltaETest, LabExamples) {
  EXPECT_DOUBLE_EQ(delta_e_ab(LabPixel{53.39, 0, 0}, LabPixel{53.39, 5, 0}), 5.0);
  EXPECT_NEAR(delta_e_00(LabPixel{50, 2.6772, -79.7751}, LabPixel{50, 0, -82.7485}), 2.0425, 1e-4);
  EXPECT_EQ(delta_e_00(LabPixel{50, 0, 0}, LabPixel{50, 0, 0}), 0.0);
}

TEST(DeltaETest, PublishedCiede2000Pairs) {
  const auto pairs = load_reference_pairs();
  ASSERT_EQ(pairs.size(), 34u);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    EXPECT_NEAR(delta_e_00(p.x, p.y), p.expected, 1e-4) << "pair " << i + 1;
    EXPECT_NEAR(delta_e_00(p.y, p.x), p.expected, 1e-4) << "pair " << i + 1 << " reversed";
  }
}

TEST(DeltaETest, NonNegativeAndZeroOnlyOnEqual) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> L(0, 100), ab(-100, 100);
  for (int i = 0; i < 2000; ++i) {
    const LabPixel x{L(rng), ab(rng), ab(rng)};
    const LabPixel y{L(rng), ab(rng), ab(rng)};
    ASSERT_GT(delta_e_00(x, y), 0.0);
    ASSERT_EQ(delta_e_00(x, x), 0.0);
  }
}

TEST(MetricsTest, Symmetry) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 5; ++i) {
    const ImageBuffer a = testing::random_image(16, 14, rng);
    const ImageBuffer b = testing::random_image(16, 14, rng);
    EXPECT_NEAR(psnr(a, b), psnr(b, a), 1e-12);
    EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-12);
    EXPECT_NEAR(delta_e_ab(a, b), delta_e_ab(b, a), 1e-12);
    EXPECT_NEAR(delta_e_00(a, b), delta_e_00(b, a), 1e-12);
  }
}

TEST(LossTest, Examples) {
  std::mt19937_64 rng(2);
  const ImageBuffer y = testing::random_image(16, 16, rng);
  const ImageBuffer x = testing::random_image(16, 16, rng);
  EXPECT_EQ(loss_eq3(y, y, y), 0.0);
  EXPECT_NEAR(loss_eq3(x, y, y), 0.5 * rmse(y, x), 1e-15);
  EXPECT_NEAR(loss_eq3(x, x, y, LossConfig{0.0}), rmse(y, x) + 1.0 - ssim(y, x), 1e-15);
  EXPECT_NEAR(loss_eq3(x, x, y), 0.5 * rmse(y, x) + rmse(y, x) + 1.0 - ssim(y, x), 1e-15);
  EXPECT_THROW(loss_eq3(x, x, y, LossConfig{-1.0}), Error);
  EXPECT_THROW(loss_eq3(ImageBuffer(16, 15), x, y), Error);
}

TEST(MetricsTest, EvaluateIdenticalImages) {
  std::mt19937_64 rng(3);
  const ImageBuffer a = testing::random_image(20, 20, rng);
  const MetricsReport r = evaluate(a, a);
  EXPECT_TRUE(std::isinf(r.psnr));
  EXPECT_EQ(r.ssim, 1.0);
  EXPECT_EQ(r.de_ab, 0.0);
  EXPECT_EQ(r.de_00, 0.0);
  EXPECT_TRUE(std::isnan(evaluate(ImageBuffer(4, 4), ImageBuffer(4, 4)).ssim));
}

}  // namespace
}  // namespace namedcurves
