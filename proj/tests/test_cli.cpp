#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "namedcurves/cli.hpp"
#include "namedcurves/curve_file.hpp"
#include "namedcurves/error.hpp"
#include "namedcurves/image.hpp"
#include "test_util.hpp"

namespace namedcurves {
namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::make_temp_dir("cli"); }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the executable; stdout lands in out_.
  int run(const std::string& args) {
    const std::string cmd = std::string(NAMEDCURVES_CLI) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    out_ = read_text(dir_ / "stdout.txt");
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path save(const ImageBuffer& img, const std::string& name) {
    const fs::path p = dir_ / name;
    save_png(img, p);
    return p;
  }

  std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

  fs::path dir_;
  std::string out_;
};

TEST(CurveFileTest, RoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const CurveSet cs = testing::random_curveset(2 + trial % 15, rng, 2.0);
    const std::string text = serialize_curves(cs);
    const CurveSet back = parse_curves(text);
    ASSERT_EQ(back, cs);
    ASSERT_EQ(serialize_curves(back), text);
  }
}

TEST(CurveFileTest, CanonicalLayout) {
  const std::string text = serialize_curves(CurveSet::identity(3));
  std::istringstream ss(text);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "NCV 1 3");
  std::getline(ss, line);
  EXPECT_EQ(line, "red r 0 0.5 1");
  int count = 1;
  std::string last;
  while (std::getline(ss, line)) {
    ++count;
    last = line;
  }
  EXPECT_EQ(count, 18);
  EXPECT_EQ(last, "achromatic b 0 0.5 1");
  EXPECT_EQ(format_double(0.1, 17), "0.10000000000000001");
}

ErrorKind parse_error(const std::string& text, std::string* message = nullptr) {
  try {
    parse_curves(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  return ErrorKind::kIoError;
}

TEST(CurveFileTest, MalformedInputs) {
  const std::string good = serialize_curves(CurveSet::identity(3));
  std::string msg;

  std::string decreasing = good;
  decreasing.replace(decreasing.find("green g 0 0.5 1"), 15, "green g 0 0.7 0.6");
  EXPECT_EQ(parse_error(decreasing, &msg), ErrorKind::kMalformedFile);
  EXPECT_NE(msg.find("line 6"), std::string::npos) << msg;

  EXPECT_EQ(parse_error("NCV 2 3\n"), ErrorKind::kMalformedFile);
  EXPECT_EQ(parse_error("XYZ 1 3\n"), ErrorKind::kMalformedFile);
  EXPECT_EQ(parse_error(""), ErrorKind::kMalformedFile);
  EXPECT_EQ(parse_error(good.substr(0, good.rfind("achromatic"))), ErrorKind::kMalformedFile);
  EXPECT_EQ(parse_error(good + "red r 0 0.5 1\n"), ErrorKind::kMalformedFile);

  std::string wrong_count = good;
  wrong_count.replace(wrong_count.find("blue b 0 0.5 1"), 14, "blue b 0 1");
  EXPECT_EQ(parse_error(wrong_count), ErrorKind::kMalformedFile);
  std::string bad_number = good;
  bad_number.replace(bad_number.find("oby r 0 0.5 1"), 13, "oby r 0 0.5x 1");
  EXPECT_EQ(parse_error(bad_number), ErrorKind::kMalformedFile);
  std::string bad_group = good;
  bad_group.replace(bad_group.find("oby r"), 5, "cyan r");
  EXPECT_EQ(parse_error(bad_group), ErrorKind::kMalformedFile);
}

TEST(CliFormatTest, FixedFormatting) {
  EXPECT_EQ(cli::format_fixed(20.0, 4), "20.0000");
  EXPECT_EQ(cli::format_fixed(std::numeric_limits<double>::infinity(), 4), "inf");
  EXPECT_EQ(cli::format_fixed(-0.00001, 4), "0.0000");
  EXPECT_EQ(cli::exit_code_for(ErrorKind::kDimensionMismatch), 3);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::kMalformedFile), 4);
}

TEST_F(CliTest, EvalReports) {
  const auto a = save(ImageBuffer(16, 16, 0.0), "black.png");
  const auto b = save(ImageBuffer(16, 16, 1.0), "white.png");
  ASSERT_EQ(run("eval " + q(a) + " " + q(a)), 0);
  EXPECT_EQ(out_, "psnr: inf\nssim: 1.0000\nde_ab: 0.0000\nde_00: 0.0000\n");
  ASSERT_EQ(run("eval " + q(a) + " " + q(b) + " --metrics de_ab"), 0);
  EXPECT_EQ(out_, "de_ab: 100.0000\n");

  // 8-bit codes 102 and 128 differ uniformly.
  const auto c = save(ImageBuffer(16, 16, 102.0 / 255.0), "c.png");
  const auto d = save(ImageBuffer(16, 16, 128.0 / 255.0), "d.png");
  ASSERT_EQ(run("eval " + q(c) + " " + q(d) + " --metrics psnr"), 0);
  const double diff = (128.0 - 102.0) / 255.0;
  EXPECT_EQ(out_, "psnr: " + cli::format_fixed(10.0 * std::log10(1.0 / (diff * diff)), 4) + "\n");

  EXPECT_EQ(run("eval " + q(a) + " " + q(save(ImageBuffer(15, 16, 0.0), "small.png"))), 3);
  EXPECT_EQ(run("eval " + q(dir_ / "missing.png") + " " + q(a)), 2);
}

TEST_F(CliTest, DecomposeWritesTwelveFiles) {
  const auto red = save(testing::constant_image(8, 6, {1, 0, 0}), "red.png");
  const fs::path out = dir_ / "maps";
  ASSERT_EQ(run("decompose " + q(red) + " " + q(out)), 0);
  int count = 0;
  for (const auto& e : fs::directory_iterator(out)) {
    (void)e;
    ++count;
  }
  EXPECT_EQ(count, 12);
  for (const char* g : {"red", "green", "blue", "oby", "pinkpurple", "achromatic"}) {
    EXPECT_TRUE(fs::exists(out / (std::string("red.") + g + ".prob.png")));
    EXPECT_TRUE(fs::exists(out / (std::string("red.") + g + ".viz.png")));
  }
  const ImageBuffer prob = load_png(out / "red.red.prob.png");
  for (double v : prob.data()) EXPECT_EQ(v, 1.0);
  const ImageBuffer viz = load_png(out / "red.green.viz.png");
  for (double v : viz.data()) EXPECT_EQ(v, 1.0);

  const fs::path none = dir_ / "none";
  EXPECT_EQ(run("decompose " + q(dir_ / "missing.png") + " " + q(none)), 2);
  EXPECT_FALSE(fs::exists(none));
}

TEST_F(CliTest, FitApplyBakeRoundTrip) {
  std::mt19937_64 rng(3);
  const auto input = save(testing::random_image(48, 32, rng), "in.png");
  const fs::path curves = dir_ / "id.ncv";
  ASSERT_EQ(run("fit " + q(input) + " " + q(input) + " " + q(curves) + " --iters 50"), 0);
  const CurveSet fitted = read_curve_file(curves);
  for (int g = 0; g < 6; ++g) {
    for (int c = 0; c < 3; ++c) {
      const auto& p = fitted.curve(static_cast<ColorGroup>(g), static_cast<Channel>(c)).points;
      for (int m = 0; m < 11; ++m) EXPECT_LE(std::abs(p[m] - m / 10.0), 0.05);
    }
  }
  EXPECT_NE(out_.find("best objective"), std::string::npos);

  write_curve_file(CurveSet::identity(), dir_ / "identity.ncv");
  const fs::path applied = dir_ / "applied.png";
  ASSERT_EQ(run("apply " + q(input) + " " + q(dir_ / "identity.ncv") + " " + q(applied)), 0);
  EXPECT_EQ(load_png(applied), load_png(input));

  ASSERT_EQ(run("fit " + q(input) + " " + q(input) + " " + q(dir_ / "m2.ncv") + " --points 2 --iters 5"), 0);
  EXPECT_EQ(read_curve_file(dir_ / "m2.ncv"), CurveSet::identity(2));

  EXPECT_EQ(run("fit " + q(input) + " " + q(save(ImageBuffer(10, 10, 0.5), "o.png")) + " " +
                q(dir_ / "x.ncv")),
            3);
  EXPECT_FALSE(fs::exists(dir_ / "x.ncv"));
}

TEST_F(CliTest, ApplyRejectsInvalidCurveFile) {
  const auto input = save(ImageBuffer(8, 8, 0.5), "in.png");
  std::string text = serialize_curves(CurveSet::identity(3));
  text.replace(text.find("blue g 0 0.5 1"), 14, "blue g 0 0.9 0.8");
  const fs::path bad = dir_ / "bad.ncv";
  std::ofstream(bad) << text;
  EXPECT_EQ(run("apply " + q(input) + " " + q(bad) + " " + q(dir_ / "out.png")), 4);
  EXPECT_FALSE(fs::exists(dir_ / "out.png"));
  EXPECT_NE(read_text(dir_ / "stderr.txt").find("line"), std::string::npos);
}

TEST_F(CliTest, BakeLut) {
  write_curve_file(CurveSet::identity(), dir_ / "id.ncv");
  ASSERT_EQ(run("bake-lut " + q(dir_ / "id.ncv") + " " + q(dir_ / "luts") + " --resolution 3"), 0);
  int count = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "luts")) {
    (void)e;
    ++count;
  }
  EXPECT_EQ(count, 18);
  EXPECT_EQ(read_text(dir_ / "luts" / "oby.g.lut.txt"), "0 0\n0.5 0.5\n1 1\n");

  CurveSet cs(3);
  cs.set_curve(ColorGroup::kRed, Channel::kR, ControlPoints{{0.0, 0.8, 1.0}});
  write_curve_file(cs, dir_ / "m3.ncv");
  ASSERT_EQ(run("bake-lut " + q(dir_ / "m3.ncv") + " " + q(dir_ / "luts3") + " --resolution 3"), 0);
  std::istringstream lines(read_text(dir_ / "luts3" / "red.r.lut.txt"));
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  std::istringstream fields(line);
  double x = 0, y = 0;
  fields >> x >> y;
  EXPECT_EQ(x, 0.5);
  EXPECT_NEAR(y, 0.65, 1e-15);

  EXPECT_EQ(run("bake-lut " + q(dir_ / "id.ncv") + " " + q(dir_ / "luts1") + " --resolution 1"), 4);
  EXPECT_FALSE(fs::exists(dir_ / "luts1"));
}

TEST_F(CliTest, FitBatch) {
  const fs::path corpus = dir_ / "corpus";
  fs::create_directories(corpus / "input");
  fs::create_directories(corpus / "target");
  EXPECT_EQ(run("fit-batch " + q(corpus) + " " + q(dir_ / "out0")), 5);

  std::mt19937_64 rng(4);
  const ImageBuffer img = testing::random_image(24, 24, rng);
  save_png(img, corpus / "input" / "a.png");
  save_png(img, corpus / "target" / "a.png");
  save_png(img, corpus / "input" / "b.png");  // no target: skipped
  ASSERT_EQ(run("fit-batch " + q(corpus) + " " + q(dir_ / "out") + " --iters 20 --no-timing"), 0);
  const std::string csv = read_text(dir_ / "out" / "summary.csv");
  std::istringstream ss(csv);
  std::string header, row, mean;
  std::getline(ss, header);
  std::getline(ss, row);
  std::getline(ss, mean);
  EXPECT_EQ(header, "name,psnr_in,psnr_out,ssim_out,de00_in,de00_out,seconds");
  EXPECT_EQ(row.substr(0, 10), "a.png,inf,");
  EXPECT_GE(std::stod(row.substr(10, row.find(',', 10) - 10)), 100.0);
  EXPECT_EQ(mean.substr(0, 5), "mean,");
  EXPECT_TRUE(fs::exists(dir_ / "out" / "a.ncv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "a.png"));
  EXPECT_NE(read_text(dir_ / "stderr.txt").find("skipping b.png"), std::string::npos);
}

TEST_F(CliTest, CnlutSelection) {
  const fs::path lut = dir_ / "param.cnlut";
  ASSERT_EQ(run("make-cnlut " + q(lut) + " --side 8"), 0);
  const auto red = save(testing::constant_image(4, 4, {1, 0, 0}), "red.png");
  ASSERT_EQ(run("--lut " + q(lut) + " decompose " + q(red) + " " + q(dir_ / "m")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "m" / "red.red.prob.png"));

  std::ofstream(dir_ / "broken.cnlut") << "CNLUT 1 8 11\nshort";
  EXPECT_EQ(run("--lut " + q(dir_ / "broken.cnlut") + " decompose " + q(red) + " " + q(dir_ / "m2")), 4);
  EXPECT_EQ(run("--lut " + q(dir_ / "nothing.cnlut") + " decompose " + q(red) + " " + q(dir_ / "m3")), 2);

  ::setenv("NAMEDCURVES_CNLUT", (dir_ / "broken.cnlut").c_str(), 1);
  EXPECT_EQ(run("decompose " + q(red) + " " + q(dir_ / "m4")), 4);
  ::unsetenv("NAMEDCURVES_CNLUT");
}

}  // namespace
}  // namespace namedcurves
