#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eim/cli.hpp"
#include "eim/kernelspace.hpp"
#include "eim/tensor.hpp"

using namespace eim;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "eim_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST(Cli, DecomposeTranslationFile) {
  const fs::path p = scratch("trans3.json");
  save_kernel(Kernel2D::from_rows({{0, 0, 0}, {0, 0, 1}, {0, 0, 0}}), p);
  const Result r = cli({"decompose", "--kernel", p.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("beta_sq=0.75\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("energy_ratio=1.73205081\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("gamma=2\n"), std::string::npos) << r.out;
}

TEST(Cli, DecomposeBuiltinAndRandom) {
  EXPECT_NE(cli({"decompose", "--kernel", "gradx3"}).out.find("gamma=inf"), std::string::npos);
  const Result a = cli({"decompose", "--random", "--size", "4", "--seed", "9"});
  const Result b = cli({"decompose", "--random", "--size", "4", "--seed", "9"});
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, DctBasisTable) {
  const Result r = cli({"dct", "--size", "3"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "index,u,v,sym_class");
  EXPECT_NE(r.out.find("4,0,2,mixed"), std::string::npos) << r.out;
}

TEST(Cli, DctProjectToFile) {
  const fs::path out = scratch("coeffs.csv");
  const Result r = cli({"dct", "--kernel", "gradx3", "--out", out.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const std::string csv = read_file(out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,u,v,sym_class,omega,energy_fraction");
  EXPECT_NE(csv.find("3,1,0,odd,"), std::string::npos);
}

TEST(Cli, PropagateGradient) {
  const fs::path trace = scratch("trace.csv"), frames = scratch("frames");
  fs::remove_all(frames);
  const Result r = cli({"propagate", "--kernel", "gradx3", "--steps", "6", "--trace", trace.string(),
                        "--frames-dir", frames.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("centroid_x=6 "), std::string::npos) << r.out;
  const auto rows = csv_rows(read_file(trace));
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0][1], "centroid_x");
  EXPECT_EQ(rows[7][0], "6");
  EXPECT_NEAR(std::stod(rows[7][1]), 6.0, 1e-12);
  EXPECT_NEAR(std::stod(rows[7][2]), 0.0, 1e-12);
  EXPECT_TRUE(fs::exists(frames / "frame_0000.pgm"));
  EXPECT_TRUE(fs::exists(frames / "frame_0006.pgm"));
}

TEST(Cli, PropagateMixedAndCircle) {
  const Result r = cli({"propagate", "--pattern", "circle", "--radius", "3", "--beta-sq", "0.5", "--steps", "10",
                        "--mode", "row"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const Result e = cli({"propagate", "--kernel", "emb2x2", "--steps", "4"});
  EXPECT_EQ(e.code, kExitOk) << e.err;
}

TEST(Cli, SweepCsvEndpoints) {
  const Result r = cli({"sweep", "--size", "3", "--activation", "relu", "--grid", "5", "--threads", "2"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("beta_sq,size,activation,measured_ratio_sq,predicted_ratio_sq\n"), std::string::npos);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[1][0], "0");
  EXPECT_LE(std::stod(rows[1][3]), 1e-12);
  EXPECT_EQ(rows[5][0], "1");
  EXPECT_NEAR(std::stod(rows[5][3]), 1.0, 1e-12);
  EXPECT_EQ(rows[5][4], "1");
  EXPECT_NE(r.out.find("# size=3"), std::string::npos);
}

TEST(Cli, SweepIsDeterministic) {
  const std::vector<std::string> args{"sweep", "--size", "3,5", "--activation", "relu,identity", "--grid", "6"};
  const Result a = cli(args), b = cli(args);
  EXPECT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SweepWritesFiles) {
  const fs::path csv = scratch("sweep.csv"), gp = scratch("sweep.dat");
  const Result r = cli({"sweep", "--grid", "3", "--out", csv.string(), "--gnuplot", gp.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_FALSE(read_file(csv).empty());
  EXPECT_FALSE(read_file(gp).empty());
}

TEST(Cli, SpectraAndTruncate) {
  const fs::path in = scratch("layer.json"), out = scratch("layer_t.eimt");
  WeightTensor t("conv", {3, 1, 2});
  t.set_kernel(0, 0, Kernel2D::from_rows({{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}));
  t.set_kernel(0, 1, Kernel2D::from_rows({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}));
  save_tensor(t, in);
  const Result s = cli({"spectra", "--tensor", in.string()});
  EXPECT_EQ(s.code, kExitOk) << s.err;
  EXPECT_NE(s.out.find("conv,0,0,0.8\n"), std::string::npos) << s.out;
  const Result tr = cli({"truncate", "--tensor", in.string(), "--keep", "1", "--out", out.string()});
  EXPECT_EQ(tr.code, kExitOk) << tr.err;
  const WeightTensor back = load_tensor(out);
  EXPECT_NEAR(back.kernel(0, 0)(2, 0), 1.0, 1e-6);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"sweep", "--size", "4"}).code, kExitUsage);
  EXPECT_EQ(cli({"propagate", "--steps", "abc"}).code, kExitUsage);
  EXPECT_EQ(cli({"truncate", "--keep", "1"}).code, kExitUsage);
}

TEST(Cli, DataErrors) {
  EXPECT_EQ(cli({"decompose"}).code, kExitData);
  EXPECT_EQ(cli({"decompose", "--kernel", "/nonexistent/kernel.json"}).code, kExitData);
  EXPECT_EQ(cli({"propagate", "--kernel", "gradx3", "--activation", "tanh"}).code, kExitData);
  EXPECT_EQ(cli({"sweep", "--steps", "4"}).code, kExitData);
  const fs::path bad = scratch("bad.json");
  std::ofstream(bad) << R"({"format":"eim-tensor","version":1,"shape":[3,3,2,2],"data":[1]})";
  const Result r = cli({"spectra", "--tensor", bad.string()});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, Help) {
  const Result r = cli({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("propagate"), std::string::npos);
}
