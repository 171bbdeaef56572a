#include <gtest/gtest.h>

#ifdef GAUSSVOL_HAVE_CLI

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gaussvol/cli.hpp"
#include "gaussvol/errors.hpp"

using namespace gaussvol;
using namespace gaussvol::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(GAUSSVOL_TEST_DATA) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gaussvol_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(ReadMatrix, CommentsAndErrors) {
  std::istringstream ok("# header\n1 0\n\n0 2 # trailing\n");
  const Matrix m = read_matrix(ok);
  EXPECT_EQ(m.rows(), 2);
  EXPECT_EQ(m(1, 1), 2.0);

  std::istringstream bad("1 0\n0 zz\n");
  try {
    read_matrix(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
  }
  std::istringstream ragged("1 0\n0\n");
  EXPECT_THROW(read_matrix(ragged), ParseError);
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(read_matrix(empty), ParseError);
}

TEST(ParseRange, Forms) {
  EXPECT_EQ(parse_range("8"), std::vector<double>{8.0});
  EXPECT_EQ(parse_range("0:10:lin:3"), (std::vector<double>{0.0, 5.0, 10.0}));
  const auto log = parse_range("0.5:100:log:12");
  ASSERT_EQ(log.size(), 12u);
  EXPECT_EQ(log.front(), 0.5);
  EXPECT_EQ(log.back(), 100.0);
  EXPECT_NEAR(log[1] / log[0], log[11] / log[10], 1e-12);
  EXPECT_THROW(parse_range("1:2:cubic:3"), InvalidArgument);
  EXPECT_THROW(parse_range("0:2:log:3"), InvalidArgument);
  EXPECT_THROW(parse_range("2:1:lin:3"), InvalidArgument);
  EXPECT_THROW(parse_range("1:2:lin"), InvalidArgument);
  EXPECT_THROW(parse_range("abc"), InvalidArgument);
}

TEST(ReadConfig, KeyValue) {
  std::istringstream in("# c\nreg = adj\n kappa=5 \n\n");
  const auto kv = read_config(in);
  EXPECT_EQ(kv.at("reg"), "adj");
  EXPECT_EQ(kv.at("kappa"), "5");
  std::istringstream bad("reg adj\n");
  EXPECT_THROW(read_config(bad), ParseError);
}

TEST(Classify, Examples) {
  auto r = call({"classify", data("identity.txt")});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "QuantumSeparable, nu=(1,1)");

  r = call({"classify", data("squeezed.txt")});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out.rfind("QuantumEntangled", 0), 0u);
  EXPECT_NE(r.out.find("ppt_nu=(0.3678794412"), std::string::npos) << r.out;

  r = call({"classify", data("half.txt")});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out.rfind("ClassicalOnly", 0), 0u);
}

TEST(Classify, ErrorCodes) {
  auto r = call({"classify", data("bad_token.txt")});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find(":2:5:"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());

  r = call({"classify", data("asymmetric.txt")});
  EXPECT_EQ(r.code, kAsymmetric);
  r = call({"classify", data("missing.txt")});
  EXPECT_EQ(r.code, kUsage);
}

TEST(Metric, Examples) {
  auto r = call({"metric", "--a", "1", "--b", "1", "--c", "0", "--d", "0"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("det_g=1\n"), std::string::npos);
  EXPECT_NE(r.out.find("det_bound: 1 <= 1"), std::string::npos) << r.out;

  r = call({"metric", "--a=2", "--b=1", "--c=0", "--d=0"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("  0.25 "), std::string::npos) << r.out;

  r = call({"metric", "--a", "1", "--b", "1", "--c", "1", "--d", "0"});
  EXPECT_EQ(r.code, kOutsideClassical);
  EXPECT_TRUE(r.out.empty());
}

TEST(Volume, CsvRow) {
  const auto r = call({"volume", "--set", "quantum", "--reg", "energy", "--E", "8", "--samples", "20000", "--seed", "7"});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream lines(r.out);
  std::string version, header, row, extra;
  std::getline(lines, version);
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(version, "# gaussvol volume csv v1");
  EXPECT_EQ(header.rfind("set,reg,param_name,param_value,estimate,std_error", 0), 0u);
  EXPECT_EQ(row.rfind("quantum,energy,E,8,", 0), 0u);
  EXPECT_FALSE(std::getline(lines, extra));
}

TEST(Volume, BoxFailureExitsFive) {
  const auto r = call({"volume", "--reg", "adj", "--kappa", "1e10", "--samples", "10000"});
  EXPECT_EQ(r.code, kBoxNotConverged);
  EXPECT_NE(r.err.find("half_width"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Sweep, CsvAndDeterminism) {
  const std::vector<std::string> args{"sweep", "--reg", "adj", "--kappa", "0.5:100:log:4", "--samples", "10000", "--seed", "7"};
  const auto a = call(args);
  const auto b = call(args);
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::istringstream lines(a.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "# gaussvol sweep csv v1");
  std::getline(lines, line);
  EXPECT_EQ(line,
            "param_name,param_value,vol_classical,err_classical,vol_quantum,err_quantum,"
            "vol_separable,err_separable,vol_entangled,err_entangled,ratio_qc,err_qc,"
            "ratio_sc,err_sc,ratio_ec,err_ec,n_samples,seed");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 17);
    EXPECT_EQ(line.rfind("kappa,", 0), 0u);
    EXPECT_NE(line.find(",10000,7"), std::string::npos);
  }
  EXPECT_EQ(rows, 4);
}

TEST(Sweep, FailedRowsAreNanAndExitFive) {
  const auto r = call({"sweep", "--reg", "adj", "--kappa", "1:1e10:log:2", "--samples", "10000"});
  EXPECT_EQ(r.code, kBoxNotConverged);
  EXPECT_NE(r.out.find("kappa,10000000000,nan"), std::string::npos) << r.out;
}

TEST(Config, FlagsOverrideAndRoundTrip) {
  const auto cfg = scratch("sweep.cfg");
  {
    std::ofstream f(cfg);
    f << "reg = energy\nE = 4:8:lin:2\nsamples = 10000\nseed = 3\n";
  }
  const auto a = call({"sweep", "--config", cfg.string(), "--seed", "5"});
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_NE(a.out.find(",10000,5\n"), std::string::npos) << a.out;

  const auto written = scratch("effective.cfg");
  const auto b = call({"sweep", "--config", cfg.string(), "--write-config", written.string()});
  ASSERT_EQ(b.code, kOk) << b.err;
  const auto c = call({"sweep", "--config", written.string()});
  ASSERT_EQ(c.code, kOk) << c.err;
  EXPECT_EQ(b.out, c.out);
  EXPECT_NE(slurp(written).find("E = 4:8:lin:2"), std::string::npos);
}

TEST(Config, OutFile) {
  const auto path = scratch("volume.csv");
  const auto r = call({"volume", "--E", "8", "--samples", "10000", "--out", path.string()});
  ASSERT_EQ(r.code, kOk);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(path).rfind("# gaussvol volume csv v1", 0), 0u);
}

TEST(Usage, BadInvocations) {
  EXPECT_EQ(call({}).code, kUsage);
  EXPECT_EQ(call({"frobnicate"}).code, kUsage);
  EXPECT_EQ(call({"volume", "--set", "mixed"}).code, kUsage);
  EXPECT_EQ(call({"volume", "--samples", "10"}).code, kUsage);
  EXPECT_EQ(call({"volume", "--E", "1:2:lin:2"}).code, kUsage);
  EXPECT_EQ(call({"metric", "--a", "1"}).code, kUsage);
  EXPECT_EQ(call({"sweep", "--config", "/nonexistent/x.cfg"}).code, kUsage);
  EXPECT_EQ(call({"--help"}).code, kOk);
}

#endif
