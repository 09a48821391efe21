#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "transeig/cli.hpp"

using namespace transeig;
using namespace transeig::cli;

namespace {

struct Argv {
  std::vector<std::string> words;
  std::vector<const char*> ptrs;
  Argv(std::initializer_list<std::string> args) : words{"transeig"} {
    words.insert(words.end(), args);
    for (const auto& w : words) ptrs.push_back(w.c_str());
  }
  int argc() const { return static_cast<int>(ptrs.size()); }
  const char* const* argv() const { return ptrs.data(); }
};

ScanConfig parse(std::initializer_list<std::string> args) {
  Argv a(args);
  std::ostringstream help;
  auto cfg = parse_config(a.argc(), a.argv(), help);
  if (!cfg) throw std::logic_error("help requested");
  return *cfg;
}

int invoke(std::initializer_list<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  Argv a(args);
  std::ostringstream out, err;
  const int code = main_entry(a.argc(), a.argv(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("transeig_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::filesystem::path dir_;
};

}  // namespace

TEST(ParseConfig, Defaults) {
  const ScanConfig cfg = parse({"scan", "--shape", "disk", "--interval", "1.6", "2.2", "--subdivisions", "100",
                                "--output", "x.csv"});
  EXPECT_EQ(cfg.command, Command::scan);
  EXPECT_EQ(cfg.shape, "disk");
  EXPECT_EQ(cfg.mu, 16.0);
  EXPECT_EQ(cfg.n, 32);
  EXPECT_EQ(cfg.m, 64);
  EXPECT_EQ(cfg.radius, 1e-3);
  EXPECT_FALSE(cfg.eta.has_value());
  EXPECT_EQ(cfg.grading, 3.0);
  EXPECT_EQ(cfg.seed, 0u);
  EXPECT_EQ(cfg.workers, 1u);
  EXPECT_EQ(cfg.a, 1.6);
  EXPECT_EQ(cfg.b, 2.2);
  EXPECT_EQ(cfg.subdivisions, 100);
  EXPECT_FALSE(cfg.window.has_value());
}

TEST(ParseConfig, ExplicitValues) {
  const ScanConfig cfg = parse({"scan", "--shape", "pentagon", "--mu", "9", "--interval", "2", "3", "--subdivisions",
                                "7", "--n", "16", "--m", "32", "--radius", "0.005", "--eta", "1e-4", "--grading", "4",
                                "--seed", "11", "--workers", "3", "--output", "p.csv"});
  EXPECT_EQ(cfg.shape, "pentagon");
  EXPECT_EQ(cfg.mu, 9.0);
  EXPECT_EQ(cfg.n, 16);
  EXPECT_EQ(cfg.m, 32);
  EXPECT_EQ(cfg.radius, 0.005);
  ASSERT_TRUE(cfg.eta.has_value());
  EXPECT_EQ(*cfg.eta, 1e-4);
  EXPECT_EQ(cfg.grading, 4.0);
  EXPECT_EQ(cfg.seed, 11u);
  EXPECT_EQ(cfg.workers, 3u);
  EXPECT_EQ(parse({"scan", "--interval", "1", "2", "--eta", "auto", "--output", "o"}).eta, std::nullopt);
}

TEST(ParseConfig, ComplexWindow) {
  const ScanConfig cfg =
      parse({"scan-complex", "--shape", "disk", "--window", "4.85", "4.95", "0.5", "0.7", "20", "200", "--output", "c"});
  EXPECT_EQ(cfg.command, Command::scan_complex);
  ASSERT_TRUE(cfg.window.has_value());
  EXPECT_EQ(cfg.window->re_min, 4.85);
  EXPECT_EQ(cfg.window->im_max, 0.7);
  EXPECT_EQ(cfg.window->re_cells, 20);
  EXPECT_EQ(cfg.window->im_cells, 200);
  EXPECT_THROW(parse({"scan-complex", "--output", "c"}), ValidationError);
  EXPECT_THROW(parse({"scan-complex", "--window", "1", "2", "0", "1", "2.5", "3", "--output", "c"}), UsageError);
  EXPECT_THROW(parse({"scan-complex", "--window", "2", "1", "0", "1", "2", "3", "--output", "c"}), ValidationError);
}

TEST(ParseConfig, RejectsInvariantViolations) {
  EXPECT_THROW(parse({"scan", "--interval", "1.6", "2.2", "--radius", "0.1", "--output", "o"}), ValidationError);
  EXPECT_THROW(parse({"scan", "--interval", "1.6", "2.2", "--radius", "0", "--output", "o"}), ValidationError);
  EXPECT_NO_THROW(parse({"scan", "--interval", "1.6", "2.2", "--radius", "0.05", "--output", "o"}));
  EXPECT_THROW(parse({"scan", "--interval", "2.2", "1.6", "--output", "o"}), ValidationError);
  EXPECT_THROW(parse({"scan", "--interval", "1.6", "1.6", "--output", "o"}), ValidationError);
  EXPECT_THROW(parse({"scan", "--interval", "1.6", "2.2", "--subdivisions", "0", "--output", "o"}), ValidationError);
  EXPECT_THROW(parse({"scan", "--interval", "1.6", "2.2", "--eta", "1", "--output", "o"}), ValidationError);
  EXPECT_THROW(parse({"scan", "--interval", "1.6", "2.2", "--eta", "-1e-5", "--output", "o"}), ValidationError);
  EXPECT_THROW(parse({"scan", "--interval", "1.6", "2.2", "--mu", "1", "--output", "o"}), ValidationError);
  EXPECT_THROW(parse({"scan", "--interval", "1.6", "2.2"}), ValidationError);
}

TEST(ParseConfig, UsageErrorsNameTheFlag) {
  auto message = [](std::initializer_list<std::string> args) {
    try {
      parse(args);
    } catch (const UsageError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message({"scan", "--interval", "1", "2", "--eta", "often", "--output", "o"}).find("--eta"),
            std::string::npos);
  EXPECT_NE(message({"scan", "--interval", "1", "2", "--shape", "hexagon", "--output", "o"}).find("--shape"),
            std::string::npos);
  EXPECT_NE(message({"scan", "--interval", "1", "--output", "o"}).find("--interval"), std::string::npos);
  EXPECT_NE(message({"scan", "--output", "o"}).find("--interval"), std::string::npos);
  EXPECT_NE(message({"scan", "--interval", "1", "2", "--bogus", "3"}).find("--bogus"), std::string::npos);
}

TEST(MainEntry, NoArgumentsPrintsUsage) {
  std::string out, err;
  EXPECT_NE(invoke({}, &out, &err), 0);
  EXPECT_NE(err.find("scan"), std::string::npos);
  EXPECT_NE(err.find("disk-oracle"), std::string::npos);
}

TEST(MainEntry, HelpExitsZero) {
  std::string out;
  EXPECT_EQ(invoke({"--help"}, &out), 0);
  EXPECT_NE(out.find("scan-complex"), std::string::npos);
}

TEST(MainEntry, RadiusAboveLimitIsNonzero) {
  std::string err;
  EXPECT_EQ(invoke({"scan", "--interval", "1.6", "2.2", "--radius", "0.1", "--output", "o"}, nullptr, &err), 2);
  EXPECT_NE(err.find("--radius"), std::string::npos);
}

TEST(FormatNumber, SeventeenDigitsAndSentinel) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1.988), "1.988");
  EXPECT_EQ(format_number(std::nan("")), "ERR");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST_F(CliFiles, ConfigFileSuppliesValuesAndFlagsWin) {
  {
    std::ofstream f(path("run.cfg"));
    f << "# disk setup\n"
         "shape = peanut\n"
         "interval = 1.3 1.6   # trailing comment\n"
         "subdivisions = 12\n"
         "radius = 0.002\n"
         "eta = 1e-5\n"
         "\n"
         "output = from_file.csv\n";
  }
  Argv a({"--config", path("run.cfg"), "scan", "--subdivisions", "40", "--output", "cli.csv"});
  const auto cfg = parse_config(a.argc(), a.argv());
  ASSERT_TRUE(cfg);
  EXPECT_EQ(cfg->shape, "peanut");
  EXPECT_EQ(cfg->a, 1.3);
  EXPECT_EQ(cfg->b, 1.6);
  EXPECT_EQ(cfg->radius, 0.002);
  ASSERT_TRUE(cfg->eta);
  EXPECT_EQ(*cfg->eta, 1e-5);
  EXPECT_EQ(cfg->subdivisions, 40);
  EXPECT_EQ(cfg->output, "cli.csv");
  EXPECT_EQ(cfg->n, 32);
}

TEST_F(CliFiles, ConfigFileRejectsUnknownKeys) {
  {
    std::ofstream f(path("bad.cfg"));
    f << "shape = disk\ncolour = blue\n";
  }
  std::string err;
  EXPECT_EQ(invoke({"--config", path("bad.cfg"), "scan", "--interval", "1", "2", "--output", "o"}, nullptr, &err), 2);
  EXPECT_NE(err.find("colour"), std::string::npos);
  {
    std::ofstream f(path("syntax.cfg"));
    f << "shape disk\n";
  }
  EXPECT_EQ(invoke({"--config", path("syntax.cfg"), "scan", "--interval", "1", "2", "--output", "o"}), 2);
  {
    std::ofstream f(path("range.cfg"));
    f << "radius = 0.2\n";
  }
  EXPECT_EQ(invoke({"--config", path("range.cfg"), "scan", "--interval", "1", "2", "--output", "o"}), 2);
  EXPECT_EQ(invoke({"--config", path("missing.cfg"), "scan", "--interval", "1", "2", "--output", "o"}), 2);
}

TEST_F(CliFiles, ScanWritesRowsInGridOrder) {
  const std::string out = path("disk.csv");
  ASSERT_EQ(invoke({"scan", "--shape", "disk", "--interval", "1.6", "2.2", "--subdivisions", "4", "--n", "16", "--m",
                    "16", "--output", out}),
            0);
  const auto rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "kappa_re,kappa_im,indicator,log10_indicator,eta_used,condition_estimate");
  double previous = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double k = std::stod(rows[i].substr(0, rows[i].find(',')));
    EXPECT_GT(k, previous);
    previous = k;
  }
  EXPECT_EQ(rows[1].substr(0, rows[1].find(',')), "1.6000000000000001");
  EXPECT_EQ(lines(slurp(out + ".detected.csv")).at(0), "kappa_re,kappa_im,indicator");
  EXPECT_EQ(slurp(out).find('\r'), std::string::npos);
}

TEST_F(CliFiles, PointFailuresBecomeSentinelRows) {
  const std::string out = path("square.csv");
  std::string err;
  ASSERT_EQ(invoke({"scan", "--shape", "square", "--interval", "1.7", "1.8", "--subdivisions", "2", "--n", "8", "--eta",
                    "0", "--output", out},
                   nullptr, &err),
            0)
      << err;
  const auto rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NE(rows[i].find(",ERR,ERR,"), std::string::npos) << rows[i];
  EXPECT_EQ(lines(slurp(out + ".detected.csv")).size(), 1u);
}

TEST_F(CliFiles, UnwritableOutputExitsOne) {
  std::string err;
  EXPECT_EQ(invoke({"scan", "--interval", "1.6", "1.7", "--subdivisions", "1", "--n", "8", "--m", "8", "--output",
                    path("no/such/dir/x.csv")},
                   nullptr, &err),
            1);
  EXPECT_NE(err.find("cannot write"), std::string::npos);
}

TEST_F(CliFiles, RunsAreByteIdenticalAcrossRunsAndWorkerCounts) {
  auto run_with = [&](const std::string& name, const std::string& workers) {
    const std::string out = path(name);
    EXPECT_EQ(invoke({"scan", "--shape", "peanut", "--interval", "1.3", "1.6", "--subdivisions", "6", "--n", "16",
                      "--m", "32", "--workers", workers, "--output", out}),
              0);
    return slurp(out) + slurp(out + ".detected.csv");
  };
  const std::string first = run_with("a.csv", "1");
  EXPECT_EQ(first, run_with("b.csv", "1"));
  EXPECT_EQ(first, run_with("c.csv", "3"));
  EXPECT_EQ(first, run_with("d.csv", "8"));
}

TEST_F(CliFiles, ComplexScanIsWorkerIndependent) {
  auto run_with = [&](const std::string& name, const std::string& workers) {
    const std::string out = path(name);
    EXPECT_EQ(invoke({"scan-complex", "--shape", "disk", "--window", "4.85", "4.95", "0.5", "0.7", "2", "3", "--n",
                      "16", "--m", "16", "--workers", workers, "--output", out}),
              0);
    return slurp(out);
  };
  const std::string one = run_with("a.csv", "1");
  EXPECT_EQ(lines(one).size(), 1u + 3u * 4u);
  EXPECT_EQ(one, run_with("b.csv", "4"));
}

TEST_F(CliFiles, DiskOracleTable) {
  const std::string out = path("oracle.csv");
  ASSERT_EQ(invoke({"disk-oracle", "--interval", "1.5", "5", "--output", out}), 0);
  const auto rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0], "kappa,order");
  const double expected[] = {1.9880, 2.6129, 3.2267, 3.7409, 3.8264, 4.2958, 4.4154, 4.9418, 4.9959};
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(std::stod(rows[i + 1]), expected[i], 5e-4) << rows[i + 1];
  EXPECT_EQ(rows[1].substr(rows[1].find(',') + 1), "0");
}

TEST(DiskOracleCommand, StdoutAndEdgeCases) {
  std::string out;
  Argv a({"disk-oracle", "--interval", "3", "3"});
  const auto cfg = parse_config(a.argc(), a.argv());
  ASSERT_TRUE(cfg);
  testing::internal::CaptureStdout();
  EXPECT_EQ(run(*cfg), 0);
  EXPECT_EQ(testing::internal::GetCapturedStdout(), "kappa,order\n");

  Argv b({"disk-oracle", "--mu", "4", "--interval", "1", "8", "--max-order", "12"});
  const auto cfg4 = parse_config(b.argc(), b.argv());
  ASSERT_TRUE(cfg4);
  testing::internal::CaptureStdout();
  EXPECT_EQ(run(*cfg4), 0);
  const auto rows = lines(testing::internal::GetCapturedStdout());
  ASSERT_GE(rows.size(), 2u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double k = std::stod(rows[i]);
    const int m = std::stoi(rows[i].substr(rows[i].find(',') + 1));
    EXPECT_LE(std::abs(disk_determinant(k, m, 4.0)), 1e-6) << rows[i];
  }

  EXPECT_EQ(invoke({"disk-oracle", "--interval", "1.5", "5", "--max-order", "13"}), 2);
  EXPECT_EQ(invoke({"disk-oracle", "--interval", "0", "5"}), 2);
  EXPECT_EQ(invoke({"disk-oracle", "--interval", "1", "5", "--radius", "0.001"}), 2);
}
