#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "langspin/ingest.hpp"
#include "langspin/report_io.hpp"

namespace fs = std::filesystem;
using namespace langspin;

namespace {

const std::string kCli = LANGSPIN_CLI_PATH;
const std::string kData = LANGSPIN_DATA_DIR;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("langspin_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result run(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = "'" + kCli + "' " + args + " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string fixture_args() {
  return "--edges '" + kData + "/language_edges.csv' --matrix '" + kData + "/sswl_matrix.csv' --aliases '" + kData +
         "/aliases.csv' --parameter Subject-Verb";
}

}  // namespace

TEST(Cli, NoArgumentsPrintsUsage) {
  const auto dir = scratch("usage");
  const auto r = run("", dir);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--temperature"), std::string::npos);
  EXPECT_NE(r.out.find("--weight-scale"), std::string::npos);
}

TEST(Cli, MissingInputNamesThePath) {
  const auto dir = scratch("missing");
  const auto r = run("--model ising --parameter Subject-Verb --edges /no/such/edges.csv --matrix /no/such/m.csv --out '" +
                         (dir / "o").string() + "'",
                     dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/no/such/edges.csv"), std::string::npos) << r.err;
}

TEST(Cli, OracleRefusesLargeInstance) {
  const auto dir = scratch("large");
  std::string edges;
  for (int i = 0; i < 30; ++i) edges += "V" + std::to_string(i) + ",V" + std::to_string((i + 1) % 30) + ",1\n";
  write_text((dir / "ring.csv").string(), edges);
  const auto r = run("--model oracle --edges '" + (dir / "ring.csv").string() + "' --steps 1000", dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("1073741824"), std::string::npos) << r.err;
}

TEST(Cli, OracleTwoVertexCorrelation) {
  const auto dir = scratch("oracle2");
  write_text((dir / "pair.csv").string(), "A,B,1\nB,A,1\n");
  const auto r = run("--model oracle --temperature 1 --steps 1000000 --seed 4 --edges '" + (dir / "pair.csv").string() + "'", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pos = r.out.find("A~B,");
  ASSERT_NE(pos, std::string::npos) << r.out;
  std::istringstream line(r.out.substr(pos + 4, r.out.find('\n', pos) - pos - 4));
  std::string exact, sampled;
  std::getline(line, exact, ',');
  std::getline(line, sampled, ',');
  EXPECT_NEAR(std::stod(exact), std::tanh(2.0), 1e-12);
  EXPECT_NEAR(std::stod(sampled), std::tanh(2.0), 0.02);
  EXPECT_NE(r.out.find("strongly connected yes"), std::string::npos);
  const auto v = r.out.find("detailed balance max violation ");
  ASSERT_NE(v, std::string::npos);
  EXPECT_LE(std::stod(r.out.substr(v + 31)), 1e-12);
}

TEST(Cli, SameSeedGivesIdenticalFiles) {
  const auto dir = scratch("determinism");
  const std::string base = "--model ising --temperature 1.5 --steps 20000 --seed 9 --record-every 10 " + fixture_args();
  ASSERT_EQ(run(base + " --out '" + (dir / "a").string() + "'", dir).code, 0);
  ASSERT_EQ(run(base + " --out '" + (dir / "b").string() + "'", dir).code, 0);
  for (const char* f : {"timeseries.csv", "magnetization.csv", "initial.dot", "final.dot"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    EXPECT_FALSE(slurp(dir / "a" / f).empty()) << f;
  }
  ASSERT_EQ(run("--model ising --temperature 1.5 --steps 20000 --seed 10 --record-every 10 " + fixture_args() + " --out '" +
                    (dir / "c").string() + "'",
                dir)
                .code,
            0);
  EXPECT_NE(slurp(dir / "a" / "timeseries.csv"), slurp(dir / "c" / "timeseries.csv"));
}

TEST(Cli, NegativePairCouplingIsRejected) {
  const auto dir = scratch("negative");
  write_text((dir / "pair.csv").string(), "language,a,b,coupling\nX,1,0,-1\nY,1,1,1\n");
  write_text((dir / "edges.csv").string(), "X,Y,1\n");
  const auto r = run("--model entail --steps 100 --pair-spec '" + (dir / "pair.csv").string() + "' --edges '" +
                         (dir / "edges.csv").string() + "' --out '" + (dir / "o").string() + "'",
                     dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, DeixisTableShape) {
  const auto dir = scratch("deixis");
  const auto r = run("--model entail --scenario deixis4 --temperature 20 --entail-energy 0.1 --steps 10000 --out '" +
                         (dir / "o").string() + "'",
                     dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto table = slurp(dir / "o" / "final_config.csv");
  const auto lines = csv::read_lines(table);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0].fields, (std::vector<std::string>{"language", "strong_deixis", "strong_anaphoricity"}));
  for (std::size_t i = 1; i < lines.size(); ++i) EXPECT_EQ(lines[i].fields.size(), 3u);
  for (const char* f : {"timeseries_strong_deixis.csv", "magnetization_strong_anaphoricity.csv", "final_strong_deixis.dot"}) {
    EXPECT_TRUE(fs::exists(dir / "o" / f)) << f;
  }
}

TEST(Cli, LowTemperatureSubjectVerbEndsAllRed) {
  const auto dir = scratch("lowt");
  const auto r = run("--model ising --temperature 0.000001 --steps 1000000 --seed 1 " + fixture_args() + " --out '" +
                         (dir / "o").string() + "'",
                     dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto dot = slurp(dir / "o" / "final.dot");
  EXPECT_EQ(dot.find("color=blue"), std::string::npos);
  EXPECT_EQ(dot.find("color=gray"), std::string::npos);
  std::size_t red = 0;
  for (std::size_t pos = 0; (pos = dot.find("color=red", pos)) != std::string::npos; ++pos) ++red;
  EXPECT_GE(red, 40u);
}

TEST(Cli, HighTemperatureMagnetizationNearZero) {
  const auto dir = scratch("hight");
  const auto r = run("--model ising --temperature 20 --steps 1000000 --seed 2 " + fixture_args() + " --out '" +
                         (dir / "o").string() + "'",
                     dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = csv::read_lines(slurp(dir / "o" / "magnetization.csv"));
  ASSERT_GT(lines.size(), 40u);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double m = std::stod(lines[i].fields[1]);
    EXPECT_GE(m, -0.05) << lines[i].fields[0];
    EXPECT_LE(m, 0.05) << lines[i].fields[0];
  }
}

TEST(Cli, BadTemperatureIsValidationError) {
  const auto dir = scratch("badtemp");
  EXPECT_EQ(run("--model entail --scenario definiteness3 --temperature -3 --out '" + (dir / "o").string() + "'", dir).code, 1);
  EXPECT_EQ(run("--model entail --scenario nope --out '" + (dir / "o").string() + "'", dir).code, 1);
  EXPECT_EQ(run("--model entail --scenario definiteness3 --temperature zero --steps 1000 --out '" + (dir / "o").string() + "'", dir).code, 0);
}
