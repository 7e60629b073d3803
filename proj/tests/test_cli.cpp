#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "starbody/cli.hpp"

using namespace starbody;
using namespace starbody::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json header(const std::string& csv) {
  const auto line = csv.substr(0, csv.find('\n'));
  REQUIRE(line.rfind("# ", 0) == 0);
  return nlohmann::json::parse(line.substr(2));
}

const std::vector<std::vector<std::string>>& sample_commands() {
  static const std::vector<std::vector<std::string>> cmds{
      {"gaps", "--beta", "golden", "--n", "4"},
      {"gaps", "--beta", "surd:1,0,0,3", "--n", "7", "--y0", "0,0.5"},
      {"cf", "--x", "sqrt2", "--depth", "8"},
      {"ubiquity", "--alpha", "golden", "--trials", "50", "--seed", "4", "--threads", "2"},
      {"rho", "--alpha", "sqrt2", "--psi", "0.1", "--q", "1", "--n", "100,1000"},
      {"coverage-circle", "--alpha", "golden", "--psi", "0.01", "--q", "1", "--n", "10,1000", "--resolution", "5000"},
      {"coverage-2d", "--alpha", "sqrt2", "--psi", "0.05", "--q", "2", "--P", "0,2,4", "--method", "mc", "--samples",
       "2000", "--seed", "9"},
      {"contrast", "--alpha", "sqrt2", "--alpha-rational", "1", "--psi", "0.05", "--q", "1", "--P", "1,4",
       "--resolution", "32"},
      {"check-conditions", "--alpha", "golden", "--n-samples", "50"},
  };
  return cmds;
}

}  // namespace

TEST_CASE("minimal gaps config fills defaults") {
  const auto r = parse_config("command = gaps\nbeta = golden\nn = 4\n");
  REQUIRE(r.ok());
  CHECK(r.config.eps == 1e-9);
  CHECK(r.config.seed == 0);
  CHECK(r.config.format == OutputFormat::Csv);
  CHECK(r.config.out == "-");
  CHECK(r.config.y0 == std::vector<double>{0.0});
}

TEST_CASE("surd syntax for slopes") {
  const auto r = parse_config("command = rho\nalpha = surd:1,1,2\npsi = 0.1\nq = 1\nn = 10\n");
  REQUIRE(r.ok());
  REQUIRE(r.config.alpha->exact);
  CHECK(*r.config.alpha->exact == Surd{1, 1, 2, 1});
  CHECK(r.config.alpha->value == doctest::Approx(1.0 + std::sqrt(2.0)));
  CHECK(r.config.warnings().empty());
  const auto f = parse_config("command = rho\nalpha = 1.5\npsi = 0.1\nq = 1\nn = 10\n");
  REQUIRE(f.ok());
  CHECK(f.config.warnings().size() == 1);
}

TEST_CASE("violations are all reported with field names") {
  const auto r = parse_config("command = rho\nalpha = sqrt2\npsi = -0.1\nn = 10,5\nbogus = 1\n");
  CHECK_FALSE(r.ok());
  auto has = [&](const std::string& s) {
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const std::string& v) { return v.find(s) != std::string::npos; });
  };
  CHECK(has("psi: psi_q must be > 0"));
  CHECK(has("q: required"));
  CHECK(has("n: ladder must be strictly increasing"));
  CHECK(has("bogus:"));
  CHECK(r.violations.size() >= 4);

  const auto types = parse_config("command = coverage-2d\nalpha = x\npsi = abc\nq = 1.5\nP = 1,a\n");
  CHECK(types.violations.size() >= 4);
  CHECK_FALSE(parse_config("beta = golden\n").ok());
  CHECK_FALSE(parse_config("command = fly\n").ok());
  CHECK_FALSE(parse_config("command = gaps\nthis line is wrong\n").ok());
}

TEST_CASE("overrides win over file values") {
  const auto r = parse_config("command = gaps\nbeta = golden\nn = 4\nseed = 3\n", {{"seed", "8"}, {"n", "10"}});
  REQUIRE(r.ok());
  CHECK(r.config.seed == 8);
  CHECK(r.config.n == std::vector<std::int64_t>{10});
}

TEST_CASE("gaps example output") {
  const auto r = run({"gaps", "--beta", "golden", "--n", "4"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line == "y0,length,multiplicity");
  const double expected[] = {0.381966, 0.236068, 0.145898};
  const int mult[] = {1, 2, 1};
  for (int i = 0; i < 3; ++i) {
    REQUIRE(std::getline(in, line));
    double y0 = 0, len = 0;
    int m = 0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%d", &y0, &len, &m) == 3);
    CHECK(std::abs(len - expected[i]) <= 1e-6);
    CHECK(m == mult[i]);
  }
}

TEST_CASE("huge psi covers everything") {
  const auto r = run({"coverage-2d", "--alpha", "sqrt2", "--psi", "10", "--q", "1", "--P", "1", "--resolution", "64"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\n1,1,4096,grid,0\n") != std::string::npos);
}

TEST_CASE("exit codes") {
  const auto missing = run({"coverage-2d", "--alpha", "sqrt2", "--psi", "10", "--P", "1"});
  CHECK(missing.code == kExitValidation);
  CHECK(missing.err.find("q:") != std::string::npos);
  CHECK(run({"launch"}).code == kExitValidation);
  CHECK(run({}).code == kExitValidation);
  CHECK(run({"gaps", "--beta"}).code == kExitValidation);
  CHECK(run({"gaps", "--beta", "golden", "--n", "4", "extra"}).code == kExitValidation);
  CHECK(run({"rho", "--alpha", "0.3", "--psi", "0.1", "--q", "1", "--n", "10"}).code == kExitValidation);
  // float expansion trips the precision guard
  CHECK(run({"cf", "--x", "1.0000000001"}).code == kExitNumeric);
  CHECK(run({"gaps", "--beta", "golden", "--n", "4", "--out", "/nonexistent/dir/out.csv"}).code == kExitIo);
  CHECK(run({"gaps", "--config", "/nonexistent/config.txt"}).code == kExitIo);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("config file and output file") {
  const auto dir = std::filesystem::temp_directory_path() / "starbody_cli_test";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "run.cfg";
  const auto out = dir / "out.json";
  {
    std::ofstream f(cfg);
    f << "# golden gaps\ncommand = gaps\nbeta = golden\nn = 5\nformat = json\n";
  }
  const auto r = run({"--config", cfg.string(), "--out=" + out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  const auto doc = nlohmann::json::parse(in);
  CHECK(doc["meta"]["command"] == "gaps");
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["multiplicity"] == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("every command is deterministic and its header round-trips") {
  for (const auto& args : sample_commands()) {
    CAPTURE(args[0]);
    const auto a = run(args);
    REQUIRE(a.code == 0);
    const auto b = run(args);
    CHECK(a.out == b.out);

    const auto meta = header(a.out);
    CHECK(meta["tool"] == "starbody");
    CHECK(meta["prng"] == "mt19937_64");
    std::string text;
    for (const auto& [k, v] : meta["config"].items()) text += k + " = " + v.get<std::string>() + "\n";
    const auto echoed = parse_config(text);
    REQUIRE(echoed.ok());
    std::vector<std::pair<std::string, std::string>> overrides;
    overrides.emplace_back("command", args[0]);
    for (std::size_t i = 1; i + 1 < args.size(); i += 2) {
      std::string key = args[i].substr(2);
      std::replace(key.begin(), key.end(), '-', '_');
      overrides.emplace_back(key, args[i + 1]);
    }
    const auto original = parse_config("", overrides);
    REQUIRE(original.ok());
    CHECK(echoed.config == original.config);
    CHECK(echoed.config.to_text() == original.config.to_text());
  }
}

TEST_CASE("thread count does not change output") {
  auto a = run({"coverage-2d", "--alpha", "golden", "--psi", "0.05", "--q", "1", "--P", "0,3", "--resolution", "48"});
  auto b = run({"coverage-2d", "--alpha", "golden", "--psi", "0.05", "--q", "1", "--P", "0,3", "--resolution", "48",
                "--threads", "4"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  // the config echo differs by the threads field only
  CHECK(a.out.substr(a.out.find('\n')) == b.out.substr(b.out.find('\n')));
}
