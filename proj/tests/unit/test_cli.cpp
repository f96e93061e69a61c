#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using namespace rimpute;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  const fs::path dir = fs::path(RIMPUTE_TEST_TMPDIR) /
                       ::testing::UnitTest::GetInstance()->current_test_info()->name();
  fs::create_directories(dir);
  return dir;
}

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rimpute");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

csv::Table read_csv(const fs::path& p) {
  std::ifstream in(p);
  return csv::read(in);
}

/// Simulated scenario data as a CSV with columns x1 (incomplete), x2, x3.
IncompleteDataset write_scenario_csv(const fs::path& p, const std::string& mechanism, int n,
                                     std::uint64_t seed) {
  RngStream rng(seed, 0);
  const CompleteData full = generate_complete_data(beta_values(BetaSet::strong), n, rng);
  const NonresponseParams psi = *builtin_mechanism(mechanism);
  const ResponseIndicator r = generate_missingness(full.target, full.covariates.leftCols(1), psi, rng);
  IncompleteDataset data = IncompleteDataset::from_complete(full.target, full.covariates, r);
  csv::Table t;
  t.header = {"x1", "x2", "x3"};
  t.columns = {data.target(), full.covariates.col(0), full.covariates.col(1)};
  std::ofstream out(p);
  csv::write(out, t);
  return data;
}

}  // namespace

TEST(CliImpute, NoMissingValuesWritesCopiesWithWarning) {
  const auto dir = tmp_dir();
  write(dir / "in.csv", "y,z\n1,0\n2,1\n3,0\n4,1\n5,2\n6,0\n");
  const auto r = run_cli({"impute", "--input", (dir / "in.csv").string(), "--target", "y", "--covariates",
                          "z", "--m", "3", "--output-prefix", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  for (int k = 1; k <= 3; ++k) {
    const csv::Table t = read_csv(dir / ("out_imp" + std::to_string(k) + ".csv"));
    EXPECT_EQ(t.column("y"), Eigen::VectorXd::LinSpaced(6, 1, 6));
    EXPECT_FALSE(t.comments.empty());
  }
  EXPECT_TRUE(fs::exists(dir / "out_pooled.json"));
  EXPECT_TRUE(fs::exists(dir / "out_run.json"));
}

TEST(CliImpute, TwoRowsIsTooFew) {
  const auto dir = tmp_dir();
  write(dir / "in.csv", "y,z\n1,0\n,1\n");
  const auto r = run_cli({"impute", "--input", (dir / "in.csv").string(), "--target", "y", "--covariates",
                          "z", "--output-prefix", (dir / "out").string()});
  EXPECT_EQ(r.code, cli::kInputError);
  EXPECT_NE(r.err.find("TooFewRows"), std::string::npos) << r.err;
}

TEST(CliImpute, ExitCodes) {
  const auto dir = tmp_dir();
  write(dir / "bad.csv", "y,z\n1,0\nabc,1\n");
  auto r = run_cli({"impute", "--input", (dir / "bad.csv").string(), "--target", "y", "--output-prefix",
                    (dir / "out").string()});
  EXPECT_EQ(r.code, cli::kInputError);

  r = run_cli({"impute", "--input", (dir / "missing_file.csv").string(), "--target", "y",
               "--output-prefix", (dir / "out").string()});
  EXPECT_EQ(r.code, cli::kInputError);

  r = run_cli({"impute", "--input", (dir / "bad.csv").string(), "--target", "y", "--method", "zzz",
               "--output-prefix", (dir / "out").string()});
  EXPECT_EQ(r.code, cli::kInputError);

  // Collinear covariates: a statistical failure.
  std::string text = "y,a,b\n";
  for (int i = 0; i < 20; ++i) {
    text += (i < 4 ? std::string() : std::to_string(i % 3)) + "," + std::to_string(i) + "," +
            std::to_string(2 * i) + "\n";
  }
  write(dir / "collinear.csv", text);
  r = run_cli({"impute", "--input", (dir / "collinear.csv").string(), "--target", "y", "--covariates", "a,b",
               "--method", "mar", "--output-prefix", (dir / "out").string()});
  EXPECT_EQ(r.code, cli::kStatisticalError) << r.err;
  EXPECT_NE(r.err.find("RankDeficient"), std::string::npos);

  r = run_cli({"bogus"});
  EXPECT_EQ(r.code, cli::kInputError);
}

TEST(CliImpute, RoundTripMatchesLibraryAndIsByteIdentical) {
  const auto dir = tmp_dir();
  const IncompleteDataset data = write_scenario_csv(dir / "in.csv", "mnar1", 300, 7);
  const std::vector<std::string> args{"impute", "--input", (dir / "in.csv").string(), "--target", "x1",
                                      "--covariates", "x2,x3", "--method", "ri", "--m", "3",
                                      "--seed", "42", "--output-prefix", (dir / "a").string()};
  ASSERT_EQ(run_cli(args).code, 0);

  RiConfig config;
  config.num_imputations = 3;
  config.seed = 42;
  const RiResult expected = ri_impute(data, config);
  for (int k = 0; k < 3; ++k) {
    const csv::Table t = read_csv(dir / ("a_imp" + std::to_string(k + 1) + ".csv"));
    const Eigen::VectorXd& got = t.column("x1");
    ASSERT_EQ(got.size(), data.rows());
    EXPECT_LT((got - expected.imputations[static_cast<std::size_t>(k)]).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(t.column("x2"), data.covariates().col(0));
  }

  const auto pooled = nlohmann::json::parse(slurp(dir / "a_pooled.json"));
  ASSERT_EQ(pooled["estimates"].size(), 3u);
  for (const auto& row : pooled["estimates"]) {
    for (const char* key : {"method", "coefficient", "estimate", "se", "ci_low", "ci_high", "df"}) {
      EXPECT_TRUE(row.contains(key)) << key;
    }
    EXPECT_EQ(row["method"], "ri");
  }
  const PooledEstimate lib = analyse_and_pool(data.covariates(), expected.imputations);
  EXPECT_NEAR(pooled["estimates"][1]["estimate"].get<double>(), lib.q_bar[1], 1e-12);
  EXPECT_EQ(pooled["final_delta_adj"].size(), 3u);

  // Same command again: byte-identical data and summary files.
  const std::string first_imp = slurp(dir / "a_imp2.csv");
  const std::string first_pooled = slurp(dir / "a_pooled.json");
  ASSERT_EQ(run_cli(args).code, 0);
  EXPECT_EQ(slurp(dir / "a_imp2.csv"), first_imp);
  EXPECT_EQ(slurp(dir / "a_pooled.json"), first_pooled);

  const auto manifest = nlohmann::json::parse(slurp(dir / "a_run.json"));
  EXPECT_EQ(manifest["seed"], 42);
  EXPECT_TRUE(manifest.contains("started_utc"));
  EXPECT_EQ(manifest["outputs"].size(), 4u);
  EXPECT_NE(first_imp.find("# input: " + (dir / "in.csv").string() + " fnv1a64:"), std::string::npos);
}

TEST(CliImpute, MissingCellsStayEmptyOnlyInCompleteCaseOutput) {
  const auto dir = tmp_dir();
  const IncompleteDataset data = write_scenario_csv(dir / "in.csv", "mcar", 120, 8);
  const auto r = run_cli({"impute", "--input", (dir / "in.csv").string(), "--target", "x1", "--covariates",
                          "x2,x3", "--method", "cc", "--output-prefix", (dir / "cc").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const csv::Table t = read_csv(dir / "cc_cc.csv");
  EXPECT_EQ(static_cast<std::size_t>(t.rows()), data.observed_count());
  EXPECT_TRUE(t.column("x1").allFinite());
  const auto pooled = nlohmann::json::parse(slurp(dir / "cc_pooled.json"));
  EXPECT_EQ(pooled["estimates"][0]["method"], "cc");
}

TEST(CliImpute, SeedFromEnvironment) {
  const auto dir = tmp_dir();
  write_scenario_csv(dir / "in.csv", "mar", 150, 9);
  ::setenv(cli::kSeedEnv, "1234", 1);
  const auto r = run_cli({"impute", "--input", (dir / "in.csv").string(), "--target", "x1", "--covariates",
                          "x2", "--method", "mar", "--m", "2", "--output-prefix", (dir / "e").string()});
  ::unsetenv(cli::kSeedEnv);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "e_run.json"))["seed"], 1234);
}

TEST(CliImpute, RiCloserToTruthThanMarUnderMnar3) {
  const auto dir = tmp_dir();
  int ri_closer = 0;
  constexpr int kRuns = 50;
  for (int run = 0; run < kRuns; ++run) {
    const fs::path input = dir / ("in" + std::to_string(run) + ".csv");
    write_scenario_csv(input, "mnar3", 1000, 1000 + static_cast<std::uint64_t>(run));
    double estimate[2] = {0, 0};
    int slot = 0;
    for (const char* method : {"ri", "mar"}) {
      const std::string prefix = (dir / ("o" + std::to_string(run) + method)).string();
      const auto r = run_cli({"impute", "--input", input.string(), "--target", "x1", "--covariates", "x2,x3",
                              "--selection-covariates", "x2", "--method", method, "--seed",
                              std::to_string(run + 1), "--output-prefix", prefix});
      ASSERT_EQ(r.code, 0) << r.err;
      estimate[slot++] = nlohmann::json::parse(slurp(prefix + "_pooled.json"))["estimates"][0]["estimate"];
    }
    ri_closer += std::abs(estimate[0] - 1.0) < std::abs(estimate[1] - 1.0) ? 1 : 0;
  }
  EXPECT_GE(ri_closer, 45);
}

TEST(CliSimulate, ProvenanceHeaderAndBinaryCoverage) {
  const auto dir = tmp_dir();
  const std::string out = (dir / "mnar3.csv").string();
  const auto r = run_cli({"simulate", "--scenario", "mnar3", "--beta", "strong", "--n", "200",
                          "--replications", "1", "--seed", "5", "--output", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(out);
  EXPECT_NE(text.find("#   beta: 1,0.5,1"), std::string::npos);
  EXPECT_NE(text.find("#   psi0: -2\n"), std::string::npos);
  EXPECT_NE(text.find("#   psi1: 1.5\n"), std::string::npos);
  EXPECT_NE(text.find("#   psi2: 0\n"), std::string::npos);
  const csv::Table t = [&] {
    std::istringstream in(text);
    // Non-numeric columns: read the coverage field by hand.
    std::string line;
    csv::Table table;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      table.comments.push_back(line);
    }
    return table;
  }();
  ASSERT_EQ(t.comments.size(), 10u);
  EXPECT_EQ(t.comments[0], "mechanism,method,coefficient,true,mean_estimate,coverage,mc_se,missing_rate");
  for (std::size_t i = 1; i < t.comments.size(); ++i) {
    const auto fields = csv::detail::split_line(t.comments[i]);
    ASSERT_EQ(fields.size(), 8u);
    EXPECT_TRUE(fields[5] == "0" || fields[5] == "1") << t.comments[i];
  }

  const std::string mcar = (dir / "mcar.csv").string();
  ASSERT_EQ(run_cli({"simulate", "--scenario", "mcar", "--n", "100", "--replications", "1", "--output", mcar})
                .code,
            0);
  const std::string mcar_text = slurp(mcar);
  EXPECT_NE(mcar_text.find("#   psi1: 0\n"), std::string::npos);
  EXPECT_NE(mcar_text.find("#   psi2: 0\n"), std::string::npos);
}

TEST(CliSimulate, UnknownScenarioAndDeterminism) {
  const auto dir = tmp_dir();
  auto r = run_cli({"simulate", "--scenario", "mnar7", "--output", (dir / "x.csv").string()});
  EXPECT_EQ(r.code, cli::kInputError);

  const std::vector<std::string> base{"simulate", "--scenario", "mar,mnar2", "--n", "100",
                                      "--replications", "4", "--m", "2", "--iterations", "3"};
  auto a = base;
  a.insert(a.end(), {"--threads", "1", "--output", (dir / "a.csv").string()});
  auto b = base;
  b.insert(b.end(), {"--threads", "3", "--output", (dir / "a.csv").string()});
  ASSERT_EQ(run_cli(a).code, 0);
  const std::string first = slurp(dir / "a.csv");
  ASSERT_EQ(run_cli(a).code, 0);
  EXPECT_EQ(slurp(dir / "a.csv"), first);
  // The command line differs, so compare the table bodies only.
  ASSERT_EQ(run_cli(b).code, 0);
  auto body = [](const std::string& s) { return s.substr(s.find("mechanism,method")); };
  EXPECT_EQ(body(slurp(dir / "a.csv")), body(first));
}

TEST(CliSimulate, ScenarioFile) {
  const auto dir = tmp_dir();
  write(dir / "s.txt",
        "# custom selection\nmechanism = tilted\nbeta = 2, 0.5, -1\npsi = -1, 0.5, 0.2, 0.1\n"
        "n = 120\nreplications = 2\nm = 2\niterations = 2\nseed = 77\n");
  const ScenarioConfig c = cli::parse_scenario_file(slurp(dir / "s.txt"));
  EXPECT_EQ(c.mechanism_label, "tilted");
  EXPECT_EQ(c.beta, (std::array<double, 3>{2.0, 0.5, -1.0}));
  EXPECT_EQ(c.psi.psi_z.size(), 2);
  EXPECT_EQ(c.n, 120);
  EXPECT_EQ(c.master_seed, 77u);

  const auto r = run_cli({"simulate", "--scenario-file", (dir / "s.txt").string(), "--replications", "3",
                          "--output", (dir / "o.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(dir / "o.csv");
  EXPECT_NE(text.find("replications: 3"), std::string::npos);
  EXPECT_NE(text.find("#   psi3: 0.1"), std::string::npos);
  EXPECT_NE(text.find("tilted,RI,beta1,2,"), std::string::npos);

  write(dir / "bad.txt", "psi = 1\n");
  EXPECT_EQ(run_cli({"simulate", "--scenario-file", (dir / "bad.txt").string(), "--output",
                     (dir / "o.csv").string()})
                .code,
            cli::kInputError);
  EXPECT_THROW(cli::parse_scenario_file("colour = red\npsi = 0, 0\n"), Error);

  // Without a seed key the command-line default applies.
  EXPECT_EQ(cli::parse_scenario_file("psi = 0, 0\n").master_seed, 1u);
  write(dir / "noseed.txt", "psi = -1, 0.5\nn = 120\nreplications = 2\nm = 2\niterations = 2\n");
  ASSERT_EQ(run_cli({"simulate", "--scenario-file", (dir / "noseed.txt").string(), "--output",
                     (dir / "o.csv").string()})
                .code,
            0);
  EXPECT_NE(slurp(dir / "o.csv").find("# seed: 1\n"), std::string::npos);
}

TEST(CliDensity, NormalGroupAndIdenticalGroups) {
  const auto dir = tmp_dir();
  RngStream rng(3, 3);
  std::string text = "v\n";
  for (int i = 0; i < 20000; ++i) text += csv::format_cell(rng.standard_normal()) + "\n";
  write(dir / "n.csv", text);
  const std::string spec = (dir / "n.csv").string() + ":v";
  const auto r = run_cli({"density", "--group", "a=" + spec, "--group", "b=" + spec, "--output",
                          (dir / "d.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir / "d.csv");
  std::string line;
  std::vector<std::string> a, b;
  double peak = 0.0;
  while (std::getline(in, line)) {
    if (line[0] == '#' || line == "x,density,group") continue;
    const auto f = csv::detail::split_line(line);
    ASSERT_EQ(f.size(), 3u);
    (f[2] == "a" ? a : b).push_back(f[0] + "," + f[1]);
    if (f[2] == "a") peak = std::max(peak, std::stod(f[1]));
  }
  EXPECT_EQ(a.size(), 512u);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(peak, 0.3989, 0.05 * 0.3989);

  write(dir / "c.csv", "v\n1\n1\n1\n");
  EXPECT_EQ(run_cli({"density", "--group", "c=" + (dir / "c.csv").string() + ":v", "--output",
                     (dir / "e.csv").string()})
                .code,
            cli::kStatisticalError);
}

TEST(CliDensity, ImputedCurveShiftedLeftUnderMnar3) {
  const auto dir = tmp_dir();
  write_scenario_csv(dir / "in.csv", "mnar3", 1000, 55);
  ASSERT_EQ(run_cli({"impute", "--input", (dir / "in.csv").string(), "--target", "x1", "--covariates",
                     "x2,x3", "--selection-covariates", "x2", "--m", "2", "--output-prefix",
                     (dir / "ri").string()})
                .code,
            0);
  const auto r = run_cli({"density", "--original", (dir / "in.csv").string(), "--imputed",
                          (dir / "ri_imp1.csv").string(), "--column", "x1", "--output",
                          (dir / "d.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir / "d.csv");
  std::string line;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> curves;
  while (std::getline(in, line)) {
    if (line[0] == '#' || line == "x,density,group") continue;
    const auto f = csv::detail::split_line(line);
    curves[f[2]].first.push_back(std::stod(f[0]));
    curves[f[2]].second.push_back(std::stod(f[1]));
  }
  ASSERT_EQ(curves.size(), 2u);
  auto center = [&](const std::string& g) {
    const auto& [x, y] = curves[g];
    return density_center(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())),
                          Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size())));
  };
  EXPECT_LT(center("imputed"), center("observed"));
}
