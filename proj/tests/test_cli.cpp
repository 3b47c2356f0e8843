#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <string>

#include "squeezest/io.hpp"
#include "support/cli_runner.hpp"

using json = nlohmann::json;
using testsupport::run_cli;
using testsupport::ScratchDir;
using testsupport::slurp;

namespace {

squeezest::io::Table read_table(const std::string& path, const std::vector<std::string>& header) {
  return squeezest::io::parse_csv(slurp(path), header, path);
}

}  // namespace

TEST(Cli, SpectralWritesCsvAndSidecar) {
  ScratchDir dir("spectral");
  ASSERT_EQ(run_cli("spectral --state vacuum --out " + dir.file("g.csv")), 0);
  const auto t = read_table(dir.file("g.csv"), {"mu", "g"});
  EXPECT_EQ(t.columns[0].size(), 16384u);
  const json meta = json::parse(slurp(dir.file("g.json")));
  EXPECT_EQ(meta["command"], "spectral");
  EXPECT_EQ(meta["spectral"]["route"], "charfn");
  EXPECT_NEAR(meta["spectral"]["normalization"].get<double>(), 1.0, 1e-4);
  EXPECT_EQ(meta["data_file"], "g.csv");
}

TEST(Cli, OracleRouteAgrees) {
  ScratchDir dir("oracle");
  const std::string state = "--state displaced-squeezed --alpha 1 --z -0.5 ";
  ASSERT_EQ(run_cli("spectral " + state + "--out " + dir.file("a.csv")), 0);
  ASSERT_EQ(run_cli("spectral " + state + "--oracle --out " + dir.file("b.csv")), 0);
  const auto a = read_table(dir.file("a.csv"), {"mu", "g"});
  const auto b = read_table(dir.file("b.csv"), {"mu", "g"});
  ASSERT_EQ(a.columns[0], b.columns[0]);
  double sup = 0.0;
  for (std::size_t i = 0; i < a.columns[1].size(); ++i)
    sup = std::max(sup, std::abs(a.columns[1][i] - b.columns[1][i]));
  EXPECT_LT(sup, 1e-5);
  EXPECT_EQ(json::parse(slurp(dir.file("b.json")))["spectral"]["route"], "mellin");
}

TEST(Cli, DistJsonFormat) {
  ScratchDir dir("distjson");
  ASSERT_EQ(run_cli("dist --state coherent --alpha 2 --format json --out " + dir.file("d.json")), 0);
  const json doc = json::parse(slurp(dir.file("d.json")));
  EXPECT_EQ(doc["summary"]["frame"], "error");
  EXPECT_LT(std::abs(doc["summary"]["mean"].get<double>()), 1e-3);
  EXPECT_EQ(doc["data"]["t"].size(), 8193u);
  EXPECT_EQ(doc["data"]["p"].size(), 8193u);
}

TEST(Cli, DistWindowOverride) {
  ScratchDir dir("window");
  ASSERT_EQ(run_cli("dist --state vacuum --t-min -6 --t-max 6 --n-t 601 --out " + dir.file("d.csv")), 0);
  const auto t = read_table(dir.file("d.csv"), {"t", "p"});
  ASSERT_EQ(t.columns[0].size(), 601u);
  EXPECT_EQ(t.columns[0].front(), -6.0);
  EXPECT_EQ(t.columns[0].back(), 6.0);
}

TEST(Cli, CostFromDistributionFile) {
  ScratchDir dir("cost");
  ASSERT_EQ(run_cli("dist --state vacuum --out " + dir.file("opt.csv")), 0);
  ASSERT_EQ(run_cli("cost --state vacuum --cost ml --dist " + dir.file("opt.csv") + " --out " + dir.file("c1.json")), 0);
  ASSERT_EQ(run_cli("cost --state vacuum --cost ml --strategy optimal --out " + dir.file("c2.json")), 0);
  const double from_file = json::parse(slurp(dir.file("c1.json")))["expected_cost"];
  const double direct = json::parse(slurp(dir.file("c2.json")))["expected_cost"];
  EXPECT_DOUBLE_EQ(from_file, direct);

  ASSERT_EQ(run_cli("cost --state vacuum --cost ml --strategy lnx --out " + dir.file("c3.json")), 0);
  const double lnx = json::parse(slurp(dir.file("c3.json")))["expected_cost"];
  EXPECT_LT(direct, lnx);

  ASSERT_EQ(run_cli("cost --state vacuum --cost fidelity --out " + dir.file("c4.json")), 0);
  const double fid = json::parse(slurp(dir.file("c4.json")))["expected_cost"];
  EXPECT_GE(fid, 0.0);
  EXPECT_LE(fid, 1.0);
}

TEST(Cli, CostRejectsAbsoluteFrame) {
  ScratchDir dir("absframe");
  ASSERT_EQ(run_cli("dist --state vacuum --strategy lnx --r-true 0.2 --out " + dir.file("lnx.csv")), 0);
  EXPECT_EQ(read_table(dir.file("lnx.csv"), {"rhat", "p"}).columns[0].size(), 16385u);
  EXPECT_EQ(run_cli("cost --state vacuum --dist " + dir.file("lnx.csv") + " --out " + dir.file("c.json")), 2);

  ASSERT_EQ(run_cli("dist --state vacuum --strategy lnx --r-true 0.2 --frame error --out " + dir.file("err.csv")), 0);
  const auto err = read_table(dir.file("err.csv"), {"t", "p"});
  EXPECT_NEAR(err.columns[0].front(), -20.0, 1e-12);
  EXPECT_EQ(run_cli("cost --state vacuum --dist " + dir.file("err.csv") + " --out " + dir.file("c.json")), 0);
  EXPECT_EQ(run_cli("dist --state vacuum --frame absolute --out " + dir.file("x.csv")), 2);
}

TEST(Cli, CostHolevoTable) {
  ScratchDir dir("holevo");
  std::string table = "mu,a\n";
  for (int i = 0; i <= 1200; ++i) {
    const double mu = i * 0.01;
    table += squeezest::io::format_double(mu) + "," + squeezest::io::format_double(-std::exp(-mu * mu / 2)) + "\n";
  }
  squeezest::io::write_text(dir.file("table.csv"), table);
  EXPECT_EQ(run_cli("cost --state coherent --alpha 1 --cost holevo --holevo-table " + dir.file("table.csv") +
                    " --out " + dir.file("c.json")),
            0);
  const double v = json::parse(slurp(dir.file("c.json")))["expected_cost"];
  EXPECT_LT(v, 0.0);
  EXPECT_GT(v, -std::sqrt(M_PI / 2));
  EXPECT_EQ(run_cli("cost --state vacuum --cost holevo --out " + dir.file("c2.json")), 2);
}

TEST(Cli, SweepAndMc) {
  ScratchDir dir("sweep");
  ASSERT_EQ(run_cli("sweep --family coherent --method optimal-povm --nbars 4,16,64 --out " + dir.file("s.csv")), 0);
  const auto t = read_table(dir.file("s.csv"), {"nbar", "nbar_exact", "alpha", "z", "rmse"});
  EXPECT_EQ(t.columns[0], (std::vector<double>{4.0, 16.0, 64.0}));
  const json fit = json::parse(slurp(dir.file("s.json")))["fit"];
  EXPECT_NEAR(fit["slope"].get<double>(), -0.5, 0.05);

  ASSERT_EQ(run_cli("mc --state coherent --alpha 4 --samples 20000 --seed 3 --out " + dir.file("m.json")), 0);
  const json mc = json::parse(slurp(dir.file("m.json")));
  EXPECT_NEAR(mc["result"]["rmse"].get<double>(), 0.125, 0.0125);
  EXPECT_EQ(mc["result"]["seed"], 3);
}

TEST(Cli, FileStateMatchesBuiltIn) {
  ScratchDir dir("filestate");
  const auto psi = squeezest::wavefunction(squeezest::GaussianPureState::coherent({1.0, 0.0}));
  squeezest::io::write_text(dir.file("psi.csv"), squeezest::io::wavefunction_to_csv(psi));
  ASSERT_EQ(run_cli("dist --state file --wavefunction " + dir.file("psi.csv") + " --out " + dir.file("a.csv")), 0);
  ASSERT_EQ(run_cli("dist --state coherent --alpha 1 --out " + dir.file("b.csv")), 0);
  const auto a = read_table(dir.file("a.csv"), {"t", "p"});
  const auto b = read_table(dir.file("b.csv"), {"t", "p"});
  ASSERT_EQ(a.columns[0].size(), b.columns[0].size());
  double sup = 0.0;
  for (std::size_t i = 0; i < a.columns[1].size(); ++i)
    sup = std::max(sup, std::abs(a.columns[1][i] - b.columns[1][i]));
  EXPECT_LT(sup, 1e-5);
}

TEST(Cli, Deterministic) {
  ScratchDir dir("determinism");
  for (const char* tag : {"a", "b"}) {
    ASSERT_EQ(run_cli("sweep --family displaced-squeezed-optimal --method homodyne-mc --nbars 4,16 --samples 5000 "
                      "--seed 17 --out " + dir.file(std::string(tag) + ".csv")),
              0);
  }
  EXPECT_EQ(slurp(dir.file("a.csv")), slurp(dir.file("b.csv")));
}

TEST(Cli, ExitCodes) {
  ScratchDir dir("exit");
  const std::string out = " --out " + dir.file("x.csv");
  EXPECT_EQ(run_cli("dist --state coherent --alpha nan" + out), 2);
  EXPECT_EQ(run_cli("dist --state sideways" + out), 2);
  EXPECT_EQ(run_cli("dist --state vacuum"), 2);
  EXPECT_EQ(run_cli("nosuchcommand" + out), 2);
  EXPECT_EQ(run_cli("spectral --state vacuum --n-lambda 1000" + out), 2);
  EXPECT_EQ(run_cli("sweep --family coherent --nbars 16,4" + out), 2);
  EXPECT_EQ(run_cli("mc --state vacuum" + out), 2);
  EXPECT_EQ(run_cli("spectral --state vacuum --lambda-halfwidth 5" + out), 3);
  EXPECT_EQ(run_cli("dist --state vacuum --t-min -0.5 --t-max 0.5 --n-t 101" + out), 3);
  EXPECT_EQ(run_cli("dist --state file --wavefunction " + dir.file("missing.csv") + out), 4);
  EXPECT_EQ(run_cli("dist --state vacuum --out /nonexistent/dir/x.csv"), 4);
}
