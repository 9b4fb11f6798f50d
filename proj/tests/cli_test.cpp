#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pdsphere/io.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("pdsphere_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult run(const std::string& args) const {
    const auto out = dir_ / "stdout.txt";
    const auto err = dir_ / "stderr.txt";
    const std::string cmd = std::string("\"") + PDSPHERE_CLI_PATH + "\" " + args + " >\"" +
                            out.string() + "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SynthIsByteIdenticalAcrossRuns) {
  ASSERT_EQ(run("synth --classes 3 --per-class 4 --seed 7 --output-dir " + p("a")).code, 0);
  ASSERT_EQ(run("synth --classes 3 --per-class 4 --seed 7 --output-dir " + p("b")).code, 0);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir_ / "a")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir_ / "a");
    EXPECT_EQ(slurp(e.path()), slurp(dir_ / "b" / rel)) << rel;
    ++files;
  }
  EXPECT_EQ(files, 1u + 2u * 12u);
  ASSERT_EQ(run("synth --classes 3 --per-class 4 --seed 8 --output-dir " + p("c")).code, 0);
  EXPECT_NE(slurp(dir_ / "a" / "clouds" / "circle_000.csv"),
            slurp(dir_ / "c" / "clouds" / "circle_000.csv"));
}

TEST_F(CliTest, GeodesicEndpointsMatchDensities) {
  ASSERT_EQ(run("synth --classes 3 --per-class 1 --output-dir " + p("s")).code, 0);
  const std::string a = p("s/diagrams/circle_000.csv");
  const std::string b = p("s/diagrams/two_circles_000.csv");
  const std::string common = " --scale 2.5 --grid 32 --sigma 0.06";
  ASSERT_EQ(run("geodesic --from " + a + " --to " + b + " --steps 5 --alexandrov --output-dir " +
                p("geo") + common).code, 0);
  ASSERT_EQ(run("density --input " + a + " --output " + p("da.csv") + common).code, 0);
  ASSERT_EQ(run("density --input " + b + " --output " + p("db.csv") + common).code, 0);
  for (int i = 0; i < 5; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "step_%03d.csv", i);
    EXPECT_TRUE(fs::exists(dir_ / "geo" / name));
    std::snprintf(name, sizeof name, "alexandrov_%03d.csv", i);
    EXPECT_TRUE(fs::exists(dir_ / "geo" / name));
  }
  using pdsphere::io::read_grid;
  EXPECT_LT((read_grid(p("geo/step_000.csv")) - read_grid(p("da.csv"))).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((read_grid(p("geo/step_004.csv")) - read_grid(p("db.csv"))).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(read_grid(p("geo/step_002.csv")).sum(), 1.0, 1e-12);
}

TEST_F(CliTest, EmbedPersistDensityHeatmapPipeline) {
  std::string series = "value\n";
  for (int i = 0; i < 120; ++i) series += pdsphere::io::format_double(std::sin(i * 0.1)) + "\n";
  pdsphere::io::write_text(p("ts.csv"), series);
  ASSERT_EQ(run("embed --input " + p("ts.csv") + " --m 2 --tau 15 --output " + p("cloud.csv")).code, 0);
  const auto embed_report = json::parse(run("embed --input " + p("ts.csv") +
                                            " --m 2 --tau 15 --output " + p("cloud.csv")).out);
  EXPECT_EQ(embed_report["points"], 105);
  const auto persist = run("persist --input " + p("cloud.csv") + " --output " + p("d.csv"));
  ASSERT_EQ(persist.code, 0) << persist.err;
  EXPECT_EQ(json::parse(persist.out)["h0"]["essential"], 1);
  const auto dens = run("density --input " + p("d.csv") + " --homology 1 --output " + p("g.csv"));
  ASSERT_EQ(dens.code, 0) << dens.err;
  const auto report = json::parse(dens.out);
  EXPECT_EQ(report["parameters"]["grid"], 64);
  EXPECT_EQ(report["parameters"]["sigma"], 0.05);
  EXPECT_EQ(report["parameters"]["scale_policy"], "auto");
  ASSERT_EQ(run("heatmap --input " + p("g.csv") + " --output " + p("g.pgm")).code, 0);
  const std::string pgm = slurp(p("g.pgm"));
  ASSERT_EQ(pgm.substr(0, 3), "P5\n");
  const std::string pixels = pgm.substr(pgm.size() - 64 * 64);
  EXPECT_EQ(static_cast<unsigned char>(*std::max_element(
                pixels.begin(), pixels.end(),
                [](char x, char y) { return static_cast<unsigned char>(x) < static_cast<unsigned char>(y); })),
            255);
}

TEST_F(CliTest, ManifestCommands) {
  ASSERT_EQ(run("synth --classes 3 --per-class 5 --output-dir " + p("s")).code, 0);
  const std::string manifest = p("s/manifest.csv");
  const std::string before = slurp(manifest);

  const auto dm = run("distmat --manifest " + manifest + " --metric w1 --output " + p("m.csv"));
  ASSERT_EQ(dm.code, 0) << dm.err;
  const auto meta = json::parse(slurp(p("m.csv.json")));
  EXPECT_GT(meta["parameters"]["scale"].get<double>(), 0.0);
  const auto m = pdsphere::io::read_distance_matrix(p("m.csv"), pdsphere::Metric::kW1);
  EXPECT_EQ(m.values.rows(), 15);

  const auto knn = run("knn --train " + manifest + " --k 1 --output " + p("pred.csv"));
  ASSERT_EQ(knn.code, 0) << knn.err;
  const auto kr = json::parse(knn.out);
  EXPECT_EQ(kr["mode"], "leave-one-out");
  EXPECT_GE(kr["accuracy"].get<double>(), 0.0);
  EXPECT_TRUE(fs::exists(p("pred.csv")));

  const auto test = run("knn --train " + manifest + " --test " + manifest + " --k 1 --metric w2");
  ASSERT_EQ(test.code, 0) << test.err;
  EXPECT_EQ(json::parse(test.out)["accuracy"], 1.0);

  const auto pga = run("pga --manifest " + manifest + " --components 3 --output-dir " + p("model"));
  ASSERT_EQ(pga.code, 0) << pga.err;
  EXPECT_TRUE(fs::exists(p("model/manifest.json")));
  EXPECT_TRUE(fs::exists(p("model/coords.csv")));
  EXPECT_EQ(json::parse(pga.out)["variances"].size(), 3u);

  const auto mean = run("mean --manifest " + manifest + " --output " + p("mean.csv"));
  ASSERT_EQ(mean.code, 0) << mean.err;
  EXPECT_NEAR(pdsphere::io::read_grid(p("mean.csv")).sum(), 1.0, 1e-12);

  EXPECT_EQ(slurp(manifest), before);
}

TEST_F(CliTest, RegressionOnScores) {
  ASSERT_EQ(run("synth --classes 2 --per-class 6 --output-dir " + p("s")).code, 0);
  std::string text = "id,label,diagram,score\n";
  for (int i = 0; i < 6; ++i) {
    for (const char* label : {"circle", "two_circles"}) {
      char id[32];
      std::snprintf(id, sizeof id, "%s_%03d", label, i);
      text += std::string(id) + "," + label + ",s/diagrams/" + id + ".csv," +
              (std::string(label) == "circle" ? "1" : "2") + "\n";
    }
  }
  pdsphere::io::write_text(p("scored.csv"), text);
  const auto r = run("regress --manifest " + p("scored.csv") + " --components 2 --output " +
                     p("r.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = json::parse(r.out);
  EXPECT_TRUE(report.contains("pearson_r"));
  EXPECT_TRUE(fs::exists(p("r.csv")));
}

TEST_F(CliTest, BenchWritesJson) {
  const auto r = run("bench --n 8 --grid 16 --trials 10 --output " + p("b.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = json::parse(slurp(p("b.json")));
  EXPECT_EQ(report["parameters"]["grid"], 16);
  EXPECT_GT(report["hilbert"]["mean_seconds"].get<double>(), 0.0);
  EXPECT_GT(report["w1"]["mean_seconds"].get<double>(), 0.0);
}

TEST_F(CliTest, ErrorsUseDistinctExitCodes) {
  auto check = [](const RunResult& r, int code, const std::string& kind) {
    EXPECT_EQ(r.code, code);
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
    EXPECT_EQ(json::parse(r.err)["error"], kind);
  };
  check(run("density --input " + p("missing.csv") + " --output " + p("g.csv")), 2, "file-not-found");
  pdsphere::io::write_text(p("bad.csv"), "dim,birth,death\n0,zero,1\n");
  check(run("density --input " + p("bad.csv") + " --output " + p("g.csv")), 3, "parse");
  pdsphere::io::write_text(p("ok.csv"), "dim,birth,death\n1,0.1,0.5\n");
  check(run("density --input " + p("ok.csv") + " --output " + p("g.csv") + " --sigma 0"), 4,
        "parameter");
  check(run("density --input " + p("ok.csv") + " --output " + p("g.csv") + " --scale -2"), 4,
        "parameter");
  check(run("bench --trials 3"), 4, "parameter");
  check(run("frobnicate"), 4, "parameter");
  pdsphere::io::write_text(p("ts.csv"), "1\n2\n3\n");
  check(run("embed --input " + p("ts.csv") + " --m 3 --tau 2 --output " + p("c.csv")), 1, "length");
  EXPECT_EQ(run("--help").code, 0);
}

}  // namespace
