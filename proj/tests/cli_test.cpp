#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "netsteer/cli/commands.hpp"
#include "netsteer/cli/config.hpp"

using namespace netsteer;
using namespace netsteer::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("netsteer_cli_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

RunConfig small_sweep() {
  RunConfig c;
  c.scenarios = {ScenarioSpec{ScenarioKind::bipartite, 2, 2}};
  c.v = {0.6, 0.9, 0.3};
  c.optimizer.restarts = 2;
  c.optimizer.iterations = 4000;
  c.seed = 7;
  c.optimizer.seed = 7;
  return c;
}

}  // namespace

TEST(Config, DefaultRoundTrip) {
  const RunConfig c;
  const auto j = to_json(c);
  EXPECT_EQ(to_json(config_from_json(j)).dump(), j.dump());
}

TEST(Config, CustomRoundTrip) {
  RunConfig c;
  c.scenarios = {{ScenarioKind::bilocal, 2, 1}, {ScenarioKind::two_untrusted, 2, 3}};
  c.v = {0.1, 0.9, 0.2};
  c.w = {0.0, 0.5, 0.25};
  c.diagonal = true;
  c.optimizer.restarts = 3;
  c.optimizer.beta_schedule = {2.0, 20.0};
  c.sdp.tolerance = 1e-6;
  c.engine = Engine::sdp;
  c.thresholds.targets = {{ScenarioKind::bipartite, 4, 3}};
  c.thresholds.tolerance = 5e-4;
  c.dump_sdp = true;
  c.output_dir = "elsewhere";
  c.seed = 123456789012345ULL;
  c.optimizer.seed = c.seed;
  c.jobs = 3;
  const auto text = to_json(c).dump(2);
  const auto back = config_from_json(Json::parse(text));
  EXPECT_EQ(to_json(back).dump(2), text);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.optimizer.seed, c.seed);
  EXPECT_EQ(back.grid().size(), 5u + 5u);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(config_from_json(Json{{"bogus", 1}}), ConfigError);
  EXPECT_THROW(config_from_json(Json{{"engine", "gpu"}}), ConfigError);
  EXPECT_THROW(config_from_json(Json{{"scenarios", {{{"kind", "tripartite"}}}}}), ConfigError);
  EXPECT_THROW(config_from_json(Json{{"v", {{"step", "big"}}}}), ConfigError);

  RunConfig empty;
  empty.v = {0.5, 0.4, 0.1};
  EXPECT_THROW(empty.validate(), ConfigError);
  RunConfig zero_step;
  zero_step.v.step = 0.0;
  EXPECT_THROW(zero_step.validate(), ConfigError);
  RunConfig none;
  none.scenarios.clear();
  EXPECT_THROW(none.validate(), ConfigError);
  RunConfig unsupported;
  unsupported.scenarios = {{ScenarioKind::bipartite, 7, 2}};
  EXPECT_THROW(unsupported.validate(), ConfigError);
  EXPECT_NO_THROW(RunConfig{}.validate());
}

TEST(Config, GridOrderAndSeeds) {
  RunConfig c;
  c.scenarios = {{ScenarioKind::bilocal, 2, 1}};
  c.v = {0.0, 1.0, 0.5};
  c.w = {0.0, 1.0, 0.5};
  const auto g = c.grid();
  ASSERT_EQ(g.size(), 9u);
  EXPECT_DOUBLE_EQ(g[1].v, 0.0);
  EXPECT_DOUBLE_EQ(g[1].w, 0.5);
  EXPECT_DOUBLE_EQ(g[3].v, 0.5);
  c.diagonal = true;
  EXPECT_EQ(c.grid().size(), 3u);
  EXPECT_NE(c.point_seed(0), c.point_seed(1));
  EXPECT_EQ((Range{0.0, 1.0, 0.05}).values().size(), 21u);
}

TEST(Cli, ParallelForVisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(97);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Cli, BisectionFindsStepAndReportsMissingBracket) {
  const auto b = bisect_threshold([](double v) { return v > 0.4321; }, 0.0, 1.0, 1e-3);
  ASSERT_TRUE(b.bracketed);
  EXPECT_NEAR(b.threshold, 0.4321, 1e-3);
  EXPECT_LE(b.high - b.low, 1e-3);
  EXPECT_FALSE(bisect_threshold([](double) { return true; }, 0.0, 1.0, 1e-3).bracketed);
  EXPECT_FALSE(bisect_threshold([](double) { return false; }, 0.0, 1.0, 1e-3).bracketed);
}

TEST(Cli, SdpThresholdTwoSettingsQubit) {
  RunConfig c;
  const auto r = find_threshold(c, {ScenarioKind::bipartite, 2, 3}, Engine::sdp);
  ASSERT_EQ(r.status, "ok");
  EXPECT_NEAR(r.search.threshold, 1.0 / std::sqrt(3.0), 5e-3);
  ASSERT_TRUE(r.reference.has_value());
  EXPECT_NEAR(*r.reference, 1.0 / std::sqrt(3.0), 1e-12);
  EXPECT_EQ(find_threshold(c, {ScenarioKind::bilocal, 2, 1}, Engine::sdp).status.rfind("not applicable", 0), 0u);
}

TEST(Cli, SweepIsByteIdenticalAcrossRunsAndJobCounts) {
  auto c = small_sweep();
  const auto a = scratch("sweep_a"), b = scratch("sweep_b");
  c.output_dir = a.string();
  c.jobs = 1;
  std::ostringstream log;
  EXPECT_EQ(cmd_sweep(c, log), kExitOk);
  c.output_dir = b.string();
  c.jobs = 2;
  EXPECT_EQ(cmd_sweep(c, log), kExitOk);
  const auto csv = slurp(a / "sweep.csv");
  EXPECT_EQ(csv, slurp(b / "sweep.csv"));
  EXPECT_EQ(csv.rfind("scenario,dimension,settings,v,w,S_ann,S_lb,S_ub,converged,residual,status\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_TRUE(std::filesystem::exists(a / "config.json"));
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(Cli, SweepRowsRespectSandwich) {
  auto c = small_sweep();
  for (const auto& p : c.grid()) {
    const auto r = evaluate_point(c, p, true, true);
    ASSERT_FALSE(r.failed()) << r.status;
    EXPECT_LE(*r.lower, *r.ann + 1e-3);
    EXPECT_LE(*r.ann, *r.upper + 1e-3);
  }
}

TEST(Cli, BilocalPointSkipsSdp) {
  auto c = small_sweep();
  c.scenarios = {{ScenarioKind::bilocal, 2, 1}};
  const auto r = evaluate_point(c, {0, c.scenarios[0], 0.5, 0.5}, false, true);
  EXPECT_FALSE(r.lower.has_value());
  EXPECT_FALSE(r.upper.has_value());
  EXPECT_EQ(r.status, "ok");
}

TEST(Cli, BoundsCsvAndDump) {
  auto c = small_sweep();
  c.dump_sdp = true;
  const auto out = scratch("bounds");
  c.output_dir = out.string();
  std::ostringstream log;
  EXPECT_EQ(cmd_bounds(c, log), kExitOk);
  const auto csv = slurp(out / "bounds.csv");
  EXPECT_NE(csv.find("bipartite,2,2,0.9,0,0.0482233"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(out / "sdp" / "point_1_lower.json"));
  std::filesystem::remove_all(out);
}

TEST(Cli, VerifyModelsDefaultPasses) {
  const auto rep = verify_models({});
  EXPECT_TRUE(rep.ok());
  EXPECT_LT(rep.max_error, 1e-12);
  EXPECT_GE(rep.models_checked, 600u);
}

TEST(Cli, VerifyModelsInjectedXiFails) {
  VerifyOptions o;
  o.inject_xi = 0.7;
  const auto rep = verify_models(o);
  EXPECT_FALSE(rep.ok());
  ASSERT_EQ(rep.failures.size(), 1u);
  EXPECT_NE(rep.failures[0].find("xi=zeta=0.7"), std::string::npos);

  RunConfig c;
  const auto out = scratch("verify");
  c.output_dir = out.string();
  std::ostringstream log;
  EXPECT_EQ(cmd_verify_models(c, o, log), kExitVerification);
  EXPECT_EQ(cmd_verify_models(c, {}, log), kExitOk);
  std::filesystem::remove_all(out);
}
