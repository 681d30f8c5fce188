#include "kleincert/cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

using namespace kleincert;

namespace {

std::string fixtures() {
  const char* d = std::getenv("KLEINCERT_FIXTURES");
  return d ? d : "fixtures";
}

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "kleincert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

/// The installed binary, for exit codes as the shell sees them.
Run run_binary(const std::string& args) {
  const char* cli = std::getenv("KLEINCERT_CLI");
  if (!cli) return {-1, "", "KLEINCERT_CLI not set"};
  const std::string cmd = std::string(cli) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, ""};
}

std::vector<std::string> ids_from_json(const std::string& s) {
  std::vector<std::string> v;
  const json j = json::parse(s);
  for (const auto& o : j["obligations"]) v.push_back(o["id"].get<std::string>());
  return v;
}

std::vector<std::string> ids_from_text(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);)
    if (line.rfind("[", 0) == 0) {
      const auto a = line.find("] ") + 2;
      v.push_back(line.substr(a, line.find(' ', a) - a));
    }
  return v;
}

std::string temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("kleincert-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  return p.string();
}

}  // namespace

TEST(Cli, VerifySyzygy) {
  const auto r = run({"verify", "syzygy", "--format", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "all_computed_verified");
  ASSERT_EQ(j["obligations"].size(), 1u);
  EXPECT_EQ(j["obligations"][0]["id"], "invariants.syzygy");
  EXPECT_EQ(j["obligations"][0]["status"], "verified");
}

TEST(Cli, BrokenFixtureExitsOne) {
  const auto r = run_binary("verify group --fixture " + fixtures() + "/broken.json");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("[failed] group.order"), std::string::npos);
  EXPECT_EQ(run({"verify", "group", "--fixture", fixtures() + "/j168.json"}).code, 0);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_binary("frobnicate").code, 2);
  EXPECT_EQ(run_binary("").code, 2);
  EXPECT_EQ(run({"verify", "everything"}).code, 2);
  EXPECT_EQ(run({"verify", "group", "--group", "j999"}).code, 2);
  EXPECT_EQ(run({"verify", "group", "--format", "yaml"}).code, 2);
  EXPECT_EQ(run({"verify", "group", "--fixture", "/nonexistent/fixture.json"}).code, 2);
  EXPECT_EQ(run({"verify", "group", "--jobs", "0"}).code, 2);
  EXPECT_EQ(run({"curves", "analyze", "--curve", "f"}).code, 2);
  EXPECT_EQ(run({"curves", "analyze", "--curve", "f", "--point", "1:0"}).code, 2);
  EXPECT_EQ(run({"curves", "analyze", "--curve", "g^2", "--point", "1:0:0"}).code, 2);
  EXPECT_EQ(run({"curves", "analyze", "--curve", "f", "--point", "1:1:1"}).code, 2);  // not on the curve
  const auto u = run({"orbits"});
  EXPECT_EQ(u.code, 2);
  EXPECT_NE(u.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DiagonalCyclicFixtureFails) {
  const auto r = run({"verify", "invariants", "--fixture", fixtures() + "/diagonal_cyclic.json", "--format", "json"});
  EXPECT_EQ(r.code, 1);
  const auto j = json::parse(r.out);
  bool found = false;
  for (const auto& o : j["obligations"])
    if (o["id"] == "invariants.no_low_degree_semiinvariant") {
      found = true;
      EXPECT_EQ(o["status"], "failed");
      EXPECT_EQ(o["witness"]["min_degree"], 1);
    }
  EXPECT_TRUE(found);
}

TEST(Cli, TextIsAProjectionOfJson) {
  for (const char* target : {"group", "orbits"}) {
    const auto a = run({"verify", target, "--format", "json"});
    const auto b = run({"verify", target, "--format", "text"});
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(ids_from_json(a.out), ids_from_text(b.out)) << target;
    EXPECT_FALSE(ids_from_text(b.out).empty());
  }
}

TEST(Cli, InvariantCacheIsKeyedByFixture) {
  const std::string dir = temp_dir("cache");
  const auto a = run({"invariants", "dump", "--format", "json", "--cache-dir", dir});
  ASSERT_EQ(a.code, 0) << a.err;
  RunConfig cfg;
  cfg.cache_dir = dir;
  const auto path = cache_file(cfg, fixture_j168());
  ASSERT_TRUE(std::filesystem::exists(path));
  EXPECT_EQ(json::parse(a.out), invariants_to_json(build_invariants()));
  // a second run reads the entry: a tampered K shows up in the syzygy
  json tampered = invariants_to_json(build_invariants());
  tampered["K"] = to_json(build_invariants().k.scaled(Rational(2)));
  std::ofstream(path) << tampered.dump();
  EXPECT_EQ(run({"verify", "syzygy", "--cache-dir", dir}).code, 1);
  EXPECT_EQ(run({"verify", "syzygy"}).code, 0);
  // another fixture, another entry
  EXPECT_EQ(run({"verify", "syzygy", "--group", "j504", "--cache-dir", dir}).code, 0);
  EXPECT_TRUE(std::filesystem::exists(cache_file(cfg, fixture_j504())));
  // environment override
  const std::string env_dir = temp_dir("env");
  ::setenv("CACHE_DIR", env_dir.c_str(), 1);
  EXPECT_EQ(run({"invariants", "dump"}).code, 0);
  ::unsetenv("CACHE_DIR");
  RunConfig env_cfg;
  env_cfg.cache_dir = env_dir;
  EXPECT_TRUE(std::filesystem::exists(cache_file(env_cfg, fixture_j168())));
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(env_dir);
}

TEST(Cli, OrbitsList) {
  const auto r = run({"orbits", "list", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  std::vector<std::size_t> lengths;
  for (const auto& o : j["orbits"]) lengths.push_back(o["length"]);
  EXPECT_EQ(lengths, (std::vector<std::size_t>{21, 24, 28, 42, 56, 84}));
  EXPECT_EQ(j["min_length"], 21);
  const auto t = run({"orbits", "list"});
  EXPECT_NE(t.out.find("length 24, stabilizer 7, representative (0 : 0 : 1)"), std::string::npos) << t.out;
}

TEST(Cli, InvariantsDumpDegree) {
  const auto r = run({"invariants", "dump", "--degree", "12", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["dimension"], 2);
  EXPECT_EQ(j["molien"], "2/1");
  EXPECT_EQ(json::parse(run({"invariants", "dump", "--degree", "3", "--format", "json"}).out)["dimension"], 0);
}

TEST(Cli, CurvesAnalyze) {
  const auto node = run({"curves", "analyze", "--curve", "f*Delta", "--point", "1:0:0", "--format", "json"});
  ASSERT_EQ(node.code, 0) << node.err;
  EXPECT_EQ(json::parse(node.out)["double_point_type"], "node");
  const auto cusp = run({"curves", "analyze", "--curve", "lambda*f^3 + mu*Delta^2", "--point", "1:0:0"});
  ASSERT_EQ(cusp.code, 0) << cusp.err;
  EXPECT_NE(cusp.out.find("multiplicity 2, cusp(A2)"), std::string::npos) << cusp.out;
  EXPECT_NE(cusp.out.find("assuming mu != 0"), std::string::npos);
  const auto smooth = run({"curves", "analyze", "--curve", "f", "--point", "1:zeta3^2:zeta3", "--format", "json"});
  ASSERT_EQ(smooth.code, 0) << smooth.err;
  EXPECT_EQ(json::parse(smooth.out)["multiplicity"], 1);
  EXPECT_EQ(run({"curves", "analyze", "--curve", "y1*y2 - 2*y3^2", "--point", "2:1:1"}).code, 0);
}

TEST(Cli, SeedChangesRecordsNotVerdicts) {
  const auto a = run({"verify", "curves", "--format", "json"});
  const auto b = run({"verify", "curves", "--format", "json", "--seed", "12345"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(b.code, 0);
  const auto ja = json::parse(a.out), jb = json::parse(b.out);
  EXPECT_NE(ja, jb);
  ASSERT_EQ(ja["obligations"].size(), jb["obligations"].size());
  for (std::size_t i = 0; i < ja["obligations"].size(); ++i)
    EXPECT_EQ(ja["obligations"][i]["status"], jb["obligations"][i]["status"]);
}

TEST(Cli, VerifyExceptionalityBinary) {
  const auto r = run_binary("verify exceptionality --group j168 --format json");
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "all_computed_verified");
  EXPECT_EQ(j["group"], "j168");
}
