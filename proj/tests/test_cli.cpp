#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(KMTREE_CLI) + " " + args + " 2>/dev/null";
  Run r{-1, ""};
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("kmtree_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d / name;
}

void strip_times(json& j) {
  if (j.is_object()) {
    j.erase("elapsed_ms");
    for (auto& [k, v] : j.items()) strip_times(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_times(v);
  }
}

json load(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

TEST(Cli, QuadrangleSuitePasses) {
  auto r = run("verify quadrangle");
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, ReducePrintsTheConstrainedWord) {
  auto r = run("reduce --word 'u_sr,1,u_sr,u_t'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "u_t\n");
}

TEST(Cli, TracePrintsACertificate) {
  auto r = run("trace --word 'u_sr,u_t,u_tr'");
  EXPECT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("verify coxeter --radius 99").code, 2);
  EXPECT_EQ(run("verify blueprint --max-length 9").code, 2);
  EXPECT_EQ(run("verify").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("reduce --word 'u_sr,u_q'").code, 2);
  EXPECT_EQ(run("verify section4 --residue 1:sx").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
}

TEST(Cli, ReportIsDeterministic) {
  auto a = scratch("a.json"), b = scratch("b.json");
  ASSERT_EQ(run("verify coxeter --radius 6 --out " + a.string()).code, 0);
  ASSERT_EQ(run("-j 1 verify coxeter --radius 6 --out " + b.string()).code, 0);
  auto ja = load(a), jb = load(b);
  strip_times(ja);
  strip_times(jb);
  EXPECT_EQ(ja.dump(), jb.dump());
  EXPECT_TRUE(ja["pass"].get<bool>());
  EXPECT_EQ(ja["config"]["coxeter_radius"], 6);
}

TEST(Cli, CacheReturnsTheSameDocument) {
  auto dir = scratch("cache");
  auto a = scratch("c1.json"), b = scratch("c2.json");
  ASSERT_EQ(run("--cache-dir " + dir.string() + " verify blueprint --max-length 5 --out " + a.string()).code, 0);
  EXPECT_FALSE(fs::is_empty(dir));
  ASSERT_EQ(run("--cache-dir " + dir.string() + " verify blueprint --max-length 5 --out " + b.string()).code, 0);
  auto ja = load(a), jb = load(b);
  strip_times(ja);
  strip_times(jb);
  EXPECT_EQ(ja.dump(), jb.dump());
}

TEST(Cli, NormalFormFromATreeFile) {
  auto f = scratch("tree.json");
  std::ofstream(f) << R"({"sequence": [{"U": "sr"}, {"V": "", "type": "st"}, {"U": "trt"}]})";
  auto r = run("nf --tree " + f.string() + " --word '0:+s,1:+s,2:+t'");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = json::parse(r.out);
  // u_s from U_sr and u_s from V merge
  EXPECT_FALSE(j["identity"].get<bool>());
  EXPECT_LE(j["syllables"].get<int>(), 1);

  auto g = scratch("cons.json");
  std::ofstream(g) << R"({"construction": "H_R", "residue": "1:st"})";
  auto r2 = run("nf --tree " + g.string() + " --word '0:+s,0:+s'");
  ASSERT_EQ(r2.code, 0);
  EXPECT_TRUE(json::parse(r2.out)["identity"].get<bool>());

  EXPECT_EQ(run("nf --tree " + f.string() + " --word '7:+s'").code, 2);
  EXPECT_EQ(run("nf --tree /nonexistent.json --word '0:+s'").code, 2);
}
