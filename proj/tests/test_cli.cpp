#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "ctxlab/json_io.hpp"
#include "ctxlab/zoo.hpp"

namespace {

struct Run {
  int status = -1;
  std::string output;
};

Run run(const std::string& args) {
  std::string command = std::string(CTXLAB_BINARY) + " " + args + " 2>&1";
  Run result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, n);
  int raw = pclose(pipe);
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return result;
}

bool has(const Run& r, const std::string& text) { return r.output.find(text) != std::string::npos; }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ctxlab_cli_" + name);
}

}  // namespace

TEST(Cli, ClassifyBellTable) {
  auto r = run("classify --zoo bell");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(has(r, "PROBABILISTICALLY_CONTEXTUAL")) << r.output;
  EXPECT_TRUE(has(r, "1/4")) << r.output;
  EXPECT_TRUE(has(r, "5/2")) << r.output;
}

TEST(Cli, ClassifyPrBoxIsMaximal) {
  auto r = run("classify --zoo pr-box");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r, "STRONGLY_CONTEXTUAL"));
  EXPECT_TRUE(has(r, "maximal violation"));
}

TEST(Cli, ClassifyHardySupport) {
  auto r = run("classify --zoo hardy");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r, "POSSIBILISTICALLY_CONTEXTUAL"));
  EXPECT_TRUE(has(r, "witness inequality"));
}

TEST(Cli, ClassifyModelFileAsJson) {
  auto path = temp_file("bell.json");
  ctxlab::write_json_file(path, ctxlab::model_to_json(ctxlab::zoo_model("bell")));
  auto r = run("classify --json --model " + path.string());
  EXPECT_EQ(r.status, 0) << r.output;
  auto j = ctxlab::Json::parse(r.output);
  EXPECT_EQ(j["class"], "PROBABILISTICALLY_CONTEXTUAL");
  EXPECT_EQ(j["canonical_violation"], "1/4");
  std::filesystem::remove(path);
}

TEST(Cli, DeriveLogicalSet) {
  auto r = run("derive --scenario 2,2,1 --target logical");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(has(r, "all K-consistent")) << r.output;
}

TEST(Cli, DeriveCorrelation) {
  auto out = temp_file("corr.json");
  auto r = run("derive --scenario 2,2,1 --target correlation --out " + out.string());
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(has(r, "E(a,b) + E(a,b') + E(a',b) - E(a',b') <= 2")) << r.output;
  EXPECT_TRUE(std::filesystem::exists(out));
  std::filesystem::remove(out);
}

TEST(Cli, ConvertWernerWolf) {
  auto r = run("convert --zoo werner-wolf-a2 --target logical");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(has(r, "3 p(")) << r.output;
  EXPECT_TRUE(has(r, "<= 7")) << r.output;
}

TEST(Cli, EvalAndExpect) {
  auto model = temp_file("pr.json");
  ctxlab::write_json_file(model, ctxlab::model_to_json(ctxlab::zoo_model("pr-box")));
  auto ineq = temp_file("chsh.json");
  std::ofstream(ineq) << R"({"type": "correlation", "coefficients": {"0": 1, "1": 1, "2": 1, "3": -1}, "bound": 2})";
  auto r = run("eval --model " + model.string() + " --inequality " + ineq.string());
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(has(r, "4")) << r.output;
  auto e = run("expect --zoo bell");
  EXPECT_EQ(e.status, 0);
  EXPECT_TRUE(has(e, "E(a',b') = -1/2")) << e.output;
  std::filesystem::remove(model);
  std::filesystem::remove(ineq);
}

TEST(Cli, QuantumPresets) {
  auto r = run("quantum --preset bell");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r, "(a',b'): 00=1/8 01=3/8 10=3/8 11=1/8")) << r.output;
  EXPECT_EQ(run("quantum --preset ks18 --seed 3").status, 0);
  EXPECT_EQ(run("quantum --preset nope").status, 2);
}

TEST(Cli, ZooListing) {
  auto r = run("zoo");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r, "werner-wolf-a2"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("classify --no-such-flag").status, 2);
  EXPECT_EQ(run("classify").status, 2);
  EXPECT_EQ(run("classify --zoo nope").status, 1);
  EXPECT_EQ(run("classify --model /nonexistent/model.json").status, 1);
  EXPECT_EQ(run("derive --scenario 2,2,1 --target sideways").status, 2);
  EXPECT_EQ(run("derive --scenario 3,3,1 --limit-vars 4").status, 1);
}
