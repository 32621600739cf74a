#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <unistd.h>

#include "barrierfix/cli.hpp"
#include "barrierfix/summary.hpp"
#include "json.hpp"
#include "support/corpus.hpp"

using namespace barrierfix;
namespace fs = std::filesystem;
using barrierfix::testing::corpusDir;
using barrierfix::testing::readText;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("barrierfix_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = runCli(args, out, err);
  return {code, out.str(), err.str()};
}

struct CorpusRun {
  TempDir dir;
  Run result;
  nlohmann::json summary;
  fs::path outPath() const { return dir.path / "out.mk"; }
};

std::unique_ptr<CorpusRun> runCorpus(const std::string& name, std::vector<std::string> extra = {}) {
  auto r = std::make_unique<CorpusRun>();
  std::vector<std::string> args{(corpusDir() / (name + ".mk")).string(), "--out",
                                r->outPath().string(), "--summary",
                                (r->dir.path / "summary.json").string()};
  args.insert(args.end(), extra.begin(), extra.end());
  r->result = run(args);
  if (fs::exists(r->dir.path / "summary.json")) {
    r->summary = nlohmann::json::parse(readText(r->dir.path / "summary.json"));
  }
  return r;
}

}  // namespace

TEST_CASE("race kernel: exit 0 and one add_barrier change") {
  auto r = runCorpus("race");
  CHECK(r->result.code == 0);
  CHECK(r->summary["outcome"] == "repaired");
  REQUIRE(r->summary["changes"].size() == 1);
  CHECK(r->summary["changes"][0]["action"] == "add_barrier");
  CHECK(r->summary["changes"][0]["level"] == "block");
  CHECK(r->summary["changes"][0]["line"] == 4);
  CHECK(r->summary["changes"][0]["col"] == 3);
  CHECK(r->summary["stats"]["totalWeight"] == 1);
  CHECK(r->summary["stats"]["strategy"] == "mhs");
  CHECK(validateSummary(r->summary).empty());
  Kernel fixed = parse(readText(r->outPath()));
  CHECK(prettyPrint(fixed).find("barrier;") != std::string::npos);
  CHECK(r->result.out.find("add block barrier") != std::string::npos);
}

TEST_CASE("exit codes follow the outcome") {
  CHECK(runCorpus("unrepairable")->result.code == exit_code::kUnrepairable);
  CHECK(runCorpus("write_write_race")->result.code == exit_code::kUnrepairable);
  CHECK(runCorpus("assertion_failure")->result.code == exit_code::kNonRepairable);
  CHECK(runCorpus("interblock", {"--disable-grid"})->result.code == exit_code::kUnrepairable);
  auto grid = runCorpus("interblock");
  CHECK(grid->result.code == exit_code::kOk);
  CHECK(grid->summary["changes"][0]["level"] == "grid");
  auto timeout = runCorpus("race", {"--timeout-iters", "1"});
  CHECK(timeout->result.code == exit_code::kTimeout);
  CHECK(timeout->summary["outcome"] == "timeout");
  CHECK(timeout->summary["stats"]["iterations"] == 1);
  CHECK(validateSummary(timeout->summary).empty());
}

TEST_CASE("cannot_repair summaries carry a reason") {
  auto r = runCorpus("unrepairable");
  CHECK(r->summary["outcome"] == "cannot_repair");
  CHECK(r->summary["reason"] == "unsat_constraints");
  CHECK(r->summary["changes"].empty());
  CHECK(r->summary["stats"]["totalWeight"] == 0);
  CHECK(validateSummary(r->summary).empty());
  CHECK_FALSE(fs::exists(r->outPath()));
}

TEST_CASE("already safe kernels are copied verbatim") {
  auto r = runCorpus("necessary_barrier");
  CHECK(r->result.code == 0);
  CHECK(r->summary["outcome"] == "already_safe");
  CHECK(r->summary["changes"].empty());
  CHECK(readText(r->outPath()) == readText(corpusDir() / "necessary_barrier.mk"));
  CHECK(validateSummary(r->summary).empty());
}

TEST_CASE("input errors") {
  TempDir dir;
  fs::path bad = dir.path / "bad.mk";
  std::ofstream(bad) << "kernel k( {";
  Run parseFail = run({bad.string()});
  CHECK(parseFail.code == exit_code::kInputError);
  CHECK(parseFail.err.find("bad.mk:1:") != std::string::npos);

  fs::path undeclared = dir.path / "undeclared.mk";
  std::ofstream(undeclared) << "kernel k() { x = 1; }";
  CHECK(run({undeclared.string()}).code == exit_code::kInputError);

  CHECK(run({(dir.path / "missing.mk").string()}).code == exit_code::kIoError);
  fs::path race = corpusDir() / "race.mk";
  CHECK(run({race.string(), "--summary", (dir.path / "no" / "such" / "dir.json").string(), "--out",
             (dir.path / "o.mk").string()})
            .code == exit_code::kIoError);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == exit_code::kUsage);
  CHECK(run({"x.mk", "--gw"}).code == exit_code::kUsage);
  CHECK(run({"x.mk", "--gw", "abc"}).code == exit_code::kUsage);
  CHECK(run({"x.mk", "--lw", "0"}).code == exit_code::kUsage);
  CHECK(run({"x.mk", "--blocks", "9"}).code == exit_code::kUsage);
  CHECK(run({"x.mk", "--no-such-flag"}).code == exit_code::kUsage);
  CHECK(run({"x.mk", "--timeout-iters", "0"}).code == exit_code::kUsage);
  Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("--maxsat") != std::string::npos);
}

TEST_CASE("launch and weight overrides") {
  auto one = runCorpus("race", {"--threads", "1"});
  CHECK(one->result.code == exit_code::kInputError);
  auto two = runCorpus("intrablock", {"--blocks", "2", "--threads", "2"});
  CHECK(two->result.code == 0);
  CHECK(two->summary["changes"][0]["level"] == "grid");
  auto cheapGrid = runCorpus("interblock", {"--gw", "1"});
  CHECK(cheapGrid->summary["stats"]["totalWeight"] == 2);
  auto maxsat = runCorpus("race", {"--maxsat"});
  CHECK(maxsat->summary["stats"]["strategy"] == "maxsat");
  auto noInspect = runCorpus("divergence", {"--disable-inspect"});
  CHECK(noInspect->result.code == exit_code::kUnrepairable);
}

TEST_CASE("debug dumps") {
  TempDir dir;
  fs::path cnf = dir.path / "phi.wcnf";
  fs::path trace = dir.path / "trace.jsonl";
  auto r = runCorpus("race", {"--dump-cnf", cnf.string(), "--dump-trace", trace.string()});
  CHECK(r->result.code == 0);
  CHECK(readText(cnf).rfind("p wcnf 4 5 29\n", 0) == 0);
  std::istringstream lines(readText(trace));
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    CHECK(nlohmann::json::parse(line)["iteration"] == 1);
    ++n;
  }
  CHECK(n > 0);
}

TEST_CASE("default output paths and determinism") {
  TempDir dir;
  fs::path input = dir.path / "race.mk";
  fs::copy_file(corpusDir() / "race.mk", input);
  CHECK(run({input.string()}).code == 0);
  CHECK(fs::exists(dir.path / "race.mk.fixed.mk"));
  CHECK(fs::exists(dir.path / "race.mk.summary.json"));
  std::string first = readText(dir.path / "race.mk.summary.json");
  CHECK(run({input.string()}).code == 0);
  CHECK(readText(dir.path / "race.mk.summary.json") == first);
  CHECK(first.back() == '\n');
}

TEST_CASE("summary validator rejects malformed documents") {
  auto good = runCorpus("race")->summary;
  CHECK(validateSummary(good).empty());
  auto missing = good;
  missing.erase("stats");
  CHECK_FALSE(validateSummary(missing).empty());
  auto extra = good;
  extra["surprise"] = 1;
  CHECK_FALSE(validateSummary(extra).empty());
  auto badAction = good;
  badAction["changes"][0]["action"] = "move_barrier";
  CHECK_FALSE(validateSummary(badAction).empty());
  auto badLine = good;
  badLine["changes"][0]["line"] = 0;
  CHECK_FALSE(validateSummary(badLine).empty());
  auto reasonless = good;
  reasonless["outcome"] = "cannot_repair";
  CHECK_FALSE(validateSummary(reasonless).empty());
  CHECK_FALSE(validateSummary(nlohmann::json::array()).empty());
}
