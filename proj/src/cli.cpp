#include "barrierfix/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "barrierfix/repair.hpp"
#include "barrierfix/summary.hpp"

namespace barrierfix {

namespace {

struct Options {
  std::string input;
  bool maxsat = false;
  bool disableGrid = false;
  bool disableInspect = false;
  std::optional<std::int64_t> gw;
  std::optional<std::int64_t> lw;
  std::optional<int> blocks;
  std::optional<int> threads;
  std::optional<int> unroll;
  std::optional<std::string> out;
  std::optional<std::string> summary;
  std::optional<std::string> dumpCnf;
  std::optional<std::string> dumpTrace;
  int timeoutIters = 1000;
  std::optional<double> timeoutSecs;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void writeFile(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed to write '" + path + "'");
}

std::optional<std::string> readFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) return std::nullopt;
  return ss.str();
}

std::string levelName(BarrierLevel l) { return l == BarrierLevel::Grid ? "grid" : "block"; }

void report(std::ostream& out, const std::string& input, const RepairResult& r) {
  std::string_view name = outcomeName(r);
  out << input << ": " << name;
  if (const auto* c = std::get_if<outcome::CannotRepair>(&r.outcome)) {
    out << " (" << reasonName(c->reason) << ")\n  " << c->detail << '\n';
  } else if (const auto* t = std::get_if<outcome::Timeout>(&r.outcome)) {
    out << " after " << t->iterations << " iterations\n";
  } else {
    const auto& rep = std::get<outcome::Repaired>(r.outcome);
    out << " (weight " << rep.solution.totalWeight << ")\n";
    for (const Change& ch : rep.changes) {
      out << "  " << toString(ch.loc) << ": "
          << (ch.action == ChangeAction::AddBarrier ? "add " : "remove ") << levelName(ch.level)
          << " barrier\n";
    }
  }
  out << "  iterations " << r.stats.iterations << ", verifier calls " << r.stats.verifierCalls
      << ", solver calls " << r.stats.solverCalls << '\n';
}

int exitCodeFor(const RepairResult& r) {
  if (r.repaired()) return exit_code::kOk;
  if (std::holds_alternative<outcome::Timeout>(r.outcome)) return exit_code::kTimeout;
  const auto& c = std::get<outcome::CannotRepair>(r.outcome);
  return c.reason == CannotRepairReason::NonRepairableError ? exit_code::kNonRepairable
                                                            : exit_code::kUnrepairable;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Repairs barrier placement in MiniKernel programs", "barrierfix"};
  app.add_option("input", o.input, "Kernel source (.mk)")->required();
  app.add_flag("--maxsat", o.maxsat, "Solve every iteration with exact MaxSAT");
  app.add_flag("--disable-grid", o.disableGrid, "Do not instrument grid-level barriers");
  app.add_flag("--disable-inspect", o.disableInspect, "Keep the programmer's barriers fixed");
  app.add_option("--gw", o.gw, "Grid barrier weight")->check(CLI::PositiveNumber);
  app.add_option("--lw", o.lw, "Loop depth weight base")->check(CLI::PositiveNumber);
  app.add_option("--blocks", o.blocks, "Override the launch block count")->check(CLI::Range(1, 8));
  app.add_option("--threads", o.threads, "Override threads per block")->check(CLI::Range(1, 8));
  app.add_option("--unroll", o.unroll, "Override every loop's unroll bound")->check(CLI::Range(0, 16));
  app.add_option("--out", o.out, "Repaired kernel path (default <input>.fixed.mk)");
  app.add_option("--summary", o.summary, "Summary path (default <input>.summary.json)");
  app.add_option("--dump-cnf", o.dumpCnf, "Write the final constraint in wcnf format");
  app.add_option("--dump-trace", o.dumpTrace, "Write error-trace access logs as JSON lines");
  app.add_option("--timeout-iters", o.timeoutIters, "Iteration limit")->check(CLI::PositiveNumber);
  app.add_option("--timeout-secs", o.timeoutSecs, "Wall-clock limit")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::kOk;
  } catch (const CLI::ParseError& e) {
    err << "barrierfix: " << e.what() << '\n' << "run with --help for usage\n";
    return exit_code::kUsage;
  }

  std::optional<std::string> text = readFile(o.input);
  if (!text) {
    err << "barrierfix: cannot read '" << o.input << "'\n";
    return exit_code::kIoError;
  }

  Kernel kernel;
  try {
    kernel = parse(*text, ParseOptions{o.input, {}});
    if (o.blocks) kernel.launch.blocks = *o.blocks;
    if (o.threads) kernel.launch.threadsPerBlock = *o.threads;
    validateLaunch(kernel.launch, LaunchLimits{}, kernel.loc);
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return exit_code::kInputError;
  } catch (const SemanticError& e) {
    err << e.what() << '\n';
    return exit_code::kInputError;
  }

  RepairConfig cfg;
  cfg.strategy = o.maxsat ? Strategy::MaxSat : Strategy::Mhs;
  cfg.weights.gridEnabled = !o.disableGrid;
  cfg.weights.inspectExisting = !o.disableInspect;
  if (o.gw) cfg.weights.gridWeight = *o.gw;
  if (o.lw) cfg.weights.loopWeight = *o.lw;
  cfg.maxIterations = o.timeoutIters;
  cfg.unroll = o.unroll;
  if (o.timeoutSecs) {
    cfg.timeLimit = std::chrono::milliseconds(static_cast<std::int64_t>(*o.timeoutSecs * 1000));
  }

  RepairResult result = repair(kernel, cfg);

  std::string outPath = o.out.value_or(o.input + ".fixed.mk");
  std::string summaryPath = o.summary.value_or(o.input + ".summary.json");
  try {
    if (const auto* r = std::get_if<outcome::Repaired>(&result.outcome)) {
      writeFile(outPath, r->changes.empty() ? *text : prettyPrint(r->kernel));
    }
    writeFile(summaryPath, summaryText(o.input, result, cfg.strategy));
    if (o.dumpCnf) {
      std::ostringstream cnf;
      Weights weights = result.instrumented ? result.instrumented->weights() : Weights{};
      writeWcnf(cnf, result.phi, weights);
      writeFile(*o.dumpCnf, cnf.str());
    }
    if (o.dumpTrace) {
      std::ostringstream trace;
      for (std::size_t i = 0; i < result.iterations.size(); ++i) {
        const auto& v = result.iterations[i].verdict;
        if (!v) continue;
        if (const auto* race = std::get_if<verdict::Race>(&*v)) {
          writeTraceJsonLines(trace, race->witness, static_cast<int>(i + 1));
        } else if (const auto* div = std::get_if<verdict::Divergence>(&*v)) {
          writeTraceJsonLines(trace, div->witness, static_cast<int>(i + 1));
        }
      }
      writeFile(*o.dumpTrace, trace.str());
    }
  } catch (const IoError& e) {
    err << "barrierfix: " << e.what() << '\n';
    return exit_code::kIoError;
  }

  report(out, o.input, result);
  return exitCodeFor(result);
}

}  // namespace barrierfix
