// Copyright 2026 The wpir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "wpir/finite_field.h"
#include "wpir/leakage.h"
#include "wpir/mds_code.h"
#include "wpir/optimizer.h"
#include "wpir/schemes.h"
#include "wpir/simulator.h"
#include "wpir/status_macros.h"
#include "wpir/storage.h"

namespace wpir::cli {
namespace {

struct Settings {
  // Instance.
  std::string scheme;
  int files = 2;
  int servers = 3;
  int dim = 2;
  uint32_t field = 0;
  uint64_t seed = 1;
  std::string out;
  // enumerate
  uint64_t limit = 64;
  // table
  int server = 1;
  // tradeoff
  int grid = 60;
  std::vector<double> targets;
  bool no_symmetry = false;
  std::string plot_script;
  // verify, simulate
  bool exhaustive = false;
  uint64_t samples = 0;
  bool corrupt_generator = false;
  std::string pmf = "uniform";
};

// Validated instance parameters shared by every command.
struct Instance {
  SchemeKind kind;
  EffectiveParams params;
  uint32_t modulus;
};

std::string Num(double v) { return absl::StrFormat("%.12g", v); }

absl::StatusOr<Instance> ResolveInstance(const Settings& s) {
  Instance inst;
  WPIR_ASSIGN_OR_RETURN(inst.kind, ParseSchemeKind(s.scheme));
  WPIR_ASSIGN_OR_RETURN(inst.params,
                        EffectiveParams::Compute(s.servers, s.dim));
  inst.modulus = s.field != 0 ? s.field
                              : SmallestPrimeAtLeast(static_cast<uint32_t>(
                                    s.servers));
  if (!IsPrime(inst.modulus)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("--field %d is not prime", inst.modulus));
  }
  if (inst.modulus < static_cast<uint32_t>(s.servers)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "--field %d has fewer than N=%d evaluation points", inst.modulus,
        s.servers));
  }
  if (inst.modulus >= kMaxWireModulus) {
    return absl::InvalidArgumentError(
        absl::StrFormat("--field %d does not fit 16-bit answer symbols",
                        inst.modulus));
  }
  return inst;
}

// Resolved configuration as '#' comment lines.
std::string Header(absl::string_view command, const Settings& s,
                   const Instance& inst,
                   const std::vector<std::pair<std::string, std::string>>&
                       extra) {
  std::string out = absl::StrCat("# wpir ", command, "\n");
  absl::StrAppend(&out, "# scheme=", SchemeName(inst.kind), "\n");
  absl::StrAppend(&out, "# files=", s.files, "\n");
  absl::StrAppend(&out, "# servers=", s.servers, "\n");
  absl::StrAppend(&out, "# dim=", s.dim, "\n");
  absl::StrAppend(&out, "# field=", inst.modulus, "\n");
  absl::StrAppend(&out, "# seed=", s.seed, "\n");
  for (const auto& [key, value] : extra) {
    absl::StrAppend(&out, "# ", key, "=", value, "\n");
  }
  absl::StrAppend(&out, "# effective n=", inst.params.n,
                  " k=", inst.params.k, " lambda=", inst.params.lambda, "\n");
  return out;
}

int Fail(std::ostream& err, const absl::Status& status, int code) {
  err << "error: " << status.message() << "\n";
  return code;
}

int Emit(const std::string& path, const std::string& text, std::ostream& out,
         std::ostream& err) {
  if (path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(path, std::ios::binary);
  file << text;
  if (!file) {
    err << "error: cannot write " << path << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int CmdEnumerate(const Settings& s, const Instance& inst, std::ostream& out,
                 std::ostream& err) {
  absl::StatusOr<uint64_t> count = StrategyAlphabet::Cardinality(
      inst.kind, inst.params.n, inst.params.k, s.files);
  if (!count.ok()) return Fail(err, count.status(), kExitUsage);
  std::string text = Header("enumerate", s, inst,
                            {{"limit", absl::StrCat(s.limit)}});
  absl::StrAppend(&text, "cardinality,", *count, "\n");
  if (*count > s.limit) {
    absl::StrAppend(&text, "# members elided: ", *count, " > limit ", s.limit,
                    "\n");
    return Emit(s.out, text, out, err);
  }
  absl::StatusOr<StrategyAlphabet> alphabet = StrategyAlphabet::Enumerate(
      inst.kind, inst.params.n, inst.params.k, s.files);
  if (!alphabet.ok()) return Fail(err, alphabet.status(), kExitUsage);
  absl::StrAppend(&text, "index,strategy\n");
  for (size_t i = 0; i < alphabet->size(); ++i) {
    absl::StrAppend(&text, i + 1, ",", (*alphabet)[i].ToString(), "\n");
  }
  return Emit(s.out, text, out, err);
}

int CmdTable(const Settings& s, const Instance& inst, std::ostream& out,
             std::ostream& err) {
  if (s.server < 1 || s.server > s.servers) {
    err << "error: --server must be in [1:" << s.servers << "]\n";
    return kExitUsage;
  }
  absl::StatusOr<Scheme> scheme =
      Scheme::Create(inst.kind, s.files, s.servers, s.dim);
  if (!scheme.ok()) return Fail(err, scheme.status(), kExitUsage);
  absl::StatusOr<SchemeAnalysis> analysis = SchemeAnalysis::Build(*scheme);
  if (!analysis.ok()) return Fail(err, analysis.status(), kExitUsage);
  const ConditionalQueryTable& table = analysis->table(s.server);
  std::string text = Header("table", s, inst,
                            {{"server", absl::StrCat(s.server)}});
  absl::StrAppend(&text, "# strategies=", table.num_strategies(),
                  " queries=", table.size(), "\n");
  absl::StrAppend(&text, "# D(z) = ",
                  analysis->cost()
                      .ReducedOnSimplex(table.num_strategies())
                      .ToString(),
                  "\n");
  absl::StrAppend(&text, table.ToCsv());
  return Emit(s.out, text, out, err);
}

std::string PlotScript(const std::string& header,
                       const std::vector<TradeoffPoint>& points,
                       absl::string_view label, const std::string& image) {
  std::string text = "#!/usr/bin/env python3\n" + header;
  absl::StrAppend(&text,
                  "import matplotlib\nmatplotlib.use(\"Agg\")\n"
                  "import matplotlib.pyplot as plt\n\npoints = [\n");
  for (const TradeoffPoint& p : points) {
    absl::StrAppend(&text, "    (", Num(p.leakage_normalized), ", ",
                    Num(p.rate), "),\n");
  }
  absl::StrAppend(
      &text, "]\npoints.sort()\n",
      "plt.plot([p[0] for p in points], [p[1] for p in points], marker=\"o\", "
      "label=\"",
      label, "\")\n",
      "plt.xlabel(\"normalized leakage\")\nplt.ylabel(\"rate\")\n"
      "plt.grid(True)\nplt.legend()\nplt.savefig(\"",
      image, "\")\n");
  return text;
}

int CmdTradeoff(const Settings& s, const Instance& inst, std::ostream& out,
                std::ostream& err) {
  if (s.targets.empty() && s.grid < 1) {
    err << "error: --grid must be positive\n";
    return kExitUsage;
  }
  absl::StatusOr<Scheme> scheme =
      Scheme::Create(inst.kind, s.files, s.servers, s.dim);
  if (!scheme.ok()) return Fail(err, scheme.status(), kExitUsage);
  absl::StatusOr<SchemeAnalysis> analysis = SchemeAnalysis::Build(*scheme);
  if (!analysis.ok()) return Fail(err, analysis.status(), kExitUsage);
  TradeoffOptimizer::Options options;
  options.use_symmetry = !s.no_symmetry;
  absl::StatusOr<TradeoffOptimizer> optimizer =
      TradeoffOptimizer::Create(*analysis, options);
  if (!optimizer.ok()) return Fail(err, optimizer.status(), kExitUsage);

  std::vector<double> targets =
      s.targets.empty() ? optimizer->DefaultGrid(s.grid) : s.targets;
  std::string header = Header(
      "tradeoff", s, inst,
      {{"grid", s.targets.empty() ? absl::StrCat(s.grid) : "explicit"},
       {"symmetry", s.no_symmetry ? "off" : "on"}});
  absl::StrAppend(&header, "# D range [", Num(optimizer->min_cost()), ", ",
                  Num(optimizer->max_cost()), "], strategy orbits ",
                  optimizer->reduction().num_strategy_orbits(), "\n");
  std::string text = header;
  absl::StrAppend(&text, "scheme,M,N,K,D_target,D_achieved,leakage_bits,",
                  "leakage_normalized,rate\n");
  std::vector<TradeoffPoint> feasible;
  for (double target : targets) {
    std::string prefix = absl::StrCat(SchemeName(inst.kind), ",", s.files,
                                      ",", s.servers, ",", s.dim, ",",
                                      Num(target), ",");
    absl::StatusOr<TradeoffPoint> point = optimizer->Solve(target);
    if (absl::IsOutOfRange(point.status())) {
      absl::StrAppend(&text, prefix, "infeasible,,,\n");
      err << "note: D_target " << Num(target) << " is infeasible\n";
      continue;
    }
    if (!point.ok()) return Fail(err, point.status(), kExitVerificationFailed);
    absl::StrAppend(&text, prefix, Num(point->cost_achieved), ",",
                    Num(point->leakage_bits), ",",
                    Num(point->leakage_normalized), ",", Num(point->rate),
                    "\n");
    feasible.push_back(*std::move(point));
  }
  int code = Emit(s.out, text, out, err);
  if (code != kExitOk || s.plot_script.empty()) return code;
  std::string image = s.out.empty() ? "tradeoff.png" : s.out + ".png";
  std::string label = absl::StrFormat("%s M=%d N=%d K=%d",
                                      SchemeName(inst.kind), s.files,
                                      s.servers, s.dim);
  std::ofstream script(s.plot_script, std::ios::binary);
  script << PlotScript(header, feasible, label, image);
  if (!script) {
    err << "error: cannot write " << s.plot_script << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

absl::StatusOr<MdsCode> BuildCode(const Settings& s, const Instance& inst) {
  WPIR_ASSIGN_OR_RETURN(PrimeField field, PrimeField::Create(inst.modulus));
  WPIR_ASSIGN_OR_RETURN(MdsCode code,
                        MdsCode::ReedSolomon(s.servers, s.dim, field));
  if (!s.corrupt_generator) return code;
  // Test hook: server 2 stores a copy of server 1's symbols.
  FieldMatrix g = code.generator();
  for (size_t r = 0; r < g.rows(); ++r) g.set(r, 1, g.at(r, 0));
  return MdsCode::FromGeneratorUnchecked(std::move(g));
}

absl::StatusOr<Deployment> BuildDeployment(const Settings& s,
                                           const Instance& inst,
                                           const Scheme& scheme) {
  WPIR_ASSIGN_OR_RETURN(MdsCode code, BuildCode(s, inst));
  FileSet files = FileSet::Random(code.field(), s.files, inst.params.lambda,
                                  s.dim, s.seed);
  return Deployment::Create(scheme, std::move(files), std::move(code));
}

VerifyOptions RetrievalOptions(const Settings& s) {
  VerifyOptions options;
  if (s.exhaustive || s.samples == 0) {
    options.mode = VerifyOptions::Mode::kExhaustive;
  } else {
    options.mode = VerifyOptions::Mode::kSampled;
    options.samples = s.samples;
    options.seed = s.seed;
  }
  return options;
}

int CmdVerify(const Settings& s, const Instance& inst, std::ostream& out,
              std::ostream& err) {
  absl::StatusOr<Scheme> scheme =
      Scheme::Create(inst.kind, s.files, s.servers, s.dim);
  if (!scheme.ok()) return Fail(err, scheme.status(), kExitUsage);
  absl::StatusOr<Deployment> deployment = BuildDeployment(s, inst, *scheme);
  if (!deployment.ok()) return Fail(err, deployment.status(), kExitUsage);
  absl::StatusOr<SchemeAnalysis> analysis = SchemeAnalysis::Build(*scheme);
  if (!analysis.ok()) return Fail(err, analysis.status(), kExitUsage);
  VerifyOptions options = RetrievalOptions(s);
  options.count_queries = true;
  absl::StatusOr<VerifyReport> report =
      VerifyRetrievability(*deployment, options);
  if (!report.ok()) return Fail(err, report.status(), kExitUsage);

  bool all_pass = true;
  std::string body = "check,status,detail\n";
  auto record = [&](absl::string_view check, bool pass,
                    const std::string& detail) {
    all_pass = all_pass && pass;
    absl::StrAppend(&body, check, ",", pass ? "PASS" : "FAIL", ",", detail,
                    "\n");
  };

  bool mds = CheckMds(deployment->code());
  record("mds", mds,
         mds ? "every K columns of the generator are independent"
             : "generator violates the MDS property");

  bool normalized = true;
  for (const ConditionalQueryTable& table : analysis->tables()) {
    normalized = normalized && table.CheckNormalization().ok();
  }
  record("table_normalization", normalized,
         absl::StrCat(analysis->tables().size(), " server tables"));
  record("servers_identical", analysis->ServersIdentical(),
         "time-shared query distribution");

  record("retrievability", report->ok(),
         absl::StrFormat("%d retrievals; %d failures", report->retrievals,
                         report->failures.size()));

  // Every observed query is in the server's table with the same length.
  bool support = true;
  for (int j = 1; j <= s.servers; ++j) {
    const ConditionalQueryTable& table = analysis->table(j);
    for (const auto& [q, count] : report->query_counts[j - 1]) {
      std::optional<size_t> index = table.IndexOf(q);
      support = support && index.has_value() &&
                table.answer_length(*index) ==
                    AnswerLength(q, scheme->params());
    }
  }
  record("query_support", support, "observed queries appear in the tables");

  // Mean download against D at the uniform PMF.
  size_t strategies = scheme->alphabet().size();
  std::vector<double> uniform(strategies, 1.0 / strategies);
  double expected = analysis->cost().Evaluate(uniform);
  double mean = report->mean_downloaded();
  double slack = options.mode == VerifyOptions::Mode::kExhaustive
                     ? 1e-9
                     : 5 * report->download_standard_error() + 1e-9;
  record("download_cost", std::abs(mean - expected) <= slack,
         absl::StrFormat("mean %s vs D(uniform) %s", Num(mean),
                         Num(expected)));

  size_t listed = 0;
  for (const RetrievalFailure& f : report->failures) {
    if (++listed > 20) {
      absl::StrAppend(&body, "# ", report->failures.size() - 20,
                      " more failures\n");
      break;
    }
    absl::StrAppend(&body, "failure,m=", f.m, ";s=", f.strategy + 1,
                    ";t=", f.shift, ",", f.message, "\n");
  }

  std::string text = Header(
      "verify", s, inst,
      {{"mode", options.mode == VerifyOptions::Mode::kExhaustive
                    ? "exhaustive"
                    : absl::StrCat("sampled:", s.samples)},
       {"corrupt_generator", s.corrupt_generator ? "true" : "false"}});
  absl::StrAppend(&text, body, "result,", all_pass ? "PASS" : "FAIL", ",\n");
  int code = Emit(s.out, text, out, err);
  if (code != kExitOk) return code;
  return all_pass ? kExitOk : kExitVerificationFailed;
}

// "uniform", "optimal:<D_target>" or |S| comma-separated probabilities.
absl::StatusOr<std::vector<double>> ResolvePmf(const std::string& text,
                                               const SchemeAnalysis& analysis) {
  size_t strategies = analysis.scheme().alphabet().size();
  if (text == "uniform") return std::vector<double>(strategies, 1.0 / strategies);
  if (text.rfind("optimal:", 0) == 0) {
    double target = 0;
    if (!absl::SimpleAtod(text.substr(8), &target)) {
      return absl::InvalidArgumentError("bad --pmf optimal:<D_target>");
    }
    WPIR_ASSIGN_OR_RETURN(TradeoffOptimizer optimizer,
                          TradeoffOptimizer::Create(analysis));
    WPIR_ASSIGN_OR_RETURN(TradeoffPoint point, optimizer.Solve(target));
    return point.z;
  }
  std::vector<double> z;
  for (absl::string_view token : absl::StrSplit(text, ',')) {
    double v = 0;
    if (!absl::SimpleAtod(token, &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad --pmf entry '", token, "'"));
    }
    z.push_back(v);
  }
  WPIR_RETURN_IF_ERROR(ValidatePmf(z, strategies));
  return z;
}

int CmdSimulate(const Settings& s, const Instance& inst, std::ostream& out,
                std::ostream& err) {
  absl::StatusOr<Scheme> scheme =
      Scheme::Create(inst.kind, s.files, s.servers, s.dim);
  if (!scheme.ok()) return Fail(err, scheme.status(), kExitUsage);
  absl::StatusOr<Deployment> deployment = BuildDeployment(s, inst, *scheme);
  if (!deployment.ok()) return Fail(err, deployment.status(), kExitUsage);
  absl::StatusOr<SchemeAnalysis> analysis = SchemeAnalysis::Build(*scheme);
  if (!analysis.ok()) return Fail(err, analysis.status(), kExitUsage);
  absl::StatusOr<std::vector<double>> z = ResolvePmf(s.pmf, *analysis);
  if (!z.ok()) return Fail(err, z.status(), kExitUsage);

  VerifyOptions options;
  options.mode = VerifyOptions::Mode::kSampled;
  options.samples = s.samples == 0 ? 1000 : s.samples;
  options.seed = s.seed;
  options.z = *z;
  std::ostringstream transcripts;
  options.transcript_sink = &transcripts;
  absl::StatusOr<VerifyReport> report =
      VerifyRetrievability(*deployment, options);
  if (!report.ok()) return Fail(err, report.status(), kExitUsage);

  std::string text = Header(
      "simulate", s, inst,
      {{"samples", absl::StrCat(options.samples)}, {"pmf", s.pmf}});
  absl::StrAppend(&text, transcripts.str());
  int code = Emit(s.out, text, out, err);
  if (code != kExitOk) return code;
  err << absl::StrFormat(
      "retrievals=%d failures=%d mean_download=%s D(z)=%s\n",
      report->retrievals, report->failures.size(),
      Num(report->mean_downloaded()), Num(analysis->cost().Evaluate(*z)));
  return report->ok() ? kExitOk : kExitVerificationFailed;
}

void AddInstanceOptions(CLI::App* cmd, Settings& s) {
  cmd->add_option("--scheme", s.scheme, "zyqt, ztsl or olr")->required();
  cmd->add_option("--files,-M", s.files, "number of files M")
      ->check(CLI::Range(1, 255));
  cmd->add_option("--servers,-N", s.servers, "number of servers N")
      ->check(CLI::Range(2, 255));
  cmd->add_option("--dim,-K", s.dim, "code dimension K")
      ->check(CLI::Range(1, 254));
  cmd->add_option("--field", s.field,
                  "prime field modulus (default: smallest prime >= N)");
  cmd->add_option("--seed", s.seed, "seed for files and sampling");
  cmd->add_option("--out", s.out, "output path (default: stdout)");
  // Consumed by ExpandConfig before parsing; registered for --help.
  cmd->add_option("--config", "flat key=value configuration file");
}

// Replaces "--config FILE" with one "--key=value" argument per entry,
// placed right after the subcommand so command-line options take
// precedence.
std::vector<std::string> ExpandConfig(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::vector<std::string> paths;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      paths.push_back(args[++i]);
    } else if (args[i].rfind("--config=", 0) == 0) {
      paths.push_back(args[i].substr(9));
    } else {
      rest.push_back(args[i]);
    }
  }
  if (paths.empty() || rest.empty()) return args;
  std::vector<std::string> from_file;
  for (const std::string& path : paths) {
    for (const CLI::ConfigItem& item : CLI::ConfigINI().from_file(path)) {
      if (item.name == "++" || item.name == "--") continue;
      from_file.push_back("--" + item.fullname() + "=" +
                          CLI::detail::join(item.inputs, ","));
    }
  }
  rest.insert(rest.begin() + 1, from_file.begin(), from_file.end());
  return rest;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  Settings s;
  CLI::App app("Weakly-private information retrieval from MDS-coded storage",
               "wpir");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  CLI::App* enumerate =
      app.add_subcommand("enumerate", "strategy alphabet and its cardinality");
  AddInstanceOptions(enumerate, s);
  enumerate->add_option("--limit", s.limit,
                        "list members only up to this many");

  CLI::App* table =
      app.add_subcommand("table", "conditional query table of one server");
  AddInstanceOptions(table, s);
  table->add_option("--server", s.server, "server index j");

  CLI::App* tradeoff =
      app.add_subcommand("tradeoff", "rate-leakage trade-off sweep");
  AddInstanceOptions(tradeoff, s);
  tradeoff->add_option("--grid", s.grid, "number of download cost targets");
  tradeoff->add_option("--targets", s.targets, "explicit D targets")
      ->delimiter(',');
  tradeoff->add_flag("--no-symmetry", s.no_symmetry,
                     "solve the unreduced program");
  tradeoff->add_option("--plot-script", s.plot_script,
                       "also write a matplotlib script");

  CLI::App* verify =
      app.add_subcommand("verify", "retrievability and consistency checks");
  AddInstanceOptions(verify, s);
  verify->add_flag("--exhaustive", s.exhaustive, "every (m, s, t) (default)");
  verify->add_option("--samples", s.samples, "sampled retrievals");
  verify->add_flag("--corrupt-generator", s.corrupt_generator)->group("");

  CLI::App* simulate =
      app.add_subcommand("simulate", "sampled retrievals as JSON lines");
  AddInstanceOptions(simulate, s);
  simulate->add_option("--samples", s.samples, "retrievals (default 1000)");
  simulate->add_option("--pmf", s.pmf,
                       "uniform, optimal:<D_target> or p1,p2,...");

  std::vector<std::string> expanded;
  try {
    expanded = ExpandConfig(args);
  } catch (const CLI::FileError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::vector<const char*> argv = {"wpir"};
  for (const std::string& a : expanded) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }
  if (s.exhaustive && s.samples != 0) {
    err << "error: --exhaustive and --samples are exclusive\n";
    return kExitUsage;
  }

  absl::StatusOr<Instance> inst = ResolveInstance(s);
  if (!inst.ok()) return Fail(err, inst.status(), kExitUsage);
  if (enumerate->parsed()) return CmdEnumerate(s, *inst, out, err);
  if (table->parsed()) return CmdTable(s, *inst, out, err);
  if (tradeoff->parsed()) return CmdTradeoff(s, *inst, out, err);
  if (verify->parsed()) return CmdVerify(s, *inst, out, err);
  return CmdSimulate(s, *inst, out, err);
}

}  // namespace wpir::cli
