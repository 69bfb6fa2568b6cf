// Copyright 2026 The edgeshare Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EDGESHARE_CLI_HPP_
#define EDGESHARE_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgeshare/analysis.hpp"
#include "edgeshare/engine.hpp"
#include "edgeshare/io.hpp"
#include "edgeshare/model.hpp"

namespace edgeshare::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kIo = 3,
};

// Invalid flag values or inconsistent input selection.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Method { kShapley, kFast, kBoth };

inline Method ParseMethod(const std::string& m) {
  if (m == "shapley") return Method::kShapley;
  if (m == "fast") return Method::kFast;
  if (m == "both") return Method::kBoth;
  throw UsageError("--method must be shapley, fast or both");
}

inline UtilityKind ParseUtility(const std::string& u) {
  if (u == "linear") return UtilityKind::kLinear;
  if (u == "sigmoid") return UtilityKind::kSigmoid;
  throw UsageError("--utility must be linear or sigmoid");
}

// "w:zeta", e.g. "1:0.5".
inline Weights ParseWeights(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--weights expects w:zeta");
  try {
    Weights w{std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    if (!(w.own >= 0.0) || !(w.shared >= 0.0)) throw UsageError("--weights must be nonnegative");
    return w;
  } catch (const std::logic_error&) {
    throw UsageError("--weights expects two numbers, w:zeta");
  }
}

struct RunConfig {
  std::string subcommand;
  std::optional<std::string> scenario_path;
  bool generator_flags_given = false;
  std::size_t players = 3;
  std::vector<std::size_t> apps{3};
  std::size_t resources = 3;
  UtilityKind utility = UtilityKind::kLinear;
  std::vector<double> mu{0.01};
  Weights weights{};
  std::uint64_t seed = 0;
  Method method = Method::kBoth;
  int restarts = 16;
  std::optional<double> tol;
  std::string out_dir = ".";
  int repetitions = 1;
  std::optional<std::string> payoffs_path;
};

namespace detail {

inline GeneratorParams GeneratorFor(const RunConfig& c, std::size_t apps, double mu) {
  GeneratorParams g;
  g.players = c.players;
  g.apps_per_player = apps;
  g.resources = c.resources;
  g.utility = c.utility;
  g.mu = mu;
  g.seed = c.seed;
  g.weights = c.weights;
  if (g.players == 0) throw UsageError("--players must be >= 1");
  if (g.players > Coalition::kMaxPlayers) throw UsageError("--players must be <= 24");
  if (g.apps_per_player == 0) throw UsageError("--apps must be >= 1");
  if (g.resources == 0) throw UsageError("--resources must be >= 1");
  if (g.utility == UtilityKind::kSigmoid && !(g.mu > 0.0)) throw UsageError("--mu must be > 0");
  return g;
}

inline Scenario LoadScenario(const RunConfig& c) {
  if (c.scenario_path && c.generator_flags_given) {
    throw UsageError("give either --scenario or generator flags, not both");
  }
  Scenario s;
  if (c.scenario_path) {
    try {
      s = ReadScenarioFile(*c.scenario_path);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    if (c.apps.size() != 1 || c.mu.size() != 1) {
      throw UsageError("--apps and --mu take a single value here");
    }
    s = GenerateScenario(GeneratorFor(c, c.apps.front(), c.mu.front()));
  }
  const auto problems = ValidateScenario(s);
  if (!problems.empty()) throw UsageError("invalid scenario: " + problems.front());
  return s;
}

inline std::filesystem::path OutDir(const RunConfig& c) {
  std::filesystem::path dir(c.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create " + c.out_dir);
  return dir;
}

inline bool AllLinear(const Scenario& s) {
  for (const auto& u : s.utilities) {
    if (u.kind != UtilityKind::kLinear) return false;
  }
  return true;
}

inline double DefaultTolerance(const Scenario& s) { return AllLinear(s) ? 1e-6 : 1e-3; }

inline std::optional<double> CommonMu(const Scenario& s) {
  std::optional<double> mu;
  for (const auto& u : s.utilities) {
    if (u.kind != UtilityKind::kSigmoid) return std::nullopt;
    if (mu && *mu != u.mu) return std::nullopt;
    mu = u.mu;
  }
  return mu;
}

inline std::size_t CommonApps(const Scenario& s) {
  const std::size_t m = s.num_apps(0);
  for (PlayerIndex n = 1; n < s.num_players; ++n) {
    if (s.num_apps(n) != m) return 0;
  }
  return m;
}

inline SolverOptions SolverFor(const RunConfig& c) {
  if (c.restarts < 1) throw UsageError("--restarts must be >= 1");
  SolverOptions o;
  o.restarts = c.restarts;
  return o;
}

struct Pipelines {
  std::optional<ShapleyResult> shapley;
  std::optional<FastCoreResult> fast;
  std::uint64_t shapley_solves = 0;
  std::uint64_t fast_solves = 0;
  double shapley_ms = 0.0;
  double fast_ms = 0.0;
};

inline Pipelines RunPipelines(const Scenario& s, Method method, SolverOptions solver,
                              int repetitions, std::size_t workers) {
  if (repetitions < 1) throw UsageError("--repetitions must be >= 1");
  using Clock = std::chrono::steady_clock;
  auto ms = [](Clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };
  Pipelines out;
  EngineOptions opt;
  opt.workers = repetitions > 1 ? 1 : workers;
  if (method != Method::kFast) {
    if (s.num_players > Coalition::kMaxPlayers) throw UsageError("too many players for Shapley");
    std::vector<double> times;
    for (int r = 0; r < repetitions; ++r) {
      SolveCounter counter;
      opt.solver = solver;
      opt.solver.counter = &counter;
      const auto t0 = Clock::now();
      auto res = ShapleyPayoffs(s, opt);
      times.push_back(ms(Clock::now() - t0));
      if (r == 0) {
        out.shapley = std::move(res);
        out.shapley_solves = counter.value();
      }
    }
    out.shapley_ms = Median(times);
  }
  if (method != Method::kShapley) {
    std::vector<double> times;
    for (int r = 0; r < repetitions; ++r) {
      SolveCounter counter;
      opt.solver = solver;
      opt.solver.counter = &counter;
      const auto t0 = Clock::now();
      auto res = FastCore(s, opt);
      times.push_back(ms(Clock::now() - t0));
      if (r == 0) {
        out.fast = std::move(res);
        out.fast_solves = counter.value();
      }
    }
    out.fast_ms = Median(times);
  }
  return out;
}

// v({n}); from the table when available, else w_n O_1^n from the fast run.
inline std::vector<double> Standalone(const Scenario& s, const Pipelines& p) {
  std::vector<double> out(s.num_players, 0.0);
  for (PlayerIndex n = 0; n < s.num_players; ++n) {
    if (p.shapley) {
      out[n] = p.shapley->table.value(Coalition::Singleton(n));
    } else {
      out[n] = s.weights[n].own * p.fast->phase1[n];
    }
  }
  return out;
}

inline std::vector<CoalitionRow> CoalitionRows(const Scenario& s, const Pipelines& p) {
  std::vector<CoalitionRow> rows;
  const std::size_t n = s.num_players;
  const Coalition grand = Coalition::Grand(n);
  if (p.shapley) {
    const auto& table = p.shapley->table;
    // By size, then by mask.
    for (std::size_t size = 1; size <= n; ++size) {
      for (std::uint32_t m = 1; m <= grand.mask(); ++m) {
        const Coalition c(m);
        if (c.size() != size) continue;
        const auto& e = table.entry(c);
        rows.push_back({"value", m, size, MembersLabel(c), e.value, e.player_utilities});
      }
    }
  } else {
    const auto standalone = Standalone(s, p);
    for (PlayerIndex q = 0; q < n; ++q) {
      std::vector<double> u(n, 0.0);
      u[q] = standalone[q];
      const Coalition c = Coalition::Singleton(q);
      rows.push_back({"value", c.mask(), 1, MembersLabel(c), standalone[q], u});
    }
  }
  auto sum = [](const PayoffVector& v) {
    double t = 0.0;
    for (double x : v) t += x;
    return t;
  };
  if (p.fast) {
    rows.push_back({"fast", grand.mask(), n, MembersLabel(grand), sum(p.fast->payoffs),
                    p.fast->payoffs});
  }
  if (p.shapley) {
    rows.push_back({"shapley", grand.mask(), n, MembersLabel(grand), sum(p.shapley->payoffs),
                    p.shapley->payoffs});
  }
  return rows;
}

inline std::vector<PayoffRow> PayoffRows(const Scenario& s, const Pipelines& p) {
  std::vector<PayoffRow> rows;
  const auto standalone = Standalone(s, p);
  auto emit = [&](const std::string& method, const PayoffVector& x) {
    for (PlayerIndex n = 0; n < x.size(); ++n) {
      rows.push_back({method, n + 1, x[n], standalone[n], x[n] - standalone[n]});
    }
  };
  if (p.fast) emit("fast", p.fast->payoffs);
  if (p.shapley) emit("shapley", p.shapley->payoffs);
  return rows;
}

inline std::vector<ComparisonRow> ComparisonRows(const Scenario& s, const Pipelines& p) {
  std::vector<ComparisonRow> rows;
  const ComparisonRow base{s.num_players, CommonApps(s), s.num_resources, CommonMu(s), "", 0, 0.0};
  if (p.fast) {
    auto r = base;
    r.method = "fast";
    r.solves = p.fast_solves;
    r.median_ms = p.fast_ms;
    rows.push_back(r);
  }
  if (p.shapley) {
    auto r = base;
    r.method = "shapley";
    r.solves = p.shapley_solves;
    r.median_ms = p.shapley_ms;
    rows.push_back(r);
  }
  return rows;
}

inline std::string SettingLabel(std::size_t n, std::size_t m, std::optional<double> mu) {
  std::string label = "N" + std::to_string(n) + "_M" + std::to_string(m);
  label += mu ? "_mu" + FormatDouble(*mu) : "_linear";
  return label;
}

}  // namespace detail

// gen: write <out>/scenario.json and print its digest.
inline int CmdGen(const RunConfig& c, std::ostream& out) {
  if (c.scenario_path) throw UsageError("gen does not read --scenario");
  if (c.apps.size() != 1 || c.mu.size() != 1) throw UsageError("--apps and --mu take one value");
  const Scenario s = GenerateScenario(detail::GeneratorFor(c, c.apps.front(), c.mu.front()));
  const auto path = detail::OutDir(c) / "scenario.json";
  const std::string text = ScenarioToString(s);
  WriteFile(path.string(), text);
  out << path.string() << " " << Digest(text) << "\n";
  return kOk;
}

// run: coalitions.csv, payoffs.csv and comparison.csv under --out.
inline int CmdRun(const RunConfig& c, std::ostream& out) {
  const Scenario s = detail::LoadScenario(c);
  if (c.method != Method::kFast && s.num_players > 16) {
    throw UsageError("Shapley enumeration limited to 16 players here; use --method fast");
  }
  const auto dir = detail::OutDir(c);
  const auto p = detail::RunPipelines(s, c.method, detail::SolverFor(c), c.repetitions,
                                      DefaultWorkers());
  WriteFile((dir / "coalitions.csv").string(),
            WriteCoalitionCsv(detail::CoalitionRows(s, p), s.num_players));
  WriteFile((dir / "payoffs.csv").string(), WritePayoffCsv(detail::PayoffRows(s, p)));
  WriteFile((dir / "comparison.csv").string(), WriteComparisonCsv(detail::ComparisonRows(s, p)));
  if (p.fast) out << "fast    total " << FormatDouble(p.fast->total()) << "\n";
  if (p.shapley) {
    double t = 0.0;
    for (double x : p.shapley->payoffs) t += x;
    out << "shapley total " << FormatDouble(t) << "  v(N) "
        << FormatDouble(p.shapley->table.value(p.shapley->table.grand())) << "\n";
  }
  return kOk;
}

// verify: core membership of each payoff vector plus the superadditivity audit,
// written to <out>/verify.csv. Payoffs come from --payoffs or are computed.
inline int CmdVerify(const RunConfig& c, std::ostream& out) {
  const Scenario s = detail::LoadScenario(c);
  const auto dir = detail::OutDir(c);
  const double tol = c.tol.value_or(detail::DefaultTolerance(s));
  if (!(tol >= 0.0)) throw UsageError("--tol must be >= 0");

  std::map<std::string, PayoffVector> candidates;
  Method needed = Method::kShapley;
  if (!c.payoffs_path) needed = c.method == Method::kShapley ? Method::kShapley : Method::kBoth;
  const auto p = detail::RunPipelines(s, needed, detail::SolverFor(c), 1, DefaultWorkers());
  const CharacteristicTable& table = p.shapley->table;
  if (c.payoffs_path) {
    std::vector<PayoffRow> rows;
    try {
      rows = ReadPayoffCsv(ReadFile(*c.payoffs_path));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    for (const auto& r : rows) {
      auto& v = candidates[r.method];
      if (r.player < 1 || r.player > s.num_players) throw UsageError("payoff row player index");
      v.resize(s.num_players, 0.0);
      v[r.player - 1] = r.payoff;
    }
    if (candidates.empty()) throw UsageError("payoff file has no rows");
  } else {
    if (c.method != Method::kFast) candidates["shapley"] = p.shapley->payoffs;
    if (c.method != Method::kShapley) candidates["fast"] = p.fast->payoffs;
  }

  bool ok = true;
  std::ostringstream report;
  report << "check,method,coalition,lhs,rhs,slack,ok\n";
  for (const auto& [method, x] : candidates) {
    const CoreReport core = CoreVerify(x, table, tol);
    for (const auto& sl : core.slack) {
      const bool fine = sl.slack() >= -tol;
      report << "core," << method << "," << MembersLabel(sl.coalition) << ","
             << FormatDouble(sl.payoff_sum) << "," << FormatDouble(sl.value) << ","
             << FormatDouble(sl.slack()) << "," << (fine ? 1 : 0) << "\n";
    }
    report << "efficiency," << method << "," << MembersLabel(table.grand()) << ","
           << FormatDouble(core.efficiency_gap + table.value(table.grand())) << ","
           << FormatDouble(table.value(table.grand())) << "," << FormatDouble(core.efficiency_gap)
           << "," << (core.group_rational ? 1 : 0) << "\n";
    if (core.in_core()) {
      out << method << ": in core (tol " << FormatDouble(tol) << ")\n";
    } else {
      ok = false;
      out << method << ": NOT in core (tol " << FormatDouble(tol) << ", efficiency gap "
          << FormatDouble(core.efficiency_gap) << ")\n";
      for (const auto& v : core.violated) {
        out << "  coalition {" << MembersLabel(v.coalition) << "} deficit "
            << FormatDouble(-v.slack()) << "\n";
      }
    }
  }
  const auto violations = SuperadditivityAudit(table, tol);
  for (const auto& v : violations) {
    report << "superadditivity,," << MembersLabel(v.first) << "|" << MembersLabel(v.second) << ","
           << FormatDouble(table.value(v.first) + table.value(v.second)) << ","
           << FormatDouble(table.value(v.first | v.second)) << "," << FormatDouble(-v.deficit)
           << ",0\n";
    out << "superadditivity violated: {" << MembersLabel(v.first) << "} + {"
        << MembersLabel(v.second) << "} deficit " << FormatDouble(v.deficit) << "\n";
  }
  if (violations.empty()) out << "superadditivity: ok\n";
  ok = ok && violations.empty();
  WriteFile((dir / "verify.csv").string(), report.str());
  return ok ? kOk : kVerificationFailed;
}

// bench: sweep apps-per-player x mu; comparison.csv plus long-format plot.csv.
inline int CmdBench(const RunConfig& c, std::ostream& out) {
  if (c.scenario_path) throw UsageError("bench generates its own scenarios; drop --scenario");
  const auto dir = detail::OutDir(c);
  const SolverOptions solver = detail::SolverFor(c);
  const Method method = c.players > 12 && c.method == Method::kBoth ? Method::kFast : c.method;
  std::vector<double> mus = c.mu;
  if (c.utility == UtilityKind::kLinear) mus = {c.mu.front()};

  std::vector<ComparisonRow> comparison;
  std::vector<PlotRow> plot;
  for (std::size_t apps : c.apps) {
    for (double mu : mus) {
      const Scenario s = GenerateScenario(detail::GeneratorFor(c, apps, mu));
      const auto p = detail::RunPipelines(s, method, solver, c.repetitions, 1);
      const std::string setting = detail::SettingLabel(s.num_players, apps, detail::CommonMu(s));
      for (auto& row : detail::ComparisonRows(s, p)) comparison.push_back(row);
      if (p.shapley) {
        const auto& table = p.shapley->table;
        for (std::uint32_t m = 1; m <= table.grand().mask(); ++m) {
          plot.push_back({setting, "value", "v_" + MembersLabel(Coalition(m)),
                          table.value(Coalition(m))});
        }
      }
      const auto standalone = detail::Standalone(s, p);
      for (PlayerIndex n = 0; n < s.num_players; ++n) {
        plot.push_back({setting, "alone", "utility_p" + std::to_string(n + 1), standalone[n]});
      }
      if (p.fast) {
        for (PlayerIndex n = 0; n < s.num_players; ++n) {
          plot.push_back({setting, "fast", "utility_p" + std::to_string(n + 1),
                          p.fast->payoffs[n]});
        }
        plot.push_back({setting, "fast", "median_ms", p.fast_ms});
      }
      if (p.shapley) {
        for (PlayerIndex n = 0; n < s.num_players; ++n) {
          plot.push_back({setting, "shapley", "utility_p" + std::to_string(n + 1),
                          p.shapley->payoffs[n]});
        }
        plot.push_back({setting, "shapley", "median_ms", p.shapley_ms});
      }
      if (p.fast && p.shapley && p.shapley_ms > 0.0) {
        const double pct = 100.0 * (p.shapley_ms - p.fast_ms) / p.shapley_ms;
        plot.push_back({setting, "fast", "time_reduction_pct", pct});
        out << setting << ": shapley " << FormatDouble(p.shapley_ms) << " ms, fast "
            << FormatDouble(p.fast_ms) << " ms, reduction " << FormatDouble(pct) << "%\n";
      } else {
        out << setting << ": fast " << FormatDouble(p.fast_ms) << " ms\n";
      }
    }
  }
  WriteFile((dir / "comparison.csv").string(), WriteComparisonCsv(comparison));
  WriteFile((dir / "plot.csv").string(), WritePlotCsv(plot));
  return kOk;
}

inline int Dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.subcommand == "gen") return CmdGen(c, out);
    if (c.subcommand == "run") return CmdRun(c, out);
    if (c.subcommand == "verify") return CmdVerify(c, out);
    if (c.subcommand == "bench") return CmdBench(c, out);
    err << "unknown subcommand '" << c.subcommand << "'\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace edgeshare::cli

#endif  // EDGESHARE_CLI_HPP_
