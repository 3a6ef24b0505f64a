// Copyright 2026 The tbcontrol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tbcontrol/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>
#include <utility>
#include <vector>

#include "tbcontrol/errors.hpp"
#include "tbcontrol/model.hpp"
#include "tbcontrol/report_io.hpp"
#include "tbcontrol/scenario.hpp"
#include "tbcontrol/solver.hpp"

namespace tbcontrol {

namespace {

namespace fs = std::filesystem;

// Scenario-shaping flags shared by every subcommand. Values are kept as
// text and validated by the scenario parser so errors name the key.
struct ScenarioFlags {
  std::string scenario_path;
  std::vector<std::pair<std::string, CLI::Option*>> overrides;
  std::vector<std::string> storage = std::vector<std::string>(9);

  void attach(CLI::App& cmd) {
    cmd.add_option("--scenario", scenario_path, "Scenario file (key = value)");
    const std::pair<const char*, const char*> flags[] = {
        {"--case", "case"},         {"--strategy", "strategy"},
        {"--n-steps", "n_steps"},   {"--tol", "tol"},
        {"--relaxation", "relaxation"}, {"--max-iters", "max_iters"},
        {"--w1", "w1"},             {"--w2", "w2"},
        {"--beta", "beta"},
    };
    for (std::size_t k = 0; k < std::size(flags); ++k) {
      overrides.emplace_back(flags[k].second,
                             cmd.add_option(flags[k].first, storage[k]));
    }
  }

  ScenarioOverrides collect() const {
    ScenarioOverrides out;
    for (std::size_t k = 0; k < overrides.size(); ++k) {
      if (overrides[k].second->count() > 0) {
        out.emplace_back(overrides[k].first, storage[k]);
      }
    }
    return out;
  }

  Scenario load(const ScenarioOverrides& extra = {}) const {
    ScenarioOverrides all = collect();
    all.insert(all.end(), extra.begin(), extra.end());
    return scenario_path.empty() ? parse_scenario("", all)
                                 : load_scenario(scenario_path, all);
  }
};

fs::path prepare_out_dir(const std::string& dir) {
  fs::path path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return path;
}

void print_report(std::ostream& out, const std::string& label, const SolveReport& r) {
  out << std::left << std::setw(13) << label << " J = " << format_number(r.objective)
      << "  I(T)+L2(T) = " << format_number(r.terminal_infected_plus_latent)
      << "  iterations = " << r.iterations
      << (r.converged ? "" : "  (not converged)") << '\n';
  if (r.diagnostics.min_state_component < 0.0) {
    out << "  warning: negative compartment "
        << format_number(r.diagnostics.min_state_component) << '\n';
  }
}

int cmd_r0(const ScenarioFlags& flags, std::ostream& out) {
  const Scenario sc = flags.load();
  std::ostringstream text;
  text << std::fixed << std::setprecision(2) << basic_reproduction_number(sc.params);
  out << text.str() << '\n';
  return kExitOk;
}

int cmd_solve(const ScenarioFlags& flags, const std::string& out_dir, bool strict,
              std::ostream& out) {
  const Scenario sc = flags.load();
  StrategyOutcome row{sc.strategy, solve(sc.initial, sc.params, sc.strategy, sc.solver), {}};

  const fs::path dir = prepare_out_dir(out_dir);
  write_trajectory_csv(*row.report, sc.params, dir / ("trajectory_" + row.label() + ".csv"));
  write_summary(std::span(&row, 1), dir / "summary.csv");
  print_report(out, row.label(), *row.report);

  return strict && !row.report->converged ? kExitNotConverged : kExitOk;
}

int cmd_compare(const ScenarioFlags& flags, const std::string& out_dir, bool strict,
                std::ostream& out, std::ostream& err) {
  const Scenario sc = flags.load();
  const auto rows = compare_strategies(sc.initial, sc.params, sc.solver);

  const fs::path dir = prepare_out_dir(out_dir);
  write_summary(rows, dir / "summary.csv");

  bool any_failed = false;
  bool all_converged = true;
  for (const StrategyOutcome& row : rows) {
    if (!row.report) {
      any_failed = true;
      err << row.label() << ": failed: " << row.error << '\n';
      continue;
    }
    write_trajectory_csv(*row.report, sc.params,
                         dir / ("trajectory_" + row.label() + ".csv"));
    print_report(out, row.label(), *row.report);
    all_converged = all_converged && row.report->converged;
  }
  if (any_failed) return kExitFailure;
  return strict && !all_converged ? kExitNotConverged : kExitOk;
}

struct SweepFlags {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  std::size_t count = 5;
};

int cmd_sweep(const ScenarioFlags& flags, const SweepFlags& sweep,
              const std::string& out_dir, bool strict, std::ostream& out) {
  const auto& keys = model_param_keys();
  if (std::find(keys.begin(), keys.end(), sweep.param) == keys.end()) {
    throw ScenarioError(sweep.param, 0, "not a sweepable model parameter");
  }
  if (sweep.count < 1) throw ScenarioError("count", 0, "must be >= 1");

  std::vector<double> values(sweep.count);
  for (std::size_t k = 0; k < sweep.count; ++k) {
    values[k] = sweep.count == 1
                    ? sweep.from
                    : sweep.from + (sweep.to - sweep.from) * static_cast<double>(k) /
                                       static_cast<double>(sweep.count - 1);
  }
  // Validate every point before launching any solve.
  std::vector<Scenario> scenarios;
  for (double v : values) scenarios.push_back(flags.load({{sweep.param, format_number(v)}}));

  std::vector<std::future<SolveReport>> jobs;
  for (const Scenario& sc : scenarios) {
    jobs.push_back(std::async(std::launch::async, [&sc] {
      return solve(sc.initial, sc.params, sc.strategy, sc.solver);
    }));
  }

  const fs::path dir = prepare_out_dir(out_dir);
  std::ofstream csv(dir / "sweep.csv", std::ios::binary);
  if (!csv) throw IoError("cannot write '" + (dir / "sweep.csv").string() + "'");
  csv << "parameter,value," << kSummaryHeader << '\n';

  bool all_converged = true;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const SolveReport r = jobs[k].get();
    const std::string label = scenarios[k].strategy.label();
    csv << sweep.param << ',' << format_number(values[k]) << ',' << label << ','
        << format_number(r.terminal_infected_plus_latent) << ','
        << format_number(r.objective) << ',' << r.iterations << ','
        << (r.converged ? "true" : "false") << '\n';
    out << sweep.param << " = " << format_number(values[k]) << ": ";
    print_report(out, label, r);
    all_converged = all_converged && r.converged;
  }
  csv.flush();
  if (!csv) throw IoError("write failed for sweep.csv");
  return strict && !all_converged ? kExitNotConverged : kExitOk;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal treatment control for a five-compartment TB model", "tbcontrol"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  bool strict = false;
  SweepFlags sweep;

  auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario");
  auto* compare_cmd = app.add_subcommand("compare", "Compare no control and strategies 1-3");
  auto* r0_cmd = app.add_subcommand("r0", "Print the basic reproduction number");
  auto* sweep_cmd = app.add_subcommand("sweep", "Vary one model parameter over a range");

  ScenarioFlags solve_flags, compare_flags, r0_flags, sweep_flags;
  solve_flags.attach(*solve_cmd);
  compare_flags.attach(*compare_cmd);
  r0_flags.attach(*r0_cmd);
  sweep_flags.attach(*sweep_cmd);

  for (auto* cmd : {solve_cmd, compare_cmd, sweep_cmd}) {
    cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    cmd->add_flag("--strict", strict, "Exit 3 when a solve does not converge");
  }
  sweep_cmd->add_option("--param", sweep.param, "Model parameter key")->required();
  sweep_cmd->add_option("--from", sweep.from, "First value")->required();
  sweep_cmd->add_option("--to", sweep.to, "Last value")->required();
  sweep_cmd->add_option("--count", sweep.count, "Number of values")->capture_default_str();

  std::vector<const char*> argv{"tbcontrol"};
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (r0_cmd->parsed()) return cmd_r0(r0_flags, out);
    if (solve_cmd->parsed()) return cmd_solve(solve_flags, out_dir, strict, out);
    if (compare_cmd->parsed()) return cmd_compare(compare_flags, out_dir, strict, out, err);
    return cmd_sweep(sweep_flags, sweep, out_dir, strict, out);
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace tbcontrol
