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

#include "tbcontrol/report_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "tbcontrol/errors.hpp"

namespace tbcontrol {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void write_trajectory_csv(const SolveReport& report, const ModelParams& p,
                          std::ostream& out) {
  const Trajectory& traj = report.trajectory;
  const std::size_t n = traj.grid.node_count();
  if (!traj.adjoints || traj.adjoints->size() != n || traj.states.size() != n ||
      traj.controls.size() != n) {
    throw DomainError("write_trajectory_csv: trajectory is incomplete");
  }

  out << kTrajectoryHeader << '\n';
  for (std::size_t k = 0; k < n; ++k) {
    const StateVec& x = traj.states[k];
    const AdjointVec& lam = (*traj.adjoints)[k];
    const ControlPair& u = traj.controls[k];

    out << format_number(traj.grid.node_time(k));
    for (double v : x.values()) out << ',' << format_number(v);
    out << ',' << format_number(u.u1) << ',' << format_number(u.u2);
    for (double v : lam.values()) out << ',' << format_number(v);
    for (double v : x.values()) out << ',' << format_number(v / p.n_total);
    out << '\n';
  }
}

void write_trajectory_csv(const SolveReport& report, const ModelParams& p,
                          const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_trajectory_csv(report, p, out);
  finish_write(out, path);
}

void write_summary(std::span<const StrategyOutcome> rows, std::ostream& out) {
  out << kSummaryHeader << '\n';
  for (const StrategyOutcome& row : rows) {
    out << row.label() << ',';
    if (!row.report) {
      out << ",,,failed\n";
      continue;
    }
    const SolveReport& r = *row.report;
    out << format_number(r.terminal_infected_plus_latent) << ','
        << format_number(r.objective) << ',' << r.iterations << ','
        << (r.converged ? "true" : "false") << '\n';
  }
}

void write_summary(std::span<const StrategyOutcome> rows,
                   const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_summary(rows, out);
  finish_write(out, path);
}

}  // namespace tbcontrol
