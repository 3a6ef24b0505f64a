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

#include "tbcontrol/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "tbcontrol/errors.hpp"
#include "tbcontrol/report_io.hpp"

namespace tbcontrol {

namespace {

struct Setting {
  std::string value;
  std::size_t line = 0;
};

using Settings = std::map<std::string, Setting, std::less<>>;

struct ParamField {
  const char* key;
  double ModelParams::*member;
};

constexpr ParamField kParamFields[] = {
    {"beta", &ModelParams::beta},       {"mu", &ModelParams::mu},
    {"delta", &ModelParams::delta},     {"phi", &ModelParams::phi},
    {"omega", &ModelParams::omega},     {"omega_r", &ModelParams::omega_r},
    {"sigma", &ModelParams::sigma},     {"sigma_r", &ModelParams::sigma_r},
    {"tau0", &ModelParams::tau0},       {"tau1", &ModelParams::tau1},
    {"tau2", &ModelParams::tau2},       {"n_total", &ModelParams::n_total},
    {"horizon", &ModelParams::horizon}, {"eps1", &ModelParams::eps1},
    {"eps2", &ModelParams::eps2},       {"w1", &ModelParams::w1},
    {"w2", &ModelParams::w2},
};

constexpr const char* kInitialKeys[] = {"s0", "l1_0", "i0", "l2_0", "r0"};

constexpr const char* kOtherKeys[] = {"case", "strategy", "n_steps", "tol",
                                      "relaxation", "max_iters"};

bool is_known_key(std::string_view key) {
  for (const auto& f : kParamFields) {
    if (key == f.key) return true;
  }
  for (const char* k : kInitialKeys) {
    if (key == k) return true;
  }
  for (const char* k : kOtherKeys) {
    if (key == k) return true;
  }
  return false;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_plain_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

double parse_real(const std::string& key, const Setting& s) {
  const std::string_view text = s.value;
  double value = 0.0;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    double num = 0.0, den = 0.0;
    if (parse_plain_double(trim(text.substr(0, slash)), num) &&
        parse_plain_double(trim(text.substr(slash + 1)), den) && den != 0.0) {
      value = num / den;
    } else {
      throw ScenarioError(key, s.line, "expected a number or a/b, got '" + s.value + "'");
    }
  } else if (!parse_plain_double(text, value)) {
    throw ScenarioError(key, s.line, "expected a number, got '" + s.value + "'");
  }
  if (!std::isfinite(value)) {
    throw ScenarioError(key, s.line, "value must be finite");
  }
  return value;
}

long long parse_integer(const std::string& key, const Setting& s) {
  long long value = 0;
  const char* begin = s.value.data();
  const char* end = begin + s.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ScenarioError(key, s.line, "expected an integer, got '" + s.value + "'");
  }
  return value;
}

Settings parse_settings(std::string_view text) {
  Settings settings;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ScenarioError("", line_no, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ScenarioError("", line_no, "missing key before '='");
    if (!is_known_key(key)) throw ScenarioError(key, line_no, "unknown key");
    if (value.empty()) throw ScenarioError(key, line_no, "missing value");
    if (settings.contains(key)) {
      throw ScenarioError(key, line_no,
                          "duplicate key (first set on line " +
                              std::to_string(settings.at(key).line) + ")");
    }
    settings.emplace(key, Setting{value, line_no});
  }
  return settings;
}

void apply_overrides(Settings& settings, const ScenarioOverrides& overrides) {
  for (const auto& [key, value] : overrides) {
    if (!is_known_key(key)) throw ScenarioError(key, 0, "unknown key");
    // A case chosen on top of a document replaces its explicit initials.
    if (key == "case") {
      for (const char* k : kInitialKeys) settings.erase(k);
    }
    settings.insert_or_assign(key, Setting{std::string(trim(value)), 0});
  }
}

std::size_t line_of(const Settings& settings, std::string_view key) {
  const auto it = settings.find(key);
  return it == settings.end() ? 0 : it->second.line;
}

Scenario build(const Settings& settings) {
  Scenario sc = default_scenario();

  for (const auto& f : kParamFields) {
    if (const auto it = settings.find(f.key); it != settings.end()) {
      sc.params.*f.member = parse_real(f.key, it->second);
    }
  }
  if (const auto v = sc.params.check()) {
    throw ScenarioError(v->field, line_of(settings, v->field), "must be " + v->rule);
  }

  if (const auto it = settings.find("strategy"); it != settings.end()) {
    const long long n = parse_integer("strategy", it->second);
    if (n < 0 || n > 3) {
      throw ScenarioError("strategy", it->second.line, "must be 0, 1, 2 or 3");
    }
    sc.strategy = StrategyMask::from_number(static_cast<int>(n));
  }

  if (const auto it = settings.find("n_steps"); it != settings.end()) {
    const long long n = parse_integer("n_steps", it->second);
    if (n < 2) throw ScenarioError("n_steps", it->second.line, "must be >= 2");
    sc.solver.grid.n_steps = static_cast<std::size_t>(n);
  }
  sc.solver.grid.t0 = 0.0;
  sc.solver.grid.t_final = sc.params.horizon;
  if (const auto it = settings.find("max_iters"); it != settings.end()) {
    const long long n = parse_integer("max_iters", it->second);
    if (n < 1) throw ScenarioError("max_iters", it->second.line, "must be >= 1");
    sc.solver.max_iters = static_cast<std::size_t>(n);
  }
  if (const auto it = settings.find("tol"); it != settings.end()) {
    sc.solver.tol = parse_real("tol", it->second);
    if (!(sc.solver.tol > 0.0)) throw ScenarioError("tol", it->second.line, "must be > 0");
  }
  if (const auto it = settings.find("relaxation"); it != settings.end()) {
    sc.solver.relaxation = parse_real("relaxation", it->second);
    if (!(sc.solver.relaxation >= 0.0 && sc.solver.relaxation < 1.0)) {
      throw ScenarioError("relaxation", it->second.line, "must be in [0, 1)");
    }
  }

  int case_number = 1;
  bool has_case = false;
  if (const auto it = settings.find("case"); it != settings.end()) {
    const long long n = parse_integer("case", it->second);
    if (n != 1 && n != 2) throw ScenarioError("case", it->second.line, "must be 1 or 2");
    case_number = static_cast<int>(n);
    has_case = true;
  }

  std::size_t explicit_count = 0;
  StateVec explicit_initial;
  for (std::size_t k = 0; k < StateVec::kSize; ++k) {
    if (const auto it = settings.find(kInitialKeys[k]); it != settings.end()) {
      explicit_initial[k] = parse_real(kInitialKeys[k], it->second);
      if (explicit_initial[k] < 0.0) {
        throw ScenarioError(kInitialKeys[k], it->second.line, "must be >= 0");
      }
      ++explicit_count;
    }
  }

  if (explicit_count == 0) {
    sc.initial = case_initial_state(case_number, sc.params.n_total);
    sc.case_label = std::to_string(case_number);
  } else if (explicit_count == StateVec::kSize) {
    sc.initial = explicit_initial;
    sc.case_label = has_case ? std::to_string(case_number) : "custom";
    const double total = sc.initial.sum();
    if (std::abs(total - sc.params.n_total) > 1e-9 * sc.params.n_total) {
      std::ostringstream msg;
      msg << "conservation: initial values sum to " << format_number(total)
          << " but n_total is " << format_number(sc.params.n_total)
          << " (s0 + l1_0 + i0 + l2_0 + r0 must equal n_total)";
      std::size_t line = 0;
      for (const char* k : kInitialKeys) line = std::max(line, line_of(settings, k));
      throw ScenarioError("s0..r0", line, msg.str());
    }
  } else {
    for (const char* k : kInitialKeys) {
      if (!settings.contains(k)) {
        throw ScenarioError(k, 0,
                            "explicit initial values need all of s0, l1_0, i0, "
                            "l2_0, r0");
      }
    }
  }
  return sc;
}

}  // namespace

StateVec case_initial_state(int case_number, double n_total) {
  switch (case_number) {
    case 1:
      return StateVec{76.0 / 120.0 * n_total, 36.0 / 120.0 * n_total,
                      5.0 / 120.0 * n_total, 2.0 / 120.0 * n_total,
                      1.0 / 120.0 * n_total};
    case 2:
      return StateVec{16.0 / 50.0 * n_total, 28.0 / 50.0 * n_total,
                      3.0 / 50.0 * n_total, 2.0 / 50.0 * n_total,
                      1.0 / 50.0 * n_total};
    default:
      throw DomainError("case must be 1 or 2, got " + std::to_string(case_number));
  }
}

Scenario default_scenario() {
  Scenario sc;
  sc.initial = case_initial_state(1, sc.params.n_total);
  sc.case_label = "1";
  sc.strategy = StrategyMask::from_number(3);
  sc.solver.grid = TimeGrid{0.0, sc.params.horizon, sc.solver.grid.n_steps};
  return sc;
}

Scenario parse_scenario(std::string_view text, const ScenarioOverrides& overrides) {
  Settings settings = parse_settings(text);
  apply_overrides(settings, overrides);
  return build(settings);
}

Scenario load_scenario(const std::filesystem::path& path,
                       const ScenarioOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("", 0, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), overrides);
}

std::string format_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "# tbcontrol scenario\n";
  for (const auto& f : kParamFields) {
    out << f.key << " = " << format_number(sc.params.*f.member) << '\n';
  }

  bool write_initials = true;
  if (sc.case_label == "1" || sc.case_label == "2") {
    out << "case = " << sc.case_label << '\n';
    const StateVec preset =
        case_initial_state(sc.case_label == "1" ? 1 : 2, sc.params.n_total);
    write_initials = !(preset == sc.initial);
  }
  if (write_initials) {
    for (std::size_t k = 0; k < StateVec::kSize; ++k) {
      out << kInitialKeys[k] << " = " << format_number(sc.initial[k]) << '\n';
    }
  }

  out << "strategy = " << sc.strategy.number() << '\n';
  out << "n_steps = " << sc.solver.grid.n_steps << '\n';
  out << "tol = " << format_number(sc.solver.tol) << '\n';
  out << "relaxation = " << format_number(sc.solver.relaxation) << '\n';
  out << "max_iters = " << sc.solver.max_iters << '\n';
  return out.str();
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << format_scenario(scenario);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

const std::vector<std::string>& model_param_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : kParamFields) k.emplace_back(f.key);
    return k;
  }();
  return keys;
}

}  // namespace tbcontrol
