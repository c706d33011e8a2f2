// Copyright 2026 The qbattery Authors
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

#include "qbattery/sweep.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <random>
#include <sstream>

#include "qbattery/lindblad.hpp"

namespace qbattery {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_number(const std::string& name, const std::string& s) {
  if (s.empty()) throw UsageError("--" + name + ": empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw UsageError("--" + name + ": not a finite number: '" + s + "'");
  }
  return v;
}

long parse_count(const std::string& name, const std::string& s) {
  const double v = parse_number(name, s);
  if (v < 1 || v != std::floor(v) || v > 1e7) {
    throw UsageError("--" + name + ": point count must be a positive integer, got '" + s + "'");
  }
  return static_cast<long>(v);
}

ModelParams make_params(double gamma, double p, double g, double alpha) {
  ModelParams m;
  m.omega0 = 1.0;
  m.kappa = 1.0;
  m.gamma = gamma;
  m.p = p;
  m.g = g;
  m.alpha = alpha;
  return m;
}

const char* status_of(bool converged) { return converged ? "ok" : "nonconverged"; }

std::vector<double> alpha_values(const AlphaChoice& a) {
  if (a.kind == AlphaChoice::Kind::kAbsolute) return a.absolute.values;
  return {std::nan("")};  // resolved per point
}

double resolve_alpha(const AlphaChoice& a, const ModelParams& params, double absolute_value) {
  switch (a.kind) {
    case AlphaChoice::Kind::kAbsolute:
      return absolute_value;
    case AlphaChoice::Kind::kRelative:
      return a.relative * params.g;
    case AlphaChoice::Kind::kOptimal:
      return optimal_alpha(params);
  }
  return absolute_value;
}

void require_at_most_two_ranges(std::initializer_list<const Axis*> axes) {
  int ranges = 0;
  for (const Axis* a : axes) ranges += a->is_range() ? 1 : 0;
  if (ranges > 2) throw UsageError("at most two parameters may be swept at once");
}

double steady_ergotropy_direct(const ModelParams& params) {
  try {
    return fixed_point_steady(params).report.ergotropy;
  } catch (const NumericalConsistencyError&) {
    return -1.0;
  }
}

}  // namespace

Axis parse_axis(const std::string& name, const std::string& text) {
  std::vector<std::string> parts = split(text, ':');
  Spacing spacing = Spacing::kLinear;
  if (!parts.empty() && parts.front() == "log") {
    spacing = Spacing::kLog;
    parts.erase(parts.begin());
    if (parts.size() != 3) throw UsageError("--" + name + ": expected log:min:max:n, got '" + text + "'");
  }
  Axis axis{name, {}};
  if (parts.size() == 1) {
    axis.values.push_back(parse_number(name, parts[0]));
    return axis;
  }
  if (parts.size() != 3) {
    throw UsageError("--" + name + ": expected a value, min:max:n or log:min:max:n, got '" + text + "'");
  }
  const double lo = parse_number(name, parts[0]);
  const double hi = parse_number(name, parts[1]);
  const long n = parse_count(name, parts[2]);
  if (hi < lo) throw UsageError("--" + name + ": range maximum is below minimum");
  if (spacing == Spacing::kLog && !(lo > 0.0)) {
    throw UsageError("--" + name + ": log spacing needs a positive minimum");
  }
  axis.values.reserve(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    const double f = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
    double v = spacing == Spacing::kLinear ? lo + (hi - lo) * f
                                           : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * f);
    if (k == 0) v = lo;
    if (k == n - 1) v = hi;
    axis.values.push_back(v);
  }
  return axis;
}

void check_axis_domain(const Axis& axis) {
  for (double v : axis.values) {
    if (axis.name == "p") {
      if (v < 0.0 || v > 1.0) throw UsageError("--p: values must lie in [0, 1]");
    } else if (v < 0.0) {
      throw UsageError("--" + axis.name + ": values must be >= 0");
    }
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("CsvTable: row width differs from header");
  rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
}

std::vector<std::string> parse_outputs(const std::string& csv_list,
                                       const std::vector<std::string>& allowed) {
  std::vector<std::string> out;
  for (const std::string& item : split(csv_list, ',')) {
    if (std::find(allowed.begin(), allowed.end(), item) == allowed.end()) {
      throw UsageError("--outputs: unknown output '" + item + "'");
    }
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  if (out.empty()) throw UsageError("--outputs: empty list");
  return out;
}

double optimal_alpha(const ModelParams& params, double rel_tol) {
  // Bracket on a log grid, then golden-section on the neighbouring interval.
  const double factor = 1.2;
  double best_alpha = 0.0;
  double best = -1.0;
  std::vector<double> grid;
  for (double a = 1e-3; a <= 10.0; a *= factor) grid.push_back(a);
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    ModelParams m = params;
    m.alpha = grid[k];
    const double e = steady_ergotropy_direct(m);
    if (e > best) {
      best = e;
      best_k = k;
    }
  }
  if (best < 0.0) return 0.0;
  best_alpha = grid[best_k];
  double lo = best_k == 0 ? grid[0] / factor : grid[best_k - 1];
  double hi = best_k + 1 == grid.size() ? grid.back() * factor : grid[best_k + 1];

  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  auto eval = [&](double a) {
    ModelParams m = params;
    m.alpha = a;
    return steady_ergotropy_direct(m);
  };
  double c = hi - r * (hi - lo);
  double d = lo + r * (hi - lo);
  double fc = eval(c);
  double fd = eval(d);
  while (hi - lo > rel_tol * 0.5 * (hi + lo)) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - r * (hi - lo);
      fc = eval(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + r * (hi - lo);
      fd = eval(d);
    }
  }
  const double mid = 0.5 * (lo + hi);
  return eval(mid) >= best ? mid : best_alpha;
}

MinPResult min_p_for_max(const ModelParams& base, const std::vector<double>& p_grid,
                         const AlphaChoice& alpha, double rel_gap) {
  std::vector<double> grid = p_grid;
  std::sort(grid.begin(), grid.end());
  for (double p : grid) {
    ModelParams m = base;
    m.p = p;
    m.memory_rate.reset();
    m.alpha = resolve_alpha(alpha, m, alpha.absolute.values.front());
    const double e = steady_ergotropy_direct(m);
    if (e >= (1.0 - rel_gap) * kMaxErgotropy) return {p, m.alpha, e};
  }
  return {};
}

CsvTable run_steady(const SteadyCommand& cmd, const RunSettings& settings, CommandReport& report) {
  check_axis_domain(cmd.p);
  check_axis_domain(cmd.g);
  if (cmd.alpha.kind == AlphaChoice::Kind::kAbsolute) check_axis_domain(cmd.alpha.absolute);
  require_at_most_two_ranges({&cmd.p, &cmd.g, &cmd.alpha.absolute});

  struct Point {
    double p, g, alpha;
  };
  std::vector<Point> points;
  for (double p : cmd.p.values)
    for (double g : cmd.g.values)
      for (double a : alpha_values(cmd.alpha)) points.push_back({p, g, a});

  struct Row {
    double alpha = 0.0;
    SteadyResult ss;
    double nb_b = 0.0, nb_j = 0.0;
  };
  auto wants = [&](const char* o) {
    return std::find(cmd.outputs.begin(), cmd.outputs.end(), o) != cmd.outputs.end();
  };
  const bool need_nb_b = wants("nb_battery");
  const bool need_nb_j = wants("nb_joint");

  const std::vector<Row> rows = parallel_map<Row>(points.size(), settings.workers, [&](std::size_t i) {
    ModelParams m = make_params(settings.gamma, points[i].p, points[i].g, 0.0);
    m.alpha = resolve_alpha(cmd.alpha, m, points[i].alpha);
    Row r;
    r.alpha = m.alpha;
    r.ss = run_to_steady(m, settings.steady);
    if (need_nb_b) r.nb_b = nb_for(m, Subsystem::kBattery, settings.nb);
    if (need_nb_j) r.nb_j = nb_for(m, Subsystem::kJoint, settings.nb);
    return r;
  });

  std::vector<std::string> header{"p", "g", "alpha"};
  header.insert(header.end(), cmd.outputs.begin(), cmd.outputs.end());
  header.push_back("status");
  CsvTable table(header);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Row& r = rows[i];
    std::vector<std::string> cells{format_double(points[i].p), format_double(points[i].g),
                                   format_double(r.alpha)};
    for (const std::string& o : cmd.outputs) {
      if (o == "energy") cells.push_back(format_double(r.ss.report.energy));
      else if (o == "ergotropy") cells.push_back(format_double(r.ss.report.ergotropy));
      else if (o == "purity") cells.push_back(format_double(r.ss.report.purity));
      else if (o == "n_collisions") cells.push_back(std::to_string(r.ss.n_collisions));
      else if (o == "nb_battery") cells.push_back(format_double(r.nb_b));
      else if (o == "nb_joint") cells.push_back(format_double(r.nb_j));
    }
    cells.push_back(status_of(r.ss.converged));
    if (!r.ss.converged) ++report.nonconverged;
    table.add_row(std::move(cells));
  }
  report.rows = table.rows().size();
  return table;
}

CsvTable run_continuous(const ContinuousCommand& cmd, const RunSettings& settings,
                        CommandReport& report) {
  check_axis_domain(cmd.memory_rate);
  check_axis_domain(cmd.g);
  if (cmd.alpha.kind == AlphaChoice::Kind::kAbsolute) check_axis_domain(cmd.alpha.absolute);
  require_at_most_two_ranges({&cmd.memory_rate, &cmd.g, &cmd.alpha.absolute});

  struct Point {
    double rate, g, alpha;
  };
  std::vector<Point> points;
  for (double rate : cmd.memory_rate.values)
    for (double g : cmd.g.values)
      for (double a : alpha_values(cmd.alpha)) points.push_back({rate, g, a});

  struct Row {
    ModelParams params;
    SteadyResult ss;
  };
  const std::vector<Row> rows = parallel_map<Row>(points.size(), settings.workers, [&](std::size_t i) {
    ModelParams m = continuous_mode_params(1.0, points[i].g, 0.0, 1.0, settings.gamma, points[i].rate);
    m.alpha = resolve_alpha(cmd.alpha, m, points[i].alpha);
    return Row{m, run_to_steady(m, settings.steady)};
  });

  std::vector<std::string> header{"Gamma", "p", "g", "alpha"};
  header.insert(header.end(), cmd.outputs.begin(), cmd.outputs.end());
  header.push_back("status");
  CsvTable table(header);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Row& r = rows[i];
    if (auto w = continuous_limit_warning(r.params)) report.warnings.push_back(*w);
    std::vector<std::string> cells{format_double(points[i].rate), format_double(r.params.p),
                                   format_double(r.params.g), format_double(r.params.alpha)};
    for (const std::string& o : cmd.outputs) {
      if (o == "energy") cells.push_back(format_double(r.ss.report.energy));
      else if (o == "ergotropy") cells.push_back(format_double(r.ss.report.ergotropy));
      else if (o == "purity") cells.push_back(format_double(r.ss.report.purity));
      else if (o == "n_collisions") cells.push_back(std::to_string(r.ss.n_collisions));
    }
    cells.push_back(status_of(r.ss.converged));
    if (!r.ss.converged) ++report.nonconverged;
    table.add_row(std::move(cells));
  }
  report.rows = table.rows().size();
  return table;
}

CsvTable run_nonmarkov(const NonMarkovCommand& cmd, const RunSettings& settings,
                       CommandReport& report) {
  check_axis_domain(cmd.p);
  check_axis_domain(cmd.g);
  if (cmd.alpha.kind == AlphaChoice::Kind::kAbsolute) check_axis_domain(cmd.alpha.absolute);
  require_at_most_two_ranges({&cmd.p, &cmd.g, &cmd.alpha.absolute});
  if (!cmd.battery && !cmd.joint) throw UsageError("--subsystem: nothing to compute");

  struct Point {
    double p, g, alpha;
  };
  std::vector<Point> points;
  for (double p : cmd.p.values)
    for (double g : cmd.g.values)
      for (double a : alpha_values(cmd.alpha)) points.push_back({p, g, a});

  struct Row {
    double alpha = 0.0, nb_b = 0.0, nb_j = 0.0;
    SteadyResult ss;
  };
  const std::vector<Row> rows = parallel_map<Row>(points.size(), settings.workers, [&](std::size_t i) {
    ModelParams m = make_params(settings.gamma, points[i].p, points[i].g, 0.0);
    m.alpha = resolve_alpha(cmd.alpha, m, points[i].alpha);
    Row r;
    r.alpha = m.alpha;
    if (cmd.battery) r.nb_b = nb_for(m, Subsystem::kBattery, settings.nb);
    if (cmd.joint) r.nb_j = nb_for(m, Subsystem::kJoint, settings.nb);
    r.ss = run_to_steady(m, settings.steady);
    return r;
  });

  std::vector<std::string> header{"p", "g", "alpha"};
  if (cmd.battery) header.push_back("nb_battery");
  if (cmd.joint) header.push_back("nb_joint");
  header.push_back("ergotropy");
  header.push_back("status");
  CsvTable table(header);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Row& r = rows[i];
    std::vector<std::string> cells{format_double(points[i].p), format_double(points[i].g),
                                   format_double(r.alpha)};
    if (cmd.battery) cells.push_back(format_double(r.nb_b));
    if (cmd.joint) cells.push_back(format_double(r.nb_j));
    cells.push_back(format_double(r.ss.report.ergotropy));
    cells.push_back(status_of(r.ss.converged));
    if (!r.ss.converged) ++report.nonconverged;
    table.add_row(std::move(cells));
  }
  report.rows = table.rows().size();
  return table;
}

CsvTable run_trajectory(const TrajectoryCommand& cmd, const RunSettings& settings,
                        CommandReport& report) {
  if (cmd.p < 0.0 || cmd.p > 1.0) throw UsageError("--p: value must lie in [0, 1]");
  if (cmd.g < 0.0) throw UsageError("--g: value must be >= 0");
  if (cmd.n_collisions < 1) throw UsageError("--collisions: must be >= 1");
  if (cmd.stride < 1) throw UsageError("--stride: must be >= 1");
  if (cmd.alpha.kind == AlphaChoice::Kind::kAbsolute) {
    if (cmd.alpha.absolute.is_range()) throw UsageError("--alpha: trajectory takes a single value");
    check_axis_domain(cmd.alpha.absolute);
  }

  ModelParams m = make_params(settings.gamma, cmd.p, cmd.g, 0.0);
  if (cmd.min_p_grid) {
    check_axis_domain(*cmd.min_p_grid);
    const MinPResult found = min_p_for_max(m, cmd.min_p_grid->values, cmd.alpha);
    if (!found.p) {
      throw NumericalConsistencyError(
          "--min-p-for-max: no p on the grid brings the steady ergotropy within 1% of the maximum");
    }
    m.p = *found.p;
    m.alpha = found.alpha;
    std::ostringstream msg;
    msg << "min-p-for-max: p = " << format_double(m.p) << ", alpha = " << format_double(m.alpha)
        << ", steady ergotropy = " << format_double(found.ergotropy);
    report.warnings.push_back(msg.str());
  } else {
    m.alpha = resolve_alpha(cmd.alpha, m, cmd.alpha.absolute.values.front());
  }

  const std::vector<TrajectoryRecord> records = trajectory(m, cmd.n_collisions, cmd.stride);
  CsvTable table({"t", "p", "g", "alpha", "energy", "ergotropy", "purity", "bloch_x", "bloch_y",
                  "bloch_z"});
  for (const TrajectoryRecord& r : records) {
    table.add_row({format_double(r.t), format_double(m.p), format_double(m.g), format_double(m.alpha),
                   format_double(r.energy), format_double(r.ergotropy), format_double(r.purity),
                   format_double(r.bloch.x), format_double(r.bloch.y), format_double(r.bloch.z)});
  }
  report.rows = table.rows().size();
  return table;
}

std::vector<std::string> run_selftest(std::ostream& log) {
  std::vector<std::string> failures;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    log << (ok ? "ok    " : "FAIL  ") << name << "  " << detail << '\n';
    if (!ok) failures.push_back(name + ": " + detail);
  };

  {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    const ComplexMatrix h = 0.5 * pauli::z();
    for (int k = 0; k < 200; ++k) {
      ComplexMatrix a(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = Complex(normal(rng), normal(rng));
      ComplexMatrix rho = a * a.adjoint();
      rho /= rho.trace().real();
      const DensityMatrix state(rho);
      worst = std::max(worst, std::abs(ergotropy_general(state, h) - ergotropy_qubit(bloch(state), 1.0)));
    }
    check("ergotropy closed form", worst <= 1e-10, "max deviation " + format_double(worst));
  }
  {
    const ModelParams m = make_params(100.0, 0.0, 0.01, 0.0109);
    const double e = fixed_point_steady(m).report.ergotropy;
    const double rel = std::abs(e - kMaxErgotropy) / kMaxErgotropy;
    check("maximum ergotropy", rel <= 0.01, "relative deviation " + format_double(rel));
  }
  {
    const ModelParams m = make_params(100.0, 0.5, 2.0, 2.18);
    const SteadyResult it = run_to_steady(m);
    const FixedPointResult fp = fixed_point_steady(m);
    const double d = qubit_trace_distance(it.battery, fp.battery);
    check("iterated vs direct steady state", it.converged && d <= 1e-6,
          "trace distance " + format_double(d));
  }
  {
    const ModelParams m = make_params(1000.0, 0.0, 0.5, 0.545);
    const DensityMatrix lb = steady_state(build_liouvillian(m));
    const Op4 sys = lb.matrix();
    Op2 b;
    b << sys(0, 0) + sys(1, 1), sys(0, 2) + sys(1, 3), sys(2, 0) + sys(3, 1), sys(2, 2) + sys(3, 3);
    const double d = qubit_trace_distance(fixed_point_steady(m).battery, b);
    check("collision model vs master equation", d <= 5e-3, "trace distance " + format_double(d));
  }
  return failures;
}

}  // namespace qbattery
