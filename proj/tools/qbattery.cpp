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

// qbattery: steady-state, trajectory, non-Markovianity and continuous-limit
// sweeps of the collision-model quantum battery. Output is CSV.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qbattery/sweep.hpp"

namespace {

using namespace qbattery;

struct Common {
  std::optional<double> gamma;
  std::string out;
  unsigned workers = 1;
  double tol = 1e-12;
  long max_collisions = 10'000'000;
  std::string method;
  std::string alpha;
  std::optional<double> alpha_rel;
};

void add_common(CLI::App* sub, Common& c, bool with_method) {
  sub->add_option("--gamma", c.gamma, "collision rate in units of kappa");
  sub->add_option("--out", c.out, "write CSV to FILE instead of stdout");
  sub->add_option("--workers", c.workers, "grid points evaluated in parallel")->check(CLI::Range(1u, 1024u));
  sub->add_option("--tol", c.tol, "steady-state tolerance (trace distance)")->check(CLI::PositiveNumber);
  sub->add_option("--max-collisions", c.max_collisions, "collision cap per steady-state run")
      ->check(CLI::PositiveNumber);
  if (with_method) {
    sub->add_option("--method", c.method, "steady-state solver")->check(CLI::IsMember({"iterate", "direct"}));
  }
  auto* a = sub->add_option("--alpha", c.alpha, "charger drive: value, min:max:n, log:min:max:n or opt");
  auto* r = sub->add_option("--alpha-rel", c.alpha_rel, "charger drive as a multiple of g");
  a->excludes(r);
}

AlphaChoice alpha_choice(const Common& c, const char* fallback) {
  AlphaChoice choice;
  if (c.alpha_rel) {
    if (*c.alpha_rel < 0.0) throw UsageError("--alpha-rel: must be >= 0");
    choice.kind = AlphaChoice::Kind::kRelative;
    choice.relative = *c.alpha_rel;
  } else if (c.alpha == "opt") {
    choice.kind = AlphaChoice::Kind::kOptimal;
  } else {
    choice.absolute = parse_axis("alpha", c.alpha.empty() ? fallback : c.alpha);
  }
  return choice;
}

RunSettings settings_from(const Common& c, double default_gamma, SteadyMethod default_method) {
  RunSettings s;
  s.gamma = c.gamma.value_or(default_gamma);
  if (!(s.gamma > 0.0)) throw UsageError("--gamma: must be > 0");
  s.workers = c.workers;
  s.steady.tol = c.tol;
  s.steady.max_collisions = c.max_collisions;
  s.steady.method = default_method;
  if (c.method == "iterate") s.steady.method = SteadyMethod::kIterate;
  if (c.method == "direct") s.steady.method = SteadyMethod::kDirect;
  return s;
}

void emit(const CsvTable& table, const Common& c, const CommandReport& report) {
  for (const std::string& w : report.warnings) std::cerr << "warning: " << w << '\n';
  if (report.nonconverged > 0) {
    std::cerr << report.nonconverged << " of " << report.rows
              << " grid points did not converge (status column)\n";
  }
  if (c.out.empty()) {
    table.write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw UsageError("--out: cannot open '" + c.out + "' for writing");
  table.write(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qbattery: collision-model quantum battery sweeps"};
  app.require_subcommand(1);

  Common steady_c, traj_c, nm_c, cont_c;

  auto* steady = app.add_subcommand("steady", "steady-state observables on a grid");
  std::string steady_p = "0", steady_g = "0.5", steady_outputs = "energy,ergotropy,purity,n_collisions";
  steady->add_option("--p", steady_p, "memory probability: value or range");
  steady->add_option("--g", steady_g, "battery-charger coupling: value or range");
  steady->add_option("--outputs", steady_outputs,
                     "comma list from energy,ergotropy,purity,n_collisions,nb_battery,nb_joint");
  add_common(steady, steady_c, true);

  auto* traj = app.add_subcommand("trajectory", "battery observables against time");
  double traj_p = 0.0, traj_g = 0.5;
  long traj_n = 100'000, traj_stride = 100;
  std::string min_p_grid;
  traj->add_option("--p", traj_p, "memory probability");
  traj->add_option("--g", traj_g, "battery-charger coupling");
  traj->add_option("--n", traj_n, "number of collisions");
  traj->add_option("--stride", traj_stride, "record every STRIDE collisions");
  auto* min_p = traj->add_option("--min-p-for-max", min_p_grid,
                                 "use the smallest p on GRID (default 0:0.99:100) whose steady ergotropy "
                                 "is within 1% of the maximum")
                    ->expected(0, 1);
  add_common(traj, traj_c, false);

  auto* nm = app.add_subcommand("nonmarkov", "geometric non-Markovianity measure on a grid");
  std::string nm_p = "0", nm_g = "0.5", nm_sub = "both";
  nm->add_option("--p", nm_p, "memory probability: value or range");
  nm->add_option("--g", nm_g, "battery-charger coupling: value or range");
  nm->add_option("--subsystem", nm_sub, "which reduced map")->check(CLI::IsMember({"battery", "joint", "both"}));
  add_common(nm, nm_c, true);

  auto* cont = app.add_subcommand("continuous", "continuous-time limit, p = exp(-Gamma/gamma)");
  std::string cont_rate = "1", cont_g = "0.5", cont_outputs = "energy,ergotropy,purity,n_collisions";
  cont->add_option("--Gamma", cont_rate, "memory rate: value or range");
  cont->add_option("--g", cont_g, "battery-charger coupling: value or range");
  cont->add_option("--outputs", cont_outputs, "comma list from energy,ergotropy,purity,n_collisions");
  add_common(cont, cont_c, true);

  auto* selftest = app.add_subcommand("selftest", "quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CommandReport report;
    if (*steady) {
      SteadyCommand cmd;
      cmd.p = parse_axis("p", steady_p);
      cmd.g = parse_axis("g", steady_g);
      cmd.alpha = alpha_choice(steady_c, "0.9");
      cmd.outputs = parse_outputs(steady_outputs,
                                  {"energy", "ergotropy", "purity", "n_collisions", "nb_battery", "nb_joint"});
      const RunSettings s = settings_from(steady_c, 100.0, SteadyMethod::kIterate);
      emit(run_steady(cmd, s, report), steady_c, report);
    } else if (*traj) {
      TrajectoryCommand cmd;
      cmd.p = traj_p;
      cmd.g = traj_g;
      cmd.n_collisions = traj_n;
      cmd.stride = traj_stride;
      cmd.alpha = alpha_choice(traj_c, "0.9");
      if (min_p->count() > 0) cmd.min_p_grid = parse_axis("min-p-for-max", min_p_grid.empty() ? "0:0.99:100" : min_p_grid);
      const RunSettings s = settings_from(traj_c, 100.0, SteadyMethod::kIterate);
      emit(run_trajectory(cmd, s, report), traj_c, report);
    } else if (*nm) {
      NonMarkovCommand cmd;
      cmd.p = parse_axis("p", nm_p);
      cmd.g = parse_axis("g", nm_g);
      cmd.alpha = alpha_choice(nm_c, "0.9");
      cmd.battery = nm_sub != "joint";
      cmd.joint = nm_sub != "battery";
      const RunSettings s = settings_from(nm_c, 100.0, SteadyMethod::kIterate);
      emit(run_nonmarkov(cmd, s, report), nm_c, report);
    } else if (*cont) {
      ContinuousCommand cmd;
      cmd.memory_rate = parse_axis("Gamma", cont_rate);
      cmd.g = parse_axis("g", cont_g);
      cmd.alpha = alpha_choice(cont_c, "0.9");
      cmd.outputs = parse_outputs(cont_outputs, {"energy", "ergotropy", "purity", "n_collisions"});
      // Near p = 1 relaxation takes ~1/Gamma collisions; the direct solver does not care.
      const RunSettings s = settings_from(cont_c, 1000.0, SteadyMethod::kDirect);
      emit(run_continuous(cmd, s, report), cont_c, report);
    } else if (*selftest) {
      const auto failures = run_selftest(std::cout);
      if (!failures.empty()) {
        std::cerr << failures.size() << " selftest check(s) failed\n";
        return 3;
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ContractViolation& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalConsistencyError& e) {
    std::cerr << "numerical consistency failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
