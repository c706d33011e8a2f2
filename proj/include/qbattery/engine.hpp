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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbattery/observables.hpp"
#include "qbattery/opalg.hpp"

namespace qbattery {

/// Physical parameters of the battery-charger-environment model.
///
/// Rates share one unit (conventionally kappa = 1); energies are in units of
/// omega0. The collision time is 1 / gamma. When `memory_rate` is set the model
/// is in continuous mode and `p` must equal exp(-memory_rate / gamma); build such
/// parameters with `continuous_mode_params`.
struct ModelParams {
  double omega0 = 1.0;
  double g = 0.0;
  double alpha = 0.0;
  double kappa = 1.0;
  double gamma = 100.0;
  double p = 0.0;
  std::optional<double> memory_rate;

  double dt() const { return 1.0 / gamma; }

  /// Throws ContractViolation describing the first invalid field.
  void validate() const;
};

ModelParams continuous_mode_params(double omega0, double g, double alpha, double kappa,
                                   double gamma, double memory_rate);

/// Non-empty when gamma is not much larger than the memory rate, i.e. the
/// collision model is far from its continuous-time limit.
std::optional<std::string> continuous_limit_warning(const ModelParams& params);

using Op2 = Eigen::Matrix<Complex, 2, 2>;
using Op4 = Eigen::Matrix<Complex, 4, 4>;
using Op8 = Eigen::Matrix<Complex, 8, 8>;

/// Interaction-picture battery-charger Hamiltonian
/// g (s-_B s+_C + s+_B s-_C) + alpha sx_C on battery (x) charger.
ComplexMatrix system_hamiltonian(const ModelParams& params);

/// Generator of one collision on battery (x) charger (x) ancilla:
/// H'_BC (x) I + sqrt(kappa gamma) (s+_C s-_a + s-_C s+_a).
ComplexMatrix collision_hamiltonian(const ModelParams& params);

/// exp(-i collision_hamiltonian / gamma).
ComplexMatrix step_unitary(const ModelParams& params);

/// Joint operator of battery, charger and the ancilla about to collide,
/// together with the number of completed collisions.
///
/// `chi` is a density matrix in ordinary use. Map tomography pushes traceless,
/// non-positive operators through the same recursion, so validity is checked
/// on request only.
struct EngineState {
  Op8 chi = Op8::Zero();
  long n = 0;

  double time(double gamma) const { return static_cast<double>(n) / gamma; }
  /// Empty string when chi is a valid density matrix.
  std::string check(double tolerance = 1e-9) const;
};

/// rho_B (x) rho_C (x) eta at zero collisions.
EngineState initial_state(const DensityMatrix& battery, const DensityMatrix& charger,
                          const DensityMatrix& eta);

/// Ancilla preparation of the zero-temperature environment, |0><0|.
DensityMatrix ground_qubit();

/// Reduced operator on battery (x) charger.
Op4 system_marginal(const Op8& chi);
/// Reduced operator on the battery.
Op2 battery_marginal(const Op8& chi);

/// One collision followed by the ancilla partial swap, in two-register form:
///   sigma = U chi U^dagger,  chi' = (1 - p) Tr_a[sigma] (x) eta + p sigma.
EngineState step(const EngineState& state, const ComplexMatrix& u, double p,
                 const DensityMatrix& eta);

/// Reusable fixed-size form of `step` for long runs.
class CollisionEngine {
 public:
  explicit CollisionEngine(const ModelParams& params);
  CollisionEngine(const ComplexMatrix& u, double p, const DensityMatrix& eta);

  void advance(EngineState& state) const;
  /// Advances an arbitrary operator (linear extension of the map).
  void advance(Op8& chi) const;

 private:
  Op8 u_;
  Op8 u_adj_;
  double p_;
  Op2 eta_;
};

enum class SteadyMethod {
  /// Iterate collisions until successive battery states settle.
  kIterate,
  /// Solve for the fixed point of the collision map directly.
  kDirect,
};

struct SteadyOptions {
  SteadyMethod method = SteadyMethod::kIterate;
  double tol = 1e-12;
  long max_collisions = 10'000'000;
  /// Consecutive collisions that must all stay below `tol`.
  int window = 50;
  std::optional<DensityMatrix> battery0;
  std::optional<DensityMatrix> charger0;
};

struct SteadyResult {
  bool converged = false;
  long n_collisions = 0;
  /// Trace distance between the last two battery states.
  double residual = 0.0;
  /// p == 1 with nontrivial dynamics: unitary on system (x) ancilla.
  bool unitary_regime = false;
  BatteryReport report;
  Op2 battery = Op2::Zero();
};

/// Iterates collisions until the trace distance between successive battery
/// states stays below `tol` for `window` collisions. Non-convergence is
/// returned with `converged == false` and the last residual, never as an error.
///
/// With SteadyMethod::kDirect the fixed point is solved for instead;
/// `n_collisions` is then 0 and `residual` is the change of the battery state
/// under one further collision. A non-unique fixed point (p = 1) is reported as
/// not converged. Initial states are irrelevant to that route.
SteadyResult run_to_steady(const ModelParams& params, const SteadyOptions& options = {});

/// Fixed point of the two-register map, solved directly from (T - I) chi = 0
/// with Tr chi = 1, where T is the 64x64 transfer matrix of one collision.
/// Independent of the iteration in run_to_steady.
struct FixedPointResult {
  Op8 chi = Op8::Zero();
  Op2 battery = Op2::Zero();
  BatteryReport report;
  /// Smallest over largest LU pivot of the bordered system; tiny values
  /// mean the fixed point is not unique.
  double separation = 0.0;
};

FixedPointResult fixed_point_steady(const ModelParams& params);

/// Matrix of one collision acting on column-stacked 8x8 operators.
ComplexMatrix transfer_matrix(const ModelParams& params);

struct TrajectoryRecord {
  double t = 0.0;
  double energy = 0.0;
  double ergotropy = 0.0;
  double purity = 1.0;
  BlochVector bloch;
};

/// Battery observables every `stride` collisions from t = 0 up to and
/// including `n_collisions`, starting with battery and charger in |0>.
std::vector<TrajectoryRecord> trajectory(const ModelParams& params, long n_collisions,
                                         long stride = 1);

/// Trace distance between two qubit operators with equal trace.
double qubit_trace_distance(const Op2& a, const Op2& b);

}  // namespace qbattery
