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

#include <string>

#include "qbattery/engine.hpp"
#include "qbattery/opalg.hpp"

namespace qbattery {

/// Column-stacking vectorization: vec(rho)[i + d j] = rho(i, j), so that
/// vec(A rho B) = (B^T (x) A) vec(rho).
ComplexVector vec(const ComplexMatrix& rho);
ComplexMatrix unvec(const ComplexVector& v, int dim);

/// Generator of the battery-charger master equation
///   d rho / dt = -i [H'_BC, rho] + kappa D[s-_C] rho
/// as a 16x16 matrix acting on column-stacked 4x4 operators.
struct Liouvillian {
  ComplexMatrix matrix;
  int dim() const { return static_cast<int>(matrix.rows()); }
};

class DegenerateSteadyStateError : public std::runtime_error {
 public:
  DegenerateSteadyStateError(const std::string& what, int multiplicity)
      : std::runtime_error(what), multiplicity_(multiplicity) {}
  int multiplicity() const { return multiplicity_; }

 private:
  int multiplicity_;
};

/// `p` and `gamma` in `params` are not used.
Liouvillian build_liouvillian(const ModelParams& params);

/// Right-hand side of the master equation applied directly to a 4x4 operator.
ComplexMatrix lindblad_rhs(const ModelParams& params, const ComplexMatrix& rho);

/// Normalized null vector of the Liouvillian, from the smallest eigenvalue of
/// L^dagger L. Throws DegenerateSteadyStateError when the null space is not
/// one-dimensional.
DensityMatrix steady_state(const Liouvillian& liouvillian);

struct Rk4Result {
  ComplexMatrix rho;
  long steps = 0;
  /// Set when dt exceeds the stability guideline 0.01 / max(g, alpha, kappa).
  std::string warning;
};

/// Fixed-step fourth-order Runge-Kutta integration of the master equation.
/// The last step is shortened so that the result is exactly at `t_final`.
Rk4Result rk4_evolve(const DensityMatrix& rho0, const ModelParams& params, double t_final,
                     double dt);

}  // namespace qbattery
