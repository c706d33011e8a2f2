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

#include <cmath>

#include "qbattery/opalg.hpp"

namespace qbattery {

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

/// Steady-state or instantaneous figures of merit of the battery qubit.
/// Energies are in the same unit as the `omega0` they were computed with.
struct BatteryReport {
  double energy = 0.0;
  double ergotropy = 0.0;
  double purity = 1.0;
  BlochVector bloch;
};

/// Maximum steady-state ergotropy of the charger-mediated battery,
/// ((sqrt 2 - 1) / 2) omega0, in units of omega0.
inline const double kMaxErgotropy = (std::sqrt(2.0) - 1.0) / 2.0;

/// Bloch vector of the battery state that attains kMaxErgotropy.
BlochVector optimal_bloch();

/// (omega0 / 2) Tr[sigma_z rho] for a qubit state.
double energy(const DensityMatrix& rho, double omega0);

/// Ergotropy of `rho` with respect to Hamiltonian `h` via the passive state
/// construction. Eigenvalues of rho are paired descending against the energy
/// levels ascending; degenerate levels are taken in solver order, which makes
/// the value basis independent but not the decomposition.
///
/// Roundoff negatives down to -tol::kErgotropyClamp are clamped to 0; larger
/// negatives raise NumericalConsistencyError.
double ergotropy_general(const DensityMatrix& rho, const ComplexMatrix& h);

/// Closed form (omega0 / 2) (|r| + r_z) for a qubit with Hamiltonian (omega0/2) sigma_z.
double ergotropy_qubit(const BlochVector& bloch, double omega0);

double purity(const DensityMatrix& rho);

BlochVector bloch(const DensityMatrix& rho);

/// Qubit state (I + r . sigma) / 2.
DensityMatrix state_from_bloch(const BlochVector& r);

BatteryReport battery_report(const DensityMatrix& rho, double omega0);

}  // namespace qbattery
