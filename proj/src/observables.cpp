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

#include "qbattery/observables.hpp"

#include <cmath>
#include <sstream>

namespace qbattery {

namespace {

void require_qubit(const DensityMatrix& rho, const char* what) {
  if (rho.dim() != 2) {
    std::ostringstream msg;
    msg << what << ": expected a qubit state, got dimension " << rho.dim();
    throw DimensionError(msg.str());
  }
}

double expectation(const ComplexMatrix& op, const ComplexMatrix& rho) {
  return (op * rho).trace().real();
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector optimal_bloch() {
  return {-std::sqrt(std::sqrt(2.0) - 1.0), 0.0, 1.0 / std::sqrt(2.0) - 1.0};
}

double energy(const DensityMatrix& rho, double omega0) {
  require_qubit(rho, "energy");
  return 0.5 * omega0 * expectation(pauli::z(), rho.matrix());
}

double ergotropy_general(const DensityMatrix& rho, const ComplexMatrix& h) {
  if (h.rows() != rho.dim() || h.cols() != rho.dim()) {
    throw DimensionError("ergotropy_general: state and Hamiltonian dimensions differ");
  }
  const EigenDecomposition state = eigh(rho.matrix());
  const EigenDecomposition levels = eigh(h);
  const int d = rho.dim();
  // levels.values are descending; level n ascending is index d-1-n.
  const ComplexMatrix overlaps = state.vectors.adjoint() * levels.vectors;
  double work = 0.0;
  for (int j = 0; j < d; ++j) {
    for (int n = 0; n < d; ++n) {
      const int level = d - 1 - n;
      const double delta = (j == n) ? 1.0 : 0.0;
      work += state.values[j] * levels.values[level] * (std::norm(overlaps(j, level)) - delta);
    }
  }
  if (work < 0.0) {
    if (work < -tol::kErgotropyClamp) {
      std::ostringstream msg;
      msg << "ergotropy_general: negative ergotropy " << work << " beyond roundoff";
      throw NumericalConsistencyError(msg.str());
    }
    work = 0.0;
  }
  return work;
}

double ergotropy_qubit(const BlochVector& b, double omega0) {
  return 0.5 * omega0 * (b.norm() + b.z);
}

double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

BlochVector bloch(const DensityMatrix& rho) {
  require_qubit(rho, "bloch");
  const ComplexMatrix& m = rho.matrix();
  return {expectation(pauli::x(), m), expectation(pauli::y(), m), expectation(pauli::z(), m)};
}

DensityMatrix state_from_bloch(const BlochVector& r) {
  return DensityMatrix(0.5 * (pauli::identity() + r.x * pauli::x() + r.y * pauli::y() +
                              r.z * pauli::z()));
}

BatteryReport battery_report(const DensityMatrix& rho, double omega0) {
  require_qubit(rho, "battery_report");
  BatteryReport r;
  r.bloch = bloch(rho);
  r.energy = 0.5 * omega0 * r.bloch.z;
  r.ergotropy = ergotropy_qubit(r.bloch, omega0);
  r.purity = purity(rho);
  return r;
}

}  // namespace qbattery
