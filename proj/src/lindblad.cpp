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

#include "qbattery/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qbattery {

namespace {

ComplexMatrix charger_lowering() { return kron(pauli::identity(), pauli::minus()); }

}  // namespace

ComplexVector vec(const ComplexMatrix& rho) {
  return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

ComplexMatrix unvec(const ComplexVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) throw DimensionError("unvec: size mismatch");
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

Liouvillian build_liouvillian(const ModelParams& params) {
  const ComplexMatrix h = system_hamiltonian(params);
  const ComplexMatrix c = charger_lowering();
  const ComplexMatrix cdc = c.adjoint() * c;
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  const Complex i(0.0, 1.0);

  ComplexMatrix l = -i * (kron(id, h) - kron(h.transpose(), id));
  l += params.kappa * (kron(c.conjugate(), c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id));
  return {l};
}

ComplexMatrix lindblad_rhs(const ModelParams& params, const ComplexMatrix& rho) {
  const ComplexMatrix h = system_hamiltonian(params);
  const ComplexMatrix c = charger_lowering();
  const ComplexMatrix cd = c.adjoint();
  const ComplexMatrix cdc = cd * c;
  const Complex i(0.0, 1.0);
  return -i * (h * rho - rho * h) +
         params.kappa * (c * rho * cd - 0.5 * (cdc * rho + rho * cdc));
}

DensityMatrix steady_state(const Liouvillian& liouvillian) {
  const ComplexMatrix& l = liouvillian.matrix;
  const int d2 = liouvillian.dim();
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d2))));
  if (d * d != d2) throw DimensionError("steady_state: Liouvillian size is not a square");

  const ComplexMatrix gram = l.adjoint() * l;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
  if (es.info() != Eigen::Success) throw NumericalConsistencyError("steady_state: solver failed");

  // Eigenvalues ascending. Anything within roundoff of zero counts as a null direction.
  const RealVector& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  const double null_tol = 1e-13 * scale;
  int multiplicity = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev[k] <= null_tol) ++multiplicity;
  if (multiplicity > 1) {
    std::ostringstream msg;
    msg << "steady_state: null space has dimension " << multiplicity;
    throw DegenerateSteadyStateError(msg.str(), multiplicity);
  }

  ComplexMatrix rho = unvec(es.eigenvectors().col(0), d);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12) throw NumericalConsistencyError("steady_state: null vector is traceless");
  rho /= tr;
  rho = 0.5 * (rho + rho.adjoint());

  const double residual = (l * vec(rho)).norm();
  if (residual > 1e-9) {
    std::ostringstream msg;
    msg << "steady_state: residual " << residual << " exceeds 1e-9";
    throw NumericalConsistencyError(msg.str());
  }
  return DensityMatrix(rho);
}

Rk4Result rk4_evolve(const DensityMatrix& rho0, const ModelParams& params, double t_final,
                     double dt) {
  if (rho0.dim() != 4) throw DimensionError("rk4_evolve: expected a battery-charger state");
  if (!(dt > 0.0)) throw ContractViolation("rk4_evolve: dt must be positive");
  if (!(t_final >= 0.0)) throw ContractViolation("rk4_evolve: t_final must be >= 0");

  Rk4Result out;
  const double fastest = std::max({params.g, params.alpha, params.kappa});
  if (fastest > 0.0 && dt > 0.01 / fastest) {
    std::ostringstream msg;
    msg << "rk4_evolve: dt = " << dt << " exceeds stability guideline " << 0.01 / fastest;
    out.warning = msg.str();
  }

  const ComplexMatrix l = build_liouvillian(params).matrix;
  ComplexVector v = vec(rho0.matrix());
  // Step count fixed up front so roundoff in t cannot add a sliver step.
  const long n_steps = static_cast<long>(std::ceil(t_final / dt * (1.0 - 1e-12)));
  for (long k = 0; k < n_steps; ++k) {
    const double h = k + 1 < n_steps ? dt : t_final - static_cast<double>(k) * dt;
    const ComplexVector k1 = l * v;
    const ComplexVector k2 = l * (v + 0.5 * h * k1);
    const ComplexVector k3 = l * (v + 0.5 * h * k2);
    const ComplexVector k4 = l * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    ++out.steps;
  }
  out.rho = unvec(v, 4);
  return out;
}

}  // namespace qbattery
