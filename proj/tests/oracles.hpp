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

// Independent reference implementations used only by the tests. None of these
// share code paths with the library beyond basic matrix helpers.

#pragma once

#include <random>
#include <vector>

#include "qbattery/engine.hpp"
#include "qbattery/observables.hpp"
#include "qbattery/opalg.hpp"

namespace oracle {

using qbattery::Complex;
using qbattery::ComplexMatrix;

/// Permutation operator exchanging qubits i and j among n (qubit 0 most significant).
inline ComplexMatrix qubit_swap(int n, int i, int j) {
  const int dim = 1 << n;
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  const int bi = n - 1 - i, bj = n - 1 - j;
  for (int x = 0; x < dim; ++x) {
    const int vi = (x >> bi) & 1, vj = (x >> bj) & 1;
    int y = x & ~((1 << bi) | (1 << bj));
    y |= vj << bi;
    y |= vi << bj;
    s(y, x) = 1.0;
  }
  return s;
}

/// Reduced system states after each of `k` collisions for the explicit model:
/// system (battery, charger) followed by k ancilla qubits, each fresh in |0>.
/// Ancilla m partially swaps with ancilla m-1 right before it collides.
inline std::vector<ComplexMatrix> chain_simulation(const ComplexMatrix& u, double p,
                                                   const ComplexMatrix& rho_sys, int k) {
  const int n = 2 + k;
  ComplexMatrix eta = ComplexMatrix::Zero(2, 2);
  eta(0, 0) = 1.0;
  ComplexMatrix state = rho_sys;
  for (int m = 0; m < k; ++m) state = qbattery::kron(state, eta);
  // U acting on qubits (0, 1, 2), identity on the rest.
  const ComplexMatrix u_first = qbattery::kron(u, ComplexMatrix::Identity(1 << (k - 1), 1 << (k - 1)));
  std::vector<ComplexMatrix> out;
  for (int m = 0; m < k; ++m) {
    const int anc = 2 + m;
    if (m > 0) {
      const ComplexMatrix s = qubit_swap(n, anc - 1, anc);
      state = (1.0 - p) * state + p * s * state * s.adjoint();
    }
    const ComplexMatrix perm = qubit_swap(n, 2, anc);
    const ComplexMatrix um = perm * u_first * perm;
    state = um * state * um.adjoint();
    std::vector<int> dims(n, 2);
    const std::vector<int> keep{0, 1};
    out.push_back(qbattery::partial_trace(state, dims, keep));
  }
  return out;
}

/// F_j[rho] = Tr_a[U^j (rho x eta) U^dagger j].
inline ComplexMatrix f_map(const ComplexMatrix& u, int j, const ComplexMatrix& rho) {
  ComplexMatrix eta = ComplexMatrix::Zero(2, 2);
  eta(0, 0) = 1.0;
  ComplexMatrix uj = ComplexMatrix::Identity(8, 8);
  for (int i = 0; i < j; ++i) uj = u * uj;
  const ComplexMatrix s = uj * qbattery::kron(rho, eta) * uj.adjoint();
  const std::vector<int> dims{4, 2};
  const std::vector<int> keep{0};
  return qbattery::partial_trace(s, dims, keep);
}

/// rho_n from the memory sum over F_j, for n = 0..n_max.
inline std::vector<ComplexMatrix> closed_form_series(const ComplexMatrix& u, double p,
                                                     const ComplexMatrix& rho0, int n_max) {
  std::vector<ComplexMatrix> rho{rho0};
  for (int n = 1; n <= n_max; ++n) {
    ComplexMatrix acc = std::pow(p, n - 1) * f_map(u, n, rho0);
    for (int j = 1; j <= n - 1; ++j) acc += (1.0 - p) * std::pow(p, j - 1) * f_map(u, j, rho[n - j]);
    rho.push_back(acc);
  }
  return rho;
}

/// Haar-ish random mixed state of dimension d from a Ginibre matrix.
inline ComplexMatrix random_state(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> normal;
  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

/// Qubit ergotropy by brute force over pure target rotations is costly; instead
/// use the textbook passive-state construction with explicit 2x2 formulas.
inline double qubit_ergotropy_direct(const ComplexMatrix& rho, double omega0) {
  const double tr = rho.trace().real();
  const double diff = (rho(0, 0) - rho(1, 1)).real();
  const double lam_hi = 0.5 * (tr + std::sqrt(diff * diff + 4.0 * std::norm(rho(0, 1))));
  const double lam_lo = tr - lam_hi;
  // ground at -omega0/2, excited at +omega0/2
  const double e_now = 0.5 * omega0 * (rho(1, 1) - rho(0, 0)).real();
  const double e_passive = 0.5 * omega0 * (lam_lo - lam_hi);
  return e_now - e_passive;
}

/// Column-stacked Liouvillian for the battery-charger master equation, built
/// from explicit Kronecker formulas rather than the library helper.
inline ComplexMatrix liouvillian(const qbattery::ModelParams& m) {
  using qbattery::kron;
  namespace pauli = qbattery::pauli;
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix sm = pauli::minus(), sp = pauli::plus();
  const ComplexMatrix h = m.g * (kron(sm, sp) + kron(sp, sm)) + m.alpha * kron(i2, pauli::x());
  const ComplexMatrix c = std::sqrt(m.kappa) * kron(i2, sm);
  const ComplexMatrix i4 = ComplexMatrix::Identity(4, 4);
  const ComplexMatrix cdc = c.adjoint() * c;
  const Complex im(0.0, 1.0);
  return -im * (kron(i4, h) - kron(h.transpose(), i4)) + kron(c.conjugate(), c) -
         0.5 * kron(i4, cdc) - 0.5 * kron(cdc.transpose(), i4);
}

}  // namespace oracle
