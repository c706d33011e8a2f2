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

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qbattery {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Shared numerical tolerances. Tests and library code refer to these by name.
namespace tol {
inline constexpr double kState = 1e-10;     // Hermiticity, trace and positivity of states
inline constexpr double kUnitary = 1e-12;   // U^dagger U = I
inline constexpr double kHermitian = 1e-10; // Hermiticity precondition on generators
inline constexpr double kErgotropyClamp = 1e-10;
}  // namespace tol

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computed quantity violates a physical identity beyond roundoff.
class NumericalConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subsystem order used by every tensor product in the library.
enum Factor : int { kBattery = 0, kCharger = 1, kAncilla = 2 };

/// Validated density operator on a 2, 4 or 8 dimensional space.
///
/// Construction checks Hermiticity, unit trace and positivity to `tol::kState`
/// (or a caller-provided tolerance). The stored matrix is immutable.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, double tolerance = tol::kState);

  /// Pure state |psi><psi| from a (not necessarily normalized) vector.
  static DensityMatrix from_pure(const ComplexVector& psi);

  /// Projector onto computational basis state `index` of a `dim`-level system.
  static DensityMatrix basis_state(int dim, int index);

  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

/// Checks the density-matrix conditions without throwing; returns an empty
/// string when valid and a description of the first violation otherwise.
std::string validate_state(const ComplexMatrix& m, double tolerance = tol::kState);

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double abs_tol);
bool is_hermitian(const ComplexMatrix& m, double abs_tol = tol::kHermitian);
bool is_unitary(const ComplexMatrix& u, double abs_tol = tol::kUnitary);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors);

/// Traces out every factor not listed in `keep`. `dims` lists the factor
/// dimensions in tensor order; kept factors retain their relative order.
ComplexMatrix partial_trace(const ComplexMatrix& op, std::span<const int> dims,
                            std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> dims,
                            std::span<const int> keep);

struct EigenDecomposition {
  RealVector values;     // descending
  ComplexMatrix vectors; // column k belongs to values[k]
};

/// Hermitian eigendecomposition with eigenvalues sorted in descending order.
EigenDecomposition eigh(const ComplexMatrix& h);

/// exp(-i h dt) for Hermitian h, computed through the spectral decomposition.
ComplexMatrix expm_iH(const ComplexMatrix& h, double dt);

double det_real(const RealMatrix& m);

/// (1/2) * sum |eigenvalues of (a - b)| for Hermitian a, b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

namespace pauli {
// Basis order is (ground |0>, excited |1>) with sigma_z |0> = -|0>,
// so that sigma_minus = (sigma_x + i sigma_y) / 2 = |0><1|.
ComplexMatrix identity(int dim = 2);
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
ComplexMatrix minus();
ComplexMatrix plus();
}  // namespace pauli

}  // namespace qbattery
