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

#include "qbattery/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qbattery {

std::string validate_state(const ComplexMatrix& m, double tolerance) {
  std::ostringstream msg;
  if (m.rows() != m.cols()) {
    msg << "density matrix must be square, got " << m.rows() << "x" << m.cols();
    return msg.str();
  }
  const auto d = m.rows();
  if (d != 2 && d != 4 && d != 8) {
    msg << "density matrix dimension must be 2, 4 or 8, got " << d;
    return msg.str();
  }
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tolerance) {
    msg << "not Hermitian: max |rho - rho^dagger| = " << herm;
    return msg.str();
  }
  const double tr_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (tr_err > tolerance) {
    msg << "trace differs from 1 by " << tr_err;
    return msg.str();
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tolerance) {
    msg << "not positive semidefinite: min eigenvalue " << min_eig;
    return msg.str();
  }
  return {};
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tolerance) : matrix_(std::move(m)) {
  if (auto err = validate_state(matrix_, tolerance); !err.empty()) {
    throw ContractViolation("invalid density matrix: " + err);
  }
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw ContractViolation("zero state vector");
  const ComplexVector v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::basis_state(int dim, int index) {
  if (index < 0 || index >= dim) throw DimensionError("basis index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double abs_tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return (a - b).cwiseAbs().maxCoeff() <= abs_tol;
}

bool is_hermitian(const ComplexMatrix& m, double abs_tol) {
  return m.rows() == m.cols() && approx_equal(m, m.adjoint(), abs_tol);
}

bool is_unitary(const ComplexMatrix& u, double abs_tol) {
  if (u.rows() != u.cols()) return false;
  return approx_equal(u.adjoint() * u, ComplexMatrix::Identity(u.rows(), u.cols()), abs_tol);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto p = b.rows();
  const auto q = b.cols();
  ComplexMatrix out(a.rows() * p, a.cols() * q);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * p, j * q, p, q) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors) {
  if (factors.size() == 0) return ComplexMatrix::Identity(1, 1);
  auto it = factors.begin();
  ComplexMatrix out = *it++;
  for (; it != factors.end(); ++it) out = kron(out, *it);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& op, std::span<const int> dims,
                            std::span<const int> keep) {
  const int n_factors = static_cast<int>(dims.size());
  int total = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError("factor dimensions must be positive");
    total *= d;
  }
  if (op.rows() != total || op.cols() != total) {
    std::ostringstream msg;
    msg << "partial_trace: product of factor dims " << total << " does not match operator size "
        << op.rows() << "x" << op.cols();
    throw DimensionError(msg.str());
  }
  std::vector<bool> kept(n_factors, false);
  for (int k : keep) {
    if (k < 0 || k >= n_factors) throw DimensionError("partial_trace: keep index out of range");
    if (kept[k]) throw DimensionError("partial_trace: duplicate keep index");
    kept[k] = true;
  }

  // Row-major strides of the full index, first factor most significant.
  std::vector<int> stride(n_factors, 1);
  for (int f = n_factors - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

  std::vector<int> kept_factors;
  std::vector<int> traced_factors;
  for (int f = 0; f < n_factors; ++f) (kept[f] ? kept_factors : traced_factors).push_back(f);

  auto offsets_of = [&](const std::vector<int>& factors) {
    std::vector<int> offsets{0};
    for (int f : factors) {
      std::vector<int> next;
      next.reserve(offsets.size() * dims[f]);
      for (int o : offsets)
        for (int v = 0; v < dims[f]; ++v) next.push_back(o + v * stride[f]);
      offsets = std::move(next);
    }
    return offsets;
  };
  const std::vector<int> kept_off = offsets_of(kept_factors);
  const std::vector<int> traced_off = offsets_of(traced_factors);

  const auto dk = static_cast<Eigen::Index>(kept_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i) {
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (int t : traced_off) acc += op(kept_off[i] + t, kept_off[j] + t);
      out(i, j) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> dims,
                            std::span<const int> keep) {
  return DensityMatrix(partial_trace(rho.matrix(), dims, keep));
}

EigenDecomposition eigh(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("eigh: matrix must be square");
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  if (es.info() != Eigen::Success) throw NumericalConsistencyError("eigh: solver failed");
  const auto n = h.rows();
  EigenDecomposition out{RealVector(n), ComplexMatrix(n, n)};
  // Eigen returns ascending order; reverse it.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = es.eigenvalues()[n - 1 - k];
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

ComplexMatrix expm_iH(const ComplexMatrix& h, double dt) {
  if (!is_hermitian(h, tol::kHermitian)) {
    throw ContractViolation("expm_iH: generator is not Hermitian");
  }
  const EigenDecomposition ed = eigh(h);
  ComplexVector phases(ed.values.size());
  for (Eigen::Index k = 0; k < ed.values.size(); ++k) {
    phases[k] = std::exp(Complex(0.0, -ed.values[k] * dt));
  }
  return ed.vectors * phases.asDiagonal() * ed.vectors.adjoint();
}

double det_real(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("det_real: matrix must be square");
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant();
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("trace_distance: dimension mismatch");
  }
  const ComplexMatrix diff = a - b;
  const ComplexMatrix sym = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace pauli {

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << -1.0, 0.0, 0.0, 1.0;
  return m;
}

ComplexMatrix minus() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  return m;
}

ComplexMatrix plus() { return minus().adjoint(); }

}  // namespace pauli

}  // namespace qbattery
