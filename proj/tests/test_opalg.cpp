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

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qbattery/opalg.hpp"

using namespace qbattery;

namespace {

ComplexMatrix taylor_exp(const ComplexMatrix& a) {
  // Plain scaling-and-squaring Taylor series, good enough for small norms.
  int s = 0;
  double n = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (n > 0.5) {
    n /= 2.0;
    ++s;
  }
  const ComplexMatrix b = a / std::pow(2.0, s);
  ComplexMatrix term = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

}  // namespace

TEST_CASE("kron lays out blocks with the first factor most significant") {
  const ComplexMatrix a = pauli::x();
  const ComplexMatrix b = pauli::z();
  const ComplexMatrix k = kron(a, b);
  REQUIRE(k.rows() == 4);
  CHECK(k(0, 2) == Complex(-1.0));
  CHECK(k(1, 3) == Complex(1.0));
  CHECK(k(0, 0) == Complex(0.0));
  CHECK(approx_equal(kron({a, b, a}), kron(kron(a, b), a), 0.0));
}

TEST_CASE("partial trace of a product state returns the factors") {
  std::mt19937_64 rng(1);
  const ComplexMatrix ra = oracle::random_state(rng, 2);
  const ComplexMatrix rb = oracle::random_state(rng, 2);
  const ComplexMatrix rc = oracle::random_state(rng, 2);
  const ComplexMatrix all = kron({ra, rb, rc});
  const std::vector<int> dims{2, 2, 2};
  CHECK(approx_equal(partial_trace(all, dims, std::vector<int>{0}), ra, 1e-14));
  CHECK(approx_equal(partial_trace(all, dims, std::vector<int>{1}), rb, 1e-14));
  CHECK(approx_equal(partial_trace(all, dims, std::vector<int>{2}), rc, 1e-14));
  CHECK(approx_equal(partial_trace(all, dims, std::vector<int>{0, 2}), kron(ra, rc), 1e-14));
  CHECK(approx_equal(partial_trace(all, dims, std::vector<int>{0, 1, 2}), all, 0.0));
  const std::vector<int> dims2{4, 2};
  CHECK(approx_equal(partial_trace(all, dims2, std::vector<int>{0}), kron(ra, rb), 1e-14));
}

TEST_CASE("partial trace of an entangled state is mixed") {
  ComplexVector bell = ComplexVector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  const DensityMatrix rho = DensityMatrix::from_pure(bell);
  const std::vector<int> dims{2, 2};
  const DensityMatrix half = partial_trace(rho, dims, std::vector<int>{1});
  CHECK(approx_equal(half.matrix(), ComplexMatrix::Identity(2, 2) / 2.0, 1e-15));
}

TEST_CASE("partial trace rejects inconsistent dimensions") {
  const ComplexMatrix m = ComplexMatrix::Identity(8, 8);
  CHECK_THROWS_AS(partial_trace(m, std::vector<int>{2, 2}, std::vector<int>{0}), DimensionError);
  CHECK_THROWS_AS(partial_trace(m, std::vector<int>{2, 2, 2}, std::vector<int>{3}), DimensionError);
  CHECK_THROWS_AS(partial_trace(m, std::vector<int>{2, 2, 2}, std::vector<int>{1, 1}), DimensionError);
}

TEST_CASE("density matrix validation") {
  ComplexMatrix good = ComplexMatrix::Identity(2, 2) / 2.0;
  CHECK_NOTHROW(DensityMatrix{good});

  ComplexMatrix bad_trace = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{bad_trace}, ContractViolation);

  ComplexMatrix non_herm = good;
  non_herm(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{non_herm}, ContractViolation);

  ComplexMatrix negative(2, 2);
  negative << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(DensityMatrix{negative}, ContractViolation);

  CHECK_THROWS_AS(DensityMatrix{ComplexMatrix::Identity(3, 3) / 3.0}, ContractViolation);
  CHECK_THROWS_AS(DensityMatrix::basis_state(2, 2), DimensionError);
  CHECK(validate_state(good).empty());
  CHECK_FALSE(validate_state(negative).empty());
}

TEST_CASE("eigh sorts eigenvalues in descending order") {
  ComplexMatrix h(2, 2);
  h << 1.0, Complex(0.0, 2.0), Complex(0.0, -2.0), -1.0;
  const EigenDecomposition ed = eigh(h);
  CHECK(ed.values[0] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  CHECK(ed.values[1] == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-14));
  const ComplexMatrix back = ed.vectors * ed.values.cast<Complex>().asDiagonal() * ed.vectors.adjoint();
  CHECK(approx_equal(back, h, 1e-13));
}

TEST_CASE("expm_iH agrees with a Taylor series and is unitary") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix a = oracle::random_state(rng, 8) * 5.0;
    a(0, 0) += 1.0;
    const double dt = 0.37;
    const ComplexMatrix u = expm_iH(a, dt);
    CHECK(is_unitary(u));
    CHECK(approx_equal(u, taylor_exp(Complex(0.0, -dt) * a), 1e-11));
  }
  ComplexMatrix nh = ComplexMatrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(expm_iH(nh, 1.0), ContractViolation);
}

TEST_CASE("pauli conventions") {
  const Complex i(0.0, 1.0);
  CHECK(approx_equal(pauli::minus(), (pauli::x() + i * pauli::y()) / 2.0, 1e-15));
  // sigma_minus takes the excited state (index 1) to the ground state (index 0).
  ComplexVector excited = ComplexVector::Zero(2);
  excited[1] = 1.0;
  const ComplexVector down = pauli::minus() * excited;
  CHECK(std::abs(down[0] - 1.0) < 1e-15);
  CHECK(pauli::z()(0, 0).real() == -1.0);
}

TEST_CASE("trace distance and determinant") {
  const ComplexMatrix a = DensityMatrix::basis_state(2, 0).matrix();
  const ComplexMatrix b = DensityMatrix::basis_state(2, 1).matrix();
  CHECK(trace_distance(a, b) == doctest::Approx(1.0));
  CHECK(trace_distance(a, a) == doctest::Approx(0.0));
  RealMatrix m(2, 2);
  m << 2.0, 1.0, 1.0, 3.0;
  CHECK(det_real(m) == doctest::Approx(5.0));
}
