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

#include "qbattery/nonmarkov.hpp"

#include <algorithm>
#include <cmath>

namespace qbattery {

GeneratorBasis generator_basis(int dim) {
  if (dim < 2) throw DimensionError("generator_basis: dim must be >= 2");
  GeneratorBasis basis{dim, {}};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
      sym(j, k) = sym(k, j) = inv_sqrt2;
      basis.generators.push_back(sym);
      ComplexMatrix anti = ComplexMatrix::Zero(dim, dim);
      anti(j, k) = -i * inv_sqrt2;
      anti(k, j) = i * inv_sqrt2;
      basis.generators.push_back(anti);
    }
  }
  for (int l = 1; l < dim; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(dim, dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int m = 0; m < l; ++m) diag(m, m) = norm;
    diag(l, l) = -static_cast<double>(l) * norm;
    basis.generators.push_back(diag);
  }
  return basis;
}

const char* to_string(Subsystem s) { return s == Subsystem::kBattery ? "battery" : "joint"; }

namespace {

Op8 embed(Subsystem subsystem, const ComplexMatrix& op) {
  const ComplexMatrix eta = ground_qubit().matrix();
  if (subsystem == Subsystem::kBattery) return kron({op, eta, eta});
  return kron(op, eta);
}

ComplexMatrix reduce(Subsystem subsystem, const Op8& chi) {
  if (subsystem == Subsystem::kBattery) return battery_marginal(chi);
  return system_marginal(chi);
}

}  // namespace

AffineMapSeries propagate_map(const ModelParams& params, Subsystem subsystem, long n_collisions,
                              const MapOptions& options) {
  params.validate();
  if (n_collisions < 0) throw ContractViolation("propagate_map: n_collisions must be >= 0");
  if (options.stride < 1) throw ContractViolation("propagate_map: stride must be >= 1");
  if (options.stride != 1 && !options.allow_coarse_stride) {
    throw ContractViolation(
        "propagate_map: stride > 1 can miss volume revivals; set allow_coarse_stride");
  }

  const int dim = subsystem == Subsystem::kBattery ? 2 : 4;
  const GeneratorBasis basis = generator_basis(dim);
  const auto n_gen = static_cast<Eigen::Index>(basis.generators.size());

  // Propagated operators: generators first, then I/dim.
  std::vector<Op8> ops;
  ops.reserve(basis.generators.size() + 1);
  for (const auto& g : basis.generators) ops.push_back(embed(subsystem, g));
  ops.push_back(embed(subsystem, ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim)));

  const CollisionEngine engine(params);
  AffineMapSeries series;
  series.subsystem = subsystem;

  auto record = [&](long n) {
    RealMatrix a(n_gen, n_gen);
    RealVector q(n_gen);
    std::vector<ComplexMatrix> images;
    images.reserve(ops.size());
    for (const auto& op : ops) images.push_back(reduce(subsystem, op));
    for (Eigen::Index r = 0; r < n_gen; ++r) {
      const ComplexMatrix& gr = basis.generators[r];
      for (Eigen::Index c = 0; c < n_gen; ++c) a(r, c) = (gr * images[c]).trace().real();
      q[r] = (gr * images[n_gen]).trace().real();
    }
    const double v = std::abs(det_real(a));
    series.collisions.push_back(n);
    series.times.push_back(static_cast<double>(n) / params.gamma);
    series.A.push_back(std::move(a));
    series.q.push_back(std::move(q));
    series.volume.push_back(v);
    series.max_volume = std::max(series.max_volume, v);
    return v;
  };

  record(0);
  long below = 0;
  for (long n = 1; n <= n_collisions; ++n) {
    for (auto& op : ops) engine.advance(op);
    if (n % options.stride == 0) {
      const double v = record(n);
      below = v < options.volume_floor ? below + 1 : 0;
      if (options.volume_floor > 0.0 && below >= options.floor_window) break;
    }
  }
  return series;
}

ComplexMatrix apply_affine_map(const AffineMapSeries& series, std::size_t k,
                               const ComplexMatrix& rho0) {
  const int dim = series.subsystem == Subsystem::kBattery ? 2 : 4;
  if (rho0.rows() != dim || rho0.cols() != dim) throw DimensionError("apply_affine_map: bad state");
  if (k >= series.A.size()) throw ContractViolation("apply_affine_map: sample out of range");
  const GeneratorBasis basis = generator_basis(dim);
  const auto n_gen = static_cast<Eigen::Index>(basis.generators.size());
  RealVector r0(n_gen);
  for (Eigen::Index a = 0; a < n_gen; ++a) r0[a] = (basis.generators[a] * rho0).trace().real();
  const RealVector r = series.A[k] * r0 + series.q[k];
  ComplexMatrix out = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
  for (Eigen::Index a = 0; a < n_gen; ++a) out += r[a] * basis.generators[a];
  return out;
}

double nb_measure(const std::vector<double>& volume) {
  if (volume.size() < 2) throw ContractViolation("nb_measure: need at least two samples");
  const double v0 = volume.front();
  if (!(v0 > 0.0)) throw ContractViolation("nb_measure: initial volume must be positive");
  double total = 0.0;
  for (std::size_t n = 1; n < volume.size(); ++n) {
    const double inc = (volume[n] - volume[n - 1]) / v0;
    if (inc > 0.0) total += inc;
  }
  return total < kNbZero ? 0.0 : total;
}

double nb_measure(const AffineMapSeries& series) { return nb_measure(series.volume); }

double nb_for(const ModelParams& params, Subsystem subsystem, const NbOptions& options) {
  MapOptions map;
  map.volume_floor = options.volume_floor;
  map.floor_window = std::max(1L, std::lround(options.floor_time * params.gamma));
  return nb_measure(propagate_map(params, subsystem, options.max_collisions, map));
}

std::vector<NbRow> nb_vs_p(const ModelParams& base, const std::vector<double>& p_grid,
                           const NbOptions& nb_options, const SteadyOptions& steady_options) {
  std::vector<NbRow> rows;
  rows.reserve(p_grid.size());
  for (double p : p_grid) {
    ModelParams params = base;
    params.p = p;
    params.memory_rate.reset();
    NbRow row;
    row.p = p;
    row.nb_battery = nb_for(params, Subsystem::kBattery, nb_options);
    row.nb_joint = nb_for(params, Subsystem::kJoint, nb_options);
    const SteadyResult ss = run_to_steady(params, steady_options);
    row.ergotropy = ss.report.ergotropy;
    row.converged = ss.converged;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qbattery
