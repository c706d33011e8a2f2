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

#include "qbattery/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

namespace qbattery {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void ModelParams::validate() const {
  std::ostringstream msg;
  if (!std::isfinite(omega0)) msg << "omega0 must be finite";
  else if (!finite_nonneg(g)) msg << "g must be finite and >= 0, got " << g;
  else if (!finite_nonneg(alpha)) msg << "alpha must be finite and >= 0, got " << alpha;
  else if (!finite_nonneg(kappa)) msg << "kappa must be finite and >= 0, got " << kappa;
  else if (!std::isfinite(gamma) || gamma <= 0.0) msg << "gamma must be finite and > 0, got " << gamma;
  else if (!std::isfinite(p) || p < 0.0 || p > 1.0) msg << "p must lie in [0, 1], got " << p;
  else if (memory_rate) {
    if (!finite_nonneg(*memory_rate)) {
      msg << "memory rate must be finite and >= 0, got " << *memory_rate;
    } else {
      const double expected = std::exp(-*memory_rate / gamma);
      if (std::abs(p - expected) > 1e-14) {
        msg << "continuous mode requires p = exp(-Gamma/gamma) = " << expected << ", got " << p;
      }
    }
  }
  if (auto err = msg.str(); !err.empty()) throw ContractViolation("invalid model parameters: " + err);
}

ModelParams continuous_mode_params(double omega0, double g, double alpha, double kappa,
                                   double gamma, double memory_rate) {
  ModelParams params;
  params.omega0 = omega0;
  params.g = g;
  params.alpha = alpha;
  params.kappa = kappa;
  params.gamma = gamma;
  if (!finite_nonneg(memory_rate)) {
    throw ContractViolation("continuous_mode_params: memory rate must be finite and >= 0");
  }
  params.memory_rate = memory_rate;
  params.p = std::exp(-memory_rate / gamma);
  params.validate();
  return params;
}

std::optional<std::string> continuous_limit_warning(const ModelParams& params) {
  if (!params.memory_rate) return std::nullopt;
  if (params.gamma >= 10.0 * *params.memory_rate) return std::nullopt;
  std::ostringstream msg;
  msg << "collision rate gamma = " << params.gamma << " is not much larger than memory rate "
      << *params.memory_rate << "; results are far from the continuous-time limit";
  return msg.str();
}

ComplexMatrix system_hamiltonian(const ModelParams& params) {
  using namespace pauli;
  return params.g * (kron(minus(), plus()) + kron(plus(), minus())) +
         params.alpha * kron(identity(), x());
}

ComplexMatrix collision_hamiltonian(const ModelParams& params) {
  using namespace pauli;
  const double xi = std::sqrt(params.kappa * params.gamma);
  return kron(system_hamiltonian(params), identity()) +
         xi * (kron({identity(), plus(), minus()}) + kron({identity(), minus(), plus()}));
}

ComplexMatrix step_unitary(const ModelParams& params) {
  params.validate();
  return expm_iH(collision_hamiltonian(params), params.dt());
}

std::string EngineState::check(double tolerance) const {
  return validate_state(ComplexMatrix(chi), tolerance);
}

DensityMatrix ground_qubit() { return DensityMatrix::basis_state(2, 0); }

EngineState initial_state(const DensityMatrix& battery, const DensityMatrix& charger,
                          const DensityMatrix& eta) {
  if (battery.dim() != 2 || charger.dim() != 2 || eta.dim() != 2) {
    throw DimensionError("initial_state: battery, charger and ancilla must be qubits");
  }
  EngineState s;
  s.chi = kron({battery.matrix(), charger.matrix(), eta.matrix()});
  s.n = 0;
  return s;
}

Op4 system_marginal(const Op8& chi) {
  Op4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = chi(2 * i, 2 * j) + chi(2 * i + 1, 2 * j + 1);
  return out;
}

Op2 battery_marginal(const Op8& chi) {
  Op2 out = Op2::Zero();
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp)
      for (int env = 0; env < 4; ++env) out(b, bp) += chi(4 * b + env, 4 * bp + env);
  return out;
}

CollisionEngine::CollisionEngine(const ModelParams& params)
    : CollisionEngine(step_unitary(params), params.p, ground_qubit()) {}

CollisionEngine::CollisionEngine(const ComplexMatrix& u, double p, const DensityMatrix& eta)
    : p_(p) {
  if (u.rows() != 8 || u.cols() != 8) throw DimensionError("CollisionEngine: unitary must be 8x8");
  if (eta.dim() != 2) throw DimensionError("CollisionEngine: ancilla state must be a qubit");
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("CollisionEngine: p must lie in [0, 1]");
  u_ = u;
  u_adj_ = u_.adjoint();
  eta_ = eta.matrix();
}

void CollisionEngine::advance(Op8& chi) const {
  const Op8 sigma = u_ * chi * u_adj_;
  const Op4 rho_s = system_marginal(sigma);
  const double keep = 1.0 - p_;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Complex r = keep * rho_s(i, j);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          chi(2 * i + a, 2 * j + b) = r * eta_(a, b) + p_ * sigma(2 * i + a, 2 * j + b);
    }
  }
}

void CollisionEngine::advance(EngineState& state) const {
  advance(state.chi);
  ++state.n;
}

EngineState step(const EngineState& state, const ComplexMatrix& u, double p,
                 const DensityMatrix& eta) {
  EngineState next = state;
  CollisionEngine(u, p, eta).advance(next);
  return next;
}

double qubit_trace_distance(const Op2& a, const Op2& b) {
  const Op2 d = a - b;
  const double half_tr = 0.5 * (d(0, 0).real() + d(1, 1).real());
  const double half_gap = 0.5 * (d(0, 0).real() - d(1, 1).real());
  const double off = 0.5 * std::abs(d(0, 1) + std::conj(d(1, 0)));
  const double r = std::hypot(half_gap, off);
  return 0.5 * (std::abs(half_tr + r) + std::abs(half_tr - r));
}

SteadyResult run_to_steady(const ModelParams& params, const SteadyOptions& options) {
  params.validate();
  if (!(options.tol > 0.0)) throw ContractViolation("run_to_steady: tol must be positive");
  if (options.window < 1) throw ContractViolation("run_to_steady: window must be >= 1");

  const CollisionEngine engine(params);
  SteadyResult result;
  result.unitary_regime =
      params.p == 1.0 && (params.g != 0.0 || params.alpha != 0.0 || params.kappa != 0.0);

  if (options.method == SteadyMethod::kDirect) {
    try {
      const FixedPointResult fp = fixed_point_steady(params);
      Op8 next = fp.chi;
      engine.advance(next);
      result.converged = true;
      result.residual = qubit_trace_distance(battery_marginal(next), fp.battery);
      result.battery = fp.battery;
      result.report = fp.report;
    } catch (const NumericalConsistencyError&) {
      // Degenerate fixed-point space; fall back to the initial battery state.
      const Op2 b = options.battery0.value_or(ground_qubit()).matrix();
      result.battery = b;
      result.report = battery_report(DensityMatrix(ComplexMatrix(b)), params.omega0);
    }
    return result;
  }

  EngineState state = initial_state(options.battery0.value_or(ground_qubit()),
                                    options.charger0.value_or(ground_qubit()), ground_qubit());

  Op2 previous = battery_marginal(state.chi);
  int calm = 0;
  double residual = 0.0;
  while (state.n < options.max_collisions) {
    engine.advance(state);
    const Op2 current = battery_marginal(state.chi);
    residual = qubit_trace_distance(current, previous);
    previous = current;
    calm = residual < options.tol ? calm + 1 : 0;
    if (calm >= options.window) {
      result.converged = true;
      break;
    }
  }

  result.n_collisions = state.n;
  result.residual = residual;
  result.battery = 0.5 * (previous + previous.adjoint());
  result.battery /= result.battery.trace().real();
  result.report = battery_report(DensityMatrix(ComplexMatrix(result.battery), 1e-8), params.omega0);
  return result;
}

ComplexMatrix transfer_matrix(const ModelParams& params) {
  const CollisionEngine engine(params);
  ComplexMatrix t(64, 64);
  for (int col = 0; col < 64; ++col) {
    Op8 e = Op8::Zero();
    e(col % 8, col / 8) = 1.0;
    engine.advance(e);
    t.col(col) = Eigen::Map<const Eigen::Matrix<Complex, 64, 1>>(e.data());
  }
  return t;
}

FixedPointResult fixed_point_steady(const ModelParams& params) {
  params.validate();
  // Trace preservation makes the rows of (T - I) dependent with weights given
  // by the trace functional; the row of entry (0,0) is replaced by Tr chi = 1.
  ComplexMatrix system = transfer_matrix(params) - ComplexMatrix::Identity(64, 64);
  system.row(0).setZero();
  for (int k = 0; k < 8; ++k) system(0, k * 8 + k) = 1.0;
  ComplexVector rhs = ComplexVector::Zero(64);
  rhs[0] = 1.0;

  const Eigen::FullPivLU<ComplexMatrix> lu(system);
  const RealVector pivots = lu.matrixLU().diagonal().cwiseAbs();
  FixedPointResult out;
  out.separation = pivots.minCoeff() / std::max(pivots.maxCoeff(), 1e-300);
  if (out.separation < 1e-13) {
    throw NumericalConsistencyError("fixed_point_steady: fixed point is not unique");
  }
  const ComplexVector v = lu.solve(rhs);
  Op8 chi = Eigen::Map<const Op8>(v.data());
  chi = 0.5 * (chi + chi.adjoint());
  out.chi = chi;
  out.battery = battery_marginal(chi);
  out.report = battery_report(DensityMatrix(ComplexMatrix(out.battery), 1e-8), params.omega0);
  return out;
}

std::vector<TrajectoryRecord> trajectory(const ModelParams& params, long n_collisions,
                                         long stride) {
  params.validate();
  if (n_collisions < 1) throw ContractViolation("trajectory: n_collisions must be >= 1");
  if (stride < 1) throw ContractViolation("trajectory: stride must be >= 1");

  const CollisionEngine engine(params);
  EngineState state = initial_state(ground_qubit(), ground_qubit(), ground_qubit());
  std::vector<TrajectoryRecord> out;
  out.reserve(static_cast<std::size_t>(n_collisions / stride + 1));

  auto record = [&] {
    Op2 b = battery_marginal(state.chi);
    b = 0.5 * (b + b.adjoint());
    const BatteryReport r = battery_report(DensityMatrix(ComplexMatrix(b), 1e-8), params.omega0);
    out.push_back({state.time(params.gamma), r.energy, r.ergotropy, r.purity, r.bloch});
  };

  record();
  while (state.n < n_collisions) {
    engine.advance(state);
    if (state.n % stride == 0) record();
  }
  return out;
}

}  // namespace qbattery
