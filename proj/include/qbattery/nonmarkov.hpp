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

#include <vector>

#include "qbattery/engine.hpp"
#include "qbattery/opalg.hpp"

namespace qbattery {

/// Orthonormal traceless Hermitian generators, Tr[G_a G_b] = delta_ab
/// (generalized Gell-Mann matrices scaled by 1/sqrt 2).
struct GeneratorBasis {
  int dim = 0;
  std::vector<ComplexMatrix> generators;
};

GeneratorBasis generator_basis(int dim);

enum class Subsystem { kBattery, kJoint };

const char* to_string(Subsystem s);

/// Affine action r -> A r + q of the dynamical map on generalized Bloch
/// vectors, sampled at collision counts `collisions[k]`.
struct AffineMapSeries {
  Subsystem subsystem = Subsystem::kBattery;
  std::vector<long> collisions;
  std::vector<double> times;
  std::vector<RealMatrix> A;
  std::vector<RealVector> q;
  /// |det A| at each sample
  std::vector<double> volume;
  /// Largest volume seen; exceeding 1 is unexpected but not excluded for reduced maps.
  double max_volume = 1.0;
};

struct MapOptions {
  long stride = 1;
  /// Coarse strides can hide revivals; they must be requested explicitly.
  bool allow_coarse_stride = false;
  /// Stop once the volume has stayed below `volume_floor` for `floor_window`
  /// consecutive samples (floor 0 disables early stop). A single low sample is
  /// not enough: |det A| touches zero whenever det A changes sign.
  double volume_floor = 0.0;
  long floor_window = 1;
};

/// Tomography of the battery (charger and ancillas start in |0>) or the joint
/// battery-charger map (ancillas in |0>) by pushing each generator and I/dim
/// through the collision recursion for up to `n_collisions` collisions.
AffineMapSeries propagate_map(const ModelParams& params, Subsystem subsystem, long n_collisions,
                              const MapOptions& options = {});

/// Reduced state predicted from the affine map at sample k for the initial
/// reduced state `rho0` (dim 2 for battery, 4 for joint).
ComplexMatrix apply_affine_map(const AffineMapSeries& series, std::size_t k,
                               const ComplexMatrix& rho0);

/// Values of the non-Markovianity measure below this are reported as 0.
inline constexpr double kNbZero = 1e-8;

/// Sum of positive increments of volume[n] / volume[0]. Needs >= 2 samples.
double nb_measure(const AffineMapSeries& series);
double nb_measure(const std::vector<double>& volume);

struct NbOptions {
  long max_collisions = 400'000;
  double volume_floor = 1e-12;
  /// Time (in the rate unit) the volume must stay below the floor before stopping.
  double floor_time = 50.0;
};

/// Measure for one parameter point with stride 1 and an early stop once the
/// accessible volume has stayed below `volume_floor` for `floor_time`.
double nb_for(const ModelParams& params, Subsystem subsystem, const NbOptions& options = {});

struct NbRow {
  double p = 0.0;
  double nb_battery = 0.0;
  double nb_joint = 0.0;
  double ergotropy = 0.0;
  bool converged = false;
};

/// Joined table of battery and joint measures and steady-state ergotropy over
/// a grid of swap probabilities at fixed (g, alpha, kappa, gamma).
std::vector<NbRow> nb_vs_p(const ModelParams& base, const std::vector<double>& p_grid,
                           const NbOptions& nb_options = {},
                           const SteadyOptions& steady_options = {});

}  // namespace qbattery
