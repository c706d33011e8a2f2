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

#include <atomic>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qbattery/engine.hpp"
#include "qbattery/nonmarkov.hpp"

namespace qbattery {

/// Bad command-line input; the CLI maps it to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Spacing { kLinear, kLog };

/// One swept (or fixed) parameter.
struct Axis {
  std::string name;
  std::vector<double> values;
  bool is_range() const { return values.size() > 1; }
};

/// Parses "v", "min:max:n" (linear) or "log:min:max:n". Throws UsageError.
Axis parse_axis(const std::string& name, const std::string& text);

/// Checks the axis against the domain of its parameter (p in [0,1], rates >= 0).
void check_axis_domain(const Axis& axis);

/// 17 significant digits, enough to round-trip a double.
std::string format_double(double v);

/// CSV with a mandatory header row and fixed column order.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row);
  void write(std::ostream& out) const;
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Evaluates fn(0..n-1) on up to `workers` threads; results stay in index order.
template <typename R>
std::vector<R> parallel_map(std::size_t n, unsigned workers, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(n);
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  pool.reserve(count);
  for (unsigned w = 0; w < count; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// How alpha is chosen at each grid point.
struct AlphaChoice {
  enum class Kind { kAbsolute, kRelative, kOptimal };
  Kind kind = Kind::kAbsolute;
  Axis absolute{"alpha", {0.0}};
  double relative = 1.0;
};

/// Alpha that maximizes the steady-state ergotropy at fixed (g, p, kappa, gamma).
/// Log-spaced bracketing followed by golden-section search to `rel_tol`,
/// evaluated with the direct fixed-point solver.
double optimal_alpha(const ModelParams& params, double rel_tol = 1e-4);

/// Smallest p on `p_grid` whose steady ergotropy, with alpha optimized at that p
/// when `optimize` is set, is within `rel_gap` of kMaxErgotropy.
struct MinPResult {
  std::optional<double> p;
  double alpha = 0.0;
  double ergotropy = 0.0;
};
MinPResult min_p_for_max(const ModelParams& base, const std::vector<double>& p_grid,
                         const AlphaChoice& alpha, double rel_gap = 0.01);

/// Settings shared by all subcommands.
struct RunSettings {
  double gamma = 100.0;
  SteadyOptions steady;
  NbOptions nb;
  unsigned workers = 1;
};

struct SteadyCommand {
  Axis p{"p", {0.0}};
  Axis g{"g", {0.5}};
  AlphaChoice alpha;
  std::vector<std::string> outputs{"energy", "ergotropy", "purity", "n_collisions"};
};

struct TrajectoryCommand {
  double p = 0.0;
  double g = 0.5;
  AlphaChoice alpha;
  long n_collisions = 100'000;
  long stride = 100;
  /// When set, p is replaced by the smallest value on this grid reaching
  /// 99% of kMaxErgotropy at steady state.
  std::optional<Axis> min_p_grid;
};

struct NonMarkovCommand {
  Axis p{"p", {0.0}};
  Axis g{"g", {0.5}};
  AlphaChoice alpha;
  bool battery = true;
  bool joint = true;
};

struct ContinuousCommand {
  Axis memory_rate{"Gamma", {1.0}};
  Axis g{"g", {0.5}};
  AlphaChoice alpha;
  std::vector<std::string> outputs{"energy", "ergotropy", "purity", "n_collisions"};
};

/// Summary of a finished command for the caller (stderr reporting, exit codes).
struct CommandReport {
  std::size_t rows = 0;
  std::size_t nonconverged = 0;
  std::vector<std::string> warnings;
};

CsvTable run_steady(const SteadyCommand& cmd, const RunSettings& settings, CommandReport& report);
CsvTable run_trajectory(const TrajectoryCommand& cmd, const RunSettings& settings,
                        CommandReport& report);
CsvTable run_nonmarkov(const NonMarkovCommand& cmd, const RunSettings& settings,
                       CommandReport& report);
CsvTable run_continuous(const ContinuousCommand& cmd, const RunSettings& settings,
                        CommandReport& report);

/// Quick internal consistency checks; returns failure descriptions.
std::vector<std::string> run_selftest(std::ostream& log);

std::vector<std::string> parse_outputs(const std::string& csv_list,
                                       const std::vector<std::string>& allowed);

}  // namespace qbattery
