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

#include <sstream>

#include "qbattery/sweep.hpp"

using namespace qbattery;

TEST_CASE("axis parsing") {
  const Axis single = parse_axis("g", "0.25");
  CHECK(single.values == std::vector<double>{0.25});
  CHECK_FALSE(single.is_range());

  const Axis lin = parse_axis("p", "0:1:5");
  REQUIRE(lin.values.size() == 5);
  CHECK(lin.values[1] == 0.25);
  CHECK(lin.values.back() == 1.0);

  const Axis lg = parse_axis("Gamma", "log:0.01:10:4");
  REQUIRE(lg.values.size() == 4);
  CHECK(lg.values[0] == 0.01);
  CHECK(lg.values[1] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(lg.values[3] == 10.0);

  CHECK(parse_axis("g", "0.3:0.3:1").values == std::vector<double>{0.3});
  CHECK_THROWS_AS(parse_axis("g", ""), UsageError);
  CHECK_THROWS_AS(parse_axis("g", "abc"), UsageError);
  CHECK_THROWS_AS(parse_axis("g", "1:0:3"), UsageError);
  CHECK_THROWS_AS(parse_axis("g", "0:1:0"), UsageError);
  CHECK_THROWS_AS(parse_axis("g", "0:1:2.5"), UsageError);
  CHECK_THROWS_AS(parse_axis("g", "0:1"), UsageError);
  CHECK_THROWS_AS(parse_axis("g", "log:0:1:3"), UsageError);
  CHECK_THROWS_AS(parse_axis("g", "inf"), UsageError);
}

TEST_CASE("axis domains") {
  CHECK_THROWS_AS(check_axis_domain(parse_axis("p", "0:1.2:3")), UsageError);
  CHECK_THROWS_AS(check_axis_domain(parse_axis("g", "-1")), UsageError);
  CHECK_NOTHROW(check_axis_domain(parse_axis("p", "0:1:3")));
}

TEST_CASE("doubles round-trip through the CSV format") {
  for (double v : {0.1, 1.0 / 3.0, 0.20710678118654752, 1e-300, -2.5}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("CSV table") {
  CsvTable t({"a", "b"});
  t.add_row({"1", "2"});
  CHECK_THROWS(t.add_row({"1"}));
  std::ostringstream out;
  t.write(out);
  CHECK(out.str() == "a,b\n1,2\n");
}

TEST_CASE("parallel map keeps order and propagates failures") {
  const std::function<int(std::size_t)> square = [](std::size_t i) { return static_cast<int>(i * i); };
  const auto serial = parallel_map<int>(50, 1, square);
  const auto parallel = parallel_map<int>(50, 4, square);
  CHECK(serial == parallel);
  CHECK(parallel[7] == 49);
  const std::function<int(std::size_t)> boom = [](std::size_t i) -> int {
    if (i == 13) throw std::runtime_error("boom");
    return 0;
  };
  CHECK_THROWS_AS(parallel_map<int>(30, 3, boom), std::runtime_error);
}

TEST_CASE("outputs list") {
  CHECK(parse_outputs("ergotropy,energy,ergotropy", {"energy", "ergotropy"}) ==
        std::vector<std::string>{"ergotropy", "energy"});
  CHECK_THROWS_AS(parse_outputs("nope", {"energy"}), UsageError);
}

TEST_CASE("optimal alpha in the large-loss limit follows the tuning ratio") {
  ModelParams m;
  m.p = 0.0;
  m.g = 0.01;
  const double a = optimal_alpha(m);
  CHECK(a / m.g == doctest::Approx(1.09).epsilon(0.02));
}

TEST_CASE("minimal p search is self-consistent") {
  ModelParams m;
  m.g = 0.8;
  std::vector<double> grid;
  for (int k = 0; k < 100; ++k) grid.push_back(0.01 * k);
  AlphaChoice opt;
  opt.kind = AlphaChoice::Kind::kOptimal;
  const MinPResult r = min_p_for_max(m, grid, opt);
  REQUIRE(r.p);
  CHECK(*r.p > 0.0);
  CHECK(*r.p < 1.0);
  m.p = *r.p;
  m.alpha = r.alpha;
  const double e = fixed_point_steady(m).report.ergotropy;
  CHECK(std::abs(e - kMaxErgotropy) / kMaxErgotropy <= 0.01);
  // one grid step lower no longer qualifies
  m.p = *r.p - 0.01;
  m.alpha = optimal_alpha(m);
  CHECK(fixed_point_steady(m).report.ergotropy < 0.99 * kMaxErgotropy);
}

TEST_CASE("at most two swept parameters") {
  SteadyCommand cmd;
  cmd.p = parse_axis("p", "0:0.5:2");
  cmd.g = parse_axis("g", "0.5:1:2");
  cmd.alpha.absolute = parse_axis("alpha", "0.5:1:2");
  CommandReport rep;
  CHECK_THROWS_AS(run_steady(cmd, RunSettings{}, rep), UsageError);
}

TEST_CASE("steady sweep is identical serially and in parallel") {
  SteadyCommand cmd;
  cmd.p = parse_axis("p", "0:0.8:3");
  cmd.g = parse_axis("g", "1:2:2");
  cmd.alpha.kind = AlphaChoice::Kind::kRelative;
  cmd.alpha.relative = 1.09;
  RunSettings s;
  s.steady.method = SteadyMethod::kDirect;
  CommandReport r1, r2;
  std::ostringstream a, b;
  run_steady(cmd, s, r1).write(a);
  s.workers = 3;
  run_steady(cmd, s, r2).write(b);
  CHECK(a.str() == b.str());
  CHECK(r1.rows == 6);
  CHECK(r1.nonconverged == 0);
}

TEST_CASE("continuous sweep at Gamma = 0 reports the unitary regime as nonconverged") {
  ContinuousCommand cmd;
  cmd.memory_rate = parse_axis("Gamma", "0");
  RunSettings s;
  s.gamma = 1000.0;
  s.steady.method = SteadyMethod::kDirect;
  CommandReport rep;
  const CsvTable t = run_continuous(cmd, s, rep);
  REQUIRE(t.rows().size() == 1);
  CHECK(t.rows()[0].back() == "nonconverged");
  CHECK(rep.nonconverged == 1);
}

TEST_CASE("selftest passes") {
  std::ostringstream log;
  CHECK(run_selftest(log).empty());
}
