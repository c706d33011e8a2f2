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

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(QBATTERY_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("cli: usage errors exit with 2") {
  CHECK(cli("").code == 2);
  CHECK(cli("steady --p 1.5").code == 2);
  CHECK(cli("steady --p 0:1:3 --g 0:1:3 --alpha 0:1:3").code == 2);
  CHECK(cli("steady --bogus").code == 2);
  CHECK(cli("steady --alpha 1 --alpha-rel 1").code == 2);
  CHECK(cli("nonmarkov --subsystem neither").code == 2);
  CHECK(cli("steady --outputs energy,nothing").code == 2);
  CHECK(cli("steady --g log:0:1:3").code == 2);
}

TEST_CASE("cli: steady single row") {
  const Run r = cli("steady --p 0.5 --g 2 --alpha-rel 1.09 --method direct");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("p,g,alpha,energy,ergotropy,purity,n_collisions,status\n", 0) == 0);
  CHECK(lines(r.out) == 2);
  CHECK(r.out.find(",ok\n") != std::string::npos);
}

TEST_CASE("cli: byte-identical reruns and worker independence") {
  const std::string args = "steady --p 0:0.9:4 --g 0.5:2:3 --alpha-rel 1.09 --method direct";
  const Run a = cli(args);
  const Run b = cli(args);
  const Run c = cli(args + " --workers 4");
  REQUIRE(a.code == 0);
  CHECK(lines(a.out) == 13);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("cli: output file") {
  const std::string path = "cli_test_out.csv";
  std::remove(path.c_str());
  const Run r = cli("continuous --Gamma log:0.1:10:3 --g 1 --alpha 0.9 --out " + path);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str().rfind("Gamma,p,g,alpha,", 0) == 0);
  CHECK(lines(ss.str()) == 4);
  std::remove(path.c_str());
}

TEST_CASE("cli: trajectory and nonmarkov") {
  const Run t = cli("trajectory --p 0.5 --g 0.8 --alpha 0.87 --n 1000 --stride 100");
  REQUIRE(t.code == 0);
  CHECK(lines(t.out) == 12);
  CHECK(t.out.find("\n0,0.5,0.80000000000000004,0.87,-0.5,0,1,") != std::string::npos);

  const Run n = cli("nonmarkov --p 0 --g 0 --alpha 0 --subsystem both");
  REQUIRE(n.code == 0);
  CHECK(n.out.rfind("p,g,alpha,nb_battery,nb_joint,ergotropy,status\n", 0) == 0);
  CHECK(n.out.find("\n0,0,0,0,0,0,ok\n") != std::string::npos);
}

TEST_CASE("cli: selftest") { CHECK(cli("selftest").code == 0); }
