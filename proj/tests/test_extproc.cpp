// Copyright 2026 The washh Authors
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

#include <chrono>
#include <cmath>
#include <string>

#include <doctest.h>

#include "washh/baselines.hpp"
#include "washh/benchmarks.hpp"
#include "washh/extproc.hpp"
#include "washh/washh.hpp"

using namespace washh;
using namespace washh::extproc;
using namespace std::chrono_literals;

namespace {

std::string echo(const std::string& args = "") {
  return std::string("'") + WASHH_ECHO_EVALUATOR + "' " + args;
}

}  // namespace

TEST_SUITE("extproc") {

TEST_CASE("handshake parsing") {
  const Handshake h = parse_handshake(R"({"dim":2,"lower":[-3,-5],"upper":[3,1],"anchors":[[0,-2]]})");
  CHECK(h.dim == 2);
  CHECK(h.lower == Vector{-3.0, -5.0});
  CHECK(h.upper == Vector{3.0, 1.0});
  REQUIRE(h.anchors.size() == 1);
  CHECK(h.anchors[0] == Vector{0.0, -2.0});
  CHECK(h.warnings.empty());

  CHECK(parse_handshake(R"({"dim":1,"lower":[0],"upper":[1]})").anchors.empty());
}

TEST_CASE("handshake schema violations") {
  CHECK_THROWS_AS(parse_handshake(R"({"lower":[0],"upper":[1]})"), HandshakeFailed);
  CHECK_THROWS_AS(parse_handshake("not json"), HandshakeFailed);
  CHECK_THROWS_AS(parse_handshake(R"({"dim":2,"lower":[0],"upper":[1,1]})"), HandshakeFailed);
  CHECK_THROWS_AS(parse_handshake(R"({"dim":1,"lower":[1],"upper":[0]})"), HandshakeFailed);
  CHECK_THROWS_AS(parse_handshake(R"({"dim":0,"lower":[],"upper":[]})"), HandshakeFailed);
  CHECK_THROWS_AS(parse_handshake(R"({"dim":1,"lower":["a"],"upper":[1]})"), HandshakeFailed);
  CHECK_THROWS_AS(parse_handshake(R"({"dim":1,"lower":[0],"upper":[1],"anchors":[[0,1]]})"),
                  HandshakeFailed);
}

TEST_CASE("out-of-box anchors are clipped with a warning") {
  const Handshake h =
      parse_handshake(R"({"dim":2,"lower":[-3,-5],"upper":[3,1],"anchors":[[9,-2],[0,0]]})");
  REQUIRE(h.anchors.size() == 2);
  CHECK(h.anchors[0] == Vector{3.0, -2.0});
  CHECK(h.warnings.size() == 1);
}

TEST_CASE("request and response codec") {
  CHECK(encode_request(6, Vector{0.5, -1.0}) == R"({"id":6,"x":[0.5,-1.0]})");
  CHECK(decode_response(R"({"id":6,"loss":0.25})", 6) == 0.25);
  CHECK_THROWS_AS(decode_response(R"({"id":7,"loss":0.25})", 6), ProtocolError);
  CHECK(std::isinf(decode_response(R"({"id":1,"loss":"NaN"})", 1)));
  CHECK(std::isinf(decode_response(R"({"id":1,"loss":"inf"})", 1)));
  CHECK(std::isinf(decode_response(R"({"id":1,"loss":null})", 1)));
  CHECK(decode_response(R"({"id":1,"loss":"1.5"})", 1) == 1.5);
  CHECK_THROWS_AS(decode_response(R"({"id":1})", 1), ProtocolError);
  CHECK_THROWS_AS(decode_response("garbage", 1), ProtocolError);
  CHECK_THROWS_AS(decode_response(R"({"id":1,"loss":"abc"})", 1), ProtocolError);
}

TEST_CASE("echo evaluator connects and answers") {
  const Problem p = connect(echo("--dim 3 --lo -2 --hi 2 --anchors '[[1,1,1]]'"));
  CHECK(p.dim == 3);
  CHECK(p.lower == Vector(3, -2.0));
  REQUIRE(p.anchors.size() == 1);
  CHECK(p.objective(Vector{1.0, 2.0, -1.0}) == 6.0);
  CHECK(p.objective(Vector{0.5, 0.0, 0.0}) == 0.25);
}

TEST_CASE("subprocess trace equals in-process sphere") {
  const Problem remote = connect(echo("--dim 5"));
  const Problem local = make_box_problem("sphere", 5, -100.0, 100.0, bench::sphere);
  WashhConfig c;
  c.pop_size = 10;
  c.budget = 400;
  c.seed = 77;
  const RunResult a = run_washh(remote, c);
  const RunResult b = run_washh(local, c);
  CHECK(a.evaluations == 400);
  CHECK(a.trace == b.trace);
  CHECK(a.best_point == b.best_point);

  const Problem remote2 = connect(echo("--dim 5"));
  const RunResult w1 = run_method(MethodId::WOA, remote2, 10, 200, 3);
  const RunResult w2 = run_method(MethodId::WOA, local, 10, 200, 3);
  CHECK(w1.trace == w2.trace);
}

TEST_CASE("mismatched response id") {
  const Problem p = connect(echo("--dim 2 --bad-id-at 6"));
  for (int i = 0; i < 6; ++i) p.objective(Vector{0.0, 0.0});
  CHECK_THROWS_AS(p.objective(Vector{0.0, 0.0}), ProtocolError);
}

TEST_CASE("NaN loss is recorded as +inf and the run continues") {
  const Problem p = connect(echo("--dim 2 --nan-at 3"));
  BudgetedEvaluator e(p, 10);
  for (int i = 0; i < 10; ++i) {
    const double v = e.evaluate(Vector{1.0, 1.0});
    if (i == 3) {
      CHECK(std::isinf(v));
    } else {
      CHECK(v == 2.0);
    }
  }
  CHECK(e.used() == 10);

  const Problem q = connect(echo("--dim 2 --nan-at 35"));
  WashhConfig c;
  c.pop_size = 10;
  c.budget = 100;
  const RunResult r = run_washh(q, c);
  CHECK(r.evaluations == 100);
  CHECK(std::isfinite(r.best_value));
}

TEST_CASE("evaluator death") {
  const Problem p = connect(echo("--dim 2 --die-after 10"));
  for (int i = 0; i < 10; ++i) p.objective(Vector{0.0, 1.0});
  CHECK_THROWS_AS(p.objective(Vector{0.0, 1.0}), EvaluatorDied);

  CHECK_THROWS_AS(connect("exit 0"), HandshakeFailed);
  CHECK_THROWS_AS(connect(echo("--omit-dim")), HandshakeFailed);
  CHECK_THROWS_AS(connect(echo("--garbage")), HandshakeFailed);
}

TEST_CASE("evaluator timeout") {
  EvaluatorOptions opts;
  opts.eval_timeout = 200ms;
  const Problem p = connect(echo("--dim 2 --hang-at 2"), opts);
  p.objective(Vector{0.0, 0.0});
  p.objective(Vector{0.0, 0.0});
  const auto t0 = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(p.objective(Vector{0.0, 0.0}), EvaluatorTimeout);
  CHECK(std::chrono::steady_clock::now() - t0 < 5s);

  EvaluatorOptions hs;
  hs.handshake_timeout = 200ms;
  CHECK_THROWS_AS(connect("sleep 5", hs), HandshakeFailed);
}

}  // TEST_SUITE
