// Copyright 2026 The gract Authors
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

// Drives the installed binary end to end.

#include <filesystem>
#include <string>

#include "binary.hpp"
#include "corpus.hpp"
#include "doctest.h"
#include "gract/serialize.hpp"

using gract::Json;
using gract::testing::corpus_path;
using gract::testing::invoke;
using gract::testing::jsonl;
using gract::testing::Result;
using gract::testing::scratch;
using gract::testing::write_temp;

namespace {

namespace fs = std::filesystem;

std::string corpus(const std::string& name) { return corpus_path(name); }

}  // namespace

TEST_CASE("check accepts the cafe") {
  Result r = invoke("check " + corpus("cafe.gract"));
  CHECK(r.code == 0);
  CHECK(r.out.find("ok") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("check reports the missing cup at the init declaration") {
  Result r = invoke("check " + corpus("cafe-nocup.gract"));
  CHECK(r.code == 1);
  CHECK(r.err.find("InsufficientInitialResources") != std::string::npos);

  Result j = invoke("check --json " + corpus("cafe-nocup.gract"));
  CHECK(j.code == 1);
  Json report = Json::parse(j.out);
  CHECK(report["schema"] == "gract/1");
  CHECK(report["ok"] == false);
  REQUIRE(report["errors"].size() == 1);
  CHECK(report["errors"][0]["code"] == "InsufficientInitialResources");
  CHECK(report["errors"][0]["loc"] == "61:1");
}

TEST_CASE("check --json lists every method with computed and declared typings") {
  Result r = invoke("check --json " + corpus("cafe.gract"));
  REQUIRE(r.code == 0);
  Json report = Json::parse(r.out);
  CHECK(report["ok"] == true);
  REQUIRE(report["methodReports"].size() == 5);
  for (const auto& m : report["methodReports"]) {
    CHECK(m["ok"] == true);
    CHECK(m["computed"]["measure"] == m["declared"]["measure"]);
    CHECK(m["computed"]["type"] == m["declared"]["type"]);
  }
  CHECK(report["configReport"]["measure"] == 41);
  CHECK(report["errors"].empty());
}

TEST_CASE("negative corpus programs are rejected with their codes") {
  Result lin = invoke("check --json " + corpus("linear-future.gract"));
  CHECK(lin.code == 1);
  CHECK(Json::parse(lin.out)["errors"][0]["code"] == "NonLinearFuture");
  Result rec = invoke("check --json " + corpus("recursive-unsolvable.gract"));
  CHECK(rec.code == 1);
  CHECK(Json::parse(rec.out)["errors"][0]["code"] == "UnsolvableRecursiveMeasure");
}

TEST_CASE("malformed and missing files") {
  fs::path bad = write_temp("bad.gract", "grade natLeq\nA { m(: }\n");
  Result r = invoke("check " + bad.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.gract:2:") != std::string::npos);
  Result j = invoke("check --json " + bad.string());
  CHECK(j.code == 2);
  CHECK(Json::parse(j.out)["errors"][0]["code"] == "ParseError");
  CHECK(invoke("check " + (scratch() / "absent.gract").string()).code == 3);
  CHECK(invoke("frobnicate").code == 2);
}

TEST_CASE("--quiet silences standard output") {
  Result r = invoke("check --quiet " + corpus("cafe.gract"));
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  Result e = invoke("explore --quiet " + corpus("cafe.gract"));
  CHECK(e.code == 0);
  CHECK(e.out.empty());
}

TEST_CASE("GRACT_COLOR controls escape sequences") {
  Result plain = invoke("check " + corpus("cafe.gract"), "", "GRACT_COLOR=never");
  CHECK(plain.out.find('\x1b') == std::string::npos);
  Result colored = invoke("check " + corpus("cafe.gract"), "", "GRACT_COLOR=always");
  CHECK(colored.out.find('\x1b') != std::string::npos);
  // Output is not a terminal here.
  Result automatic = invoke("check " + corpus("cafe.gract"), "", "GRACT_COLOR=auto");
  CHECK(automatic.out == plain.out);
}

TEST_CASE("run --strategy helpful prints a strictly decreasing measure column") {
  Result r = invoke("run --quiet --strategy helpful " + corpus("cafe.gract"));
  REQUIRE(r.code == 0);
  auto lines = jsonl(r.out);
  REQUIRE(lines.size() > 1);
  CHECK(lines[0]["rule"] == "init");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(lines[i]["step"] == i);
    CHECK(lines[i]["measure"].get<std::uint64_t>() < lines[i - 1]["measure"].get<std::uint64_t>());
  }
  CHECK(lines.back()["measure"] == 0);
}

TEST_CASE("run without a cup is stuck at the hold") {
  Result refused = invoke("run " + corpus("cafe-nocup.gract"));
  CHECK(refused.code == 1);
  Result r = invoke("run --unsafe --strategy fifo " + corpus("cafe-nocup.gract"));
  CHECK(r.code == 4);
  CHECK(r.err.find("StuckAtHold(Barista, CleanCup, 1)") != std::string::npos);
}

TEST_CASE("runs are byte-identical for identical flags") {
  std::string args = "run --quiet --seed 7 --steps 300 " + corpus("cafe.gract");
  Result a = invoke(args);
  Result b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK_FALSE(a.out.empty());
  Result c = invoke("run --quiet --seed 8 --steps 300 " + corpus("cafe.gract"));
  CHECK(c.out != a.out);
}

TEST_CASE("a run trace replays through sr") {
  Result r = invoke("run --quiet --seed 3 " + corpus("cafe.gract"));
  REQUIRE(r.code == 0);
  fs::path trace = write_temp("run.jsonl", r.out);
  Result sr = invoke("sr --json --replay " + trace.string() + " " + corpus("cafe.gract"));
  CHECK(sr.code == 0);
  Json report = Json::parse(sr.out);
  CHECK(report["ok"] == true);
  CHECK(report["stepsChecked"] == jsonl(r.out).size() - 1);
}

TEST_CASE("the interactive stepper reads indices from standard input") {
  Result r = invoke("run --quiet --strategy step --steps 3 " + corpus("cafe.gract"), "0\n7\n0\n1\n");
  CHECK(r.code == 0);
  auto lines = jsonl(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[1]["rule"] == "spawn");
  CHECK(lines[2]["rule"] == "call");
  CHECK(lines[3]["rule"] == "silent");
  CHECK(r.err.find("step>") != std::string::npos);

  Result quit = invoke("run --quiet --strategy step " + corpus("cafe.gract"), "0\nq\n");
  CHECK(quit.code == 0);
  CHECK(jsonl(quit.out).size() == 2);
}

TEST_CASE("the scripted strategy replays the cafe opening") {
  Result r = invoke("run --quiet --strategy script --script " + corpus("cafe-opening.script") +
                   " --steps 15 " + corpus("cafe.gract"));
  CHECK(r.code == 0);
  CHECK(jsonl(r.out).size() == 16);
}

TEST_CASE("explore verdicts and exit codes") {
  Result ok = invoke("explore --json --unfold 2 " + corpus("cafe.gract"));
  CHECK(ok.code == 0);
  Json v = Json::parse(ok.out);
  CHECK(v["schema"] == "gract/1");
  CHECK(v["verdict"] == "FairTerminating");
  CHECK(v["statesVisited"].get<std::uint64_t>() > 1);
  CHECK(v["helpfulViolations"] == 0);
  CHECK(v["zeroViolations"] == 0);
  CHECK(v.contains("witnessTrace"));
  CHECK(v.contains("measureHistogram"));

  Result parallel = invoke("explore --json --unfold 2 --jobs 4 " + corpus("cafe.gract"));
  CHECK(parallel.out == ok.out);

  Result stuck = invoke("explore --json --unsafe " + corpus("cafe-nocup.gract"));
  CHECK(stuck.code == 4);
  Json s = Json::parse(stuck.out);
  CHECK(s["verdict"] == "StuckFound");
  CHECK(s["stuckState"]["diagnosis"][0]["code"] == "StuckAtHold");

  Result shallow = invoke("explore --json --depth 0 " + corpus("cafe.gract"));
  CHECK(shallow.code == 6);
  CHECK(Json::parse(shallow.out)["verdict"] == "BoundExhausted");
}

TEST_CASE("sr over random runs, the teleport fixture and zero runs") {
  Result many = invoke("sr --runs 100 --seed 1 " + corpus("cafe.gract"));
  CHECK(many.code == 0);
  Result corrupted =
      invoke("sr --json --replay " + corpus("fixtures/cafe-teleport.jsonl") + " " +
            corpus("cafe.gract"));
  CHECK(corrupted.code == 5);
  Json report = Json::parse(corrupted.out);
  CHECK(report["ok"] == false);
  CHECK(report["violation"]["step"] == 3);
  Result none = invoke("sr --runs 0 " + corpus("cafe.gract"));
  CHECK(none.code == 0);
}

TEST_CASE("print round-trips through the parser") {
  Result r = invoke("print " + corpus("cafe.gract"));
  REQUIRE(r.code == 0);
  fs::path again = write_temp("printed.gract", r.out);
  Result r2 = invoke("print " + again.string());
  CHECK(r2.code == 0);
  CHECK(r2.out == r.out);
  CHECK(invoke("check --quiet " + again.string()).code == 0);
}
