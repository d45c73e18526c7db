// Copyright 2026 The qpir-sim Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpir/error.hpp"
#include "qpir/harness.hpp"

using namespace qpir;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.N = 2;
  c.T = 1;
  c.F = 2;
  c.field = {2, 1};
  c.basis.source = "search";
  c.basis.seed = 3;
  return c;
}

// Replaces the basis with the identity, which breaks row-subset independence.
Json mutate(Json bundle) {
  auto& rows = bundle["instance"]["basis"]["vectors"];
  const auto tower = FieldTower::from_spec(tower_spec_from_json(bundle["instance"]["tower"]));
  const auto one = to_coord_string(tower->one()), zero = to_coord_string(tower->zero());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) rows[r][c] = r == c ? one : zero;
  return bundle;
}

}  // namespace

TEST_CASE("config round trip and validation") {
  auto c = small_config();
  c.backend = Backend::kBoth;
  c.audit.user_samples = 77;
  const auto back = RunConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK_NOTHROW(c.validate());

  auto bad = c;
  bad.T = bad.N;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  CHECK_THROWS_AS(cmd_setup(bad), PreconditionError);
  bad = c;
  bad.F = 1;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  bad = c;
  bad.basis.source = "tower";
  bad.field.chain_length = 1;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  bad.field.chain_length = 2;
  CHECK_NOTHROW(bad.validate());
  bad.basis.source = "oracle";
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  CHECK_THROWS_AS(RunConfig::from_json(Json{{"N", "two"}}), PreconditionError);
  CHECK_THROWS(RunConfig::from_json(Json{{"backend", "gpu"}}));
}

TEST_CASE("setup and run are deterministic") {
  const auto c = small_config();
  const auto b1 = cmd_setup(c), b2 = cmd_setup(c);
  CHECK(dump(b1) == dump(b2));
  CHECK(b1["instance"]["verification"]["ok"].get<bool>());
  const auto inst = load_bundle(b1);
  CHECK(inst.verified());
  for (int k = 1; k <= c.F; ++k) {
    const auto r1 = cmd_run(b1, k, std::nullopt, 11);
    const auto r2 = cmd_run(b1, k, std::nullopt, 11, std::nullopt, Transport::kSerialized);
    CHECK(r1.correct);
    CHECK(dump(r1.json) == dump(r2.json));
    CHECK(r1.json["seed"] == 11);
  }
  const auto other = cmd_run(b1, 1, std::nullopt, 12);
  CHECK(dump(other.json) != dump(cmd_run(b1, 1, std::nullopt, 11).json));
  // Explicit files.
  std::mt19937_64 rng(5);
  const auto m = random_files(inst, rng);
  const auto r = cmd_run(b1, 2, m, 1, Backend::kBoth);
  CHECK(r.correct);
  CHECK(r.target == file_block(m, 2, inst.file_length()));
  CHECK_THROWS_AS(cmd_run(b1, 1, std::vector<FieldElem>(m.begin(), m.end() - 1), 1), MismatchError);
  CHECK_THROWS(cmd_run(b1, 3, std::nullopt, 1));
}

TEST_CASE("tampered and mutated bundles") {
  const auto good = cmd_setup(small_config());
  auto forged = mutate(good);
  // Still claims ok: refused everywhere.
  CHECK_THROWS_AS(load_bundle(forged), VerificationError);
  CHECK_THROWS_AS(load_bundle(forged, false), VerificationError);
  CHECK_THROWS_AS(cmd_run(forged, 1, std::nullopt, 1), VerificationError);

  // Honest about failing: runs refuse, audits report the failure.
  auto honest = forged;
  honest["instance"]["verification"]["ok"] = false;
  CHECK_THROWS_AS(load_bundle(honest), VerificationError);
  const auto inst = load_bundle(honest, false);
  CHECK_FALSE(inst.verified());
  const auto report = cmd_audit(honest, AuditPlan{});
  CHECK_FALSE(report.user_ok());
  CHECK_FALSE(report.all_pass());
  CHECK_FALSE(report.user.singular_subsets.empty());

  auto wrong_format = good;
  wrong_format["format"] = "something-else";
  CHECK_THROWS_AS(load_bundle(wrong_format), VerificationError);
  auto truncated = good;
  truncated["instance"].erase("basis");
  CHECK_THROWS_AS(load_bundle(truncated), VerificationError);
}

TEST_CASE("audit of a good bundle passes") {
  const auto report = cmd_audit(cmd_setup(small_config()), AuditPlan{});
  CHECK(report.all_pass());
  CHECK(format_report(report).find("ALL PASS") != std::string::npos);
}

TEST_CASE("bounds command") {
  BoundsQuery q;
  q.N = 4;
  q.T = 3;
  q.F = 2;
  const auto b = cmd_bounds(q);
  CHECK(b["quantum_capacity"] == "1/2");
  CHECK(b["classical"]["symmetric-t-private"].get<double>() == doctest::Approx(0.25));
  CHECK(b["classical"]["t-private"].get<double>() == doctest::Approx(4.0 / 7.0));
  CHECK(b["converse"]["pass"].get<bool>());
  CHECK_FALSE(format_bounds(b).empty());

  q = {};
  q.N = 2;
  q.T = 1;
  q.f_limit = true;
  const auto lim = cmd_bounds(q);
  CHECK(lim["gap_vs_symmetric_t_private"].get<double>() == doctest::Approx(0.5));
  CHECK(format_bounds(lim).find("F=inf") != std::string::npos);
}
