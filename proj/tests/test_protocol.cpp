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

#include <map>
#include <random>
#include <set>

#include "qpir/error.hpp"
#include "qpir/protocol.hpp"
#include "qpir/serialize.hpp"

using namespace qpir;

namespace {

SympVector vec(const TowerPtr& t, std::initializer_list<int> xs) {
  std::vector<FieldElem> c;
  for (int x : xs) c.push_back(t->from_uint(x));
  return SympVector(t, c);
}

ProtocolInstance small_instance(int N, int T, int F, std::uint64_t q, std::uint64_t seed,
                                Backend b = Backend::kPhaseSpace) {
  return ProtocolInstance::create(search_basis(N, T, FieldTower::build(q, 0), seed), F, b);
}

std::string key(const FqMatrix& m) { return to_json(m).dump(); }

}  // namespace

TEST_CASE("query construction") {
  const auto inst = small_instance(2, 1, 2, 2, 1);
  const auto& t = inst.tower();
  FqMatrix zero(t, 2, 4);
  for (int k = 1; k <= 2; ++k) {
    const auto q = user_query(k, inst, zero);
    CHECK(q.q == inst.basis().D2() * selection_matrix(k, 2, 2, t));
  }
  CHECK_THROWS_AS(user_query(3, inst, zero), PreconditionError);
  CHECK_THROWS_AS(user_query(0, inst, zero), PreconditionError);
  CHECK_THROWS_AS(user_query(1, inst, FqMatrix(t, 2, 3)), MismatchError);

  // All 2^8 choices of R give distinct queries for a fixed k.
  std::set<std::string> seen;
  const auto els = t->elements();
  for (int x = 0; x < 256; ++x) {
    FqMatrix R(t, 2, 4);
    for (int b = 0; b < 8; ++b) R(b / 4, b % 4) = els[(x >> b) & 1];
    seen.insert(key(user_query(1, inst, R).q));
  }
  CHECK(seen.size() == 256);
}

TEST_CASE("server encoding") {
  auto t = FieldTower::build(2, 2);
  std::mt19937_64 rng(4);
  std::vector<FieldElem> qx(4), qz(4), m(4), m2(4), z(4, t->zero());
  for (int i = 0; i < 4; ++i) {
    qx[i] = t->random(rng);
    qz[i] = t->random(rng);
    m[i] = t->random(rng);
    m2[i] = t->random(rng);
  }
  CHECK(server_encode(qx, qz, z).w.is_zero());
  CHECK(server_encode(z, z, m).w.is_zero());
  std::vector<FieldElem> sum(4);
  for (int i = 0; i < 4; ++i) sum[i] = m[i] + m2[i];
  CHECK(server_encode(qx, qz, m).w + server_encode(qx, qz, m2).w == server_encode(qx, qz, sum).w);
  CHECK_THROWS_AS(server_encode(qx, qz, {t->one()}), MismatchError);
}

TEST_CASE("decoding reads the quotient coordinates") {
  const auto inst = small_instance(3, 2, 2, 4, 1);
  const auto& b = inst.basis();
  const auto& cs = b.cosets();
  const auto& v = b.vectors();
  const int T = b.T();
  CHECK(user_decode(cs.reduce(SympVector(inst.tower(), 3)), inst) ==
        std::vector<FieldElem>(2, inst.tower()->zero()));
  const auto a = inst.tower()->from_index(2), c = inst.tower()->from_index(3);
  const auto w = a * v[2 * T] + c * v[2 * T + 1];
  CHECK(user_decode(cs.reduce(w), inst) == std::vector<FieldElem>{a, c});
  CHECK(user_decode(cs.reduce(w + v[0]), inst) == std::vector<FieldElem>{a, c});
}

TEST_CASE("zero-error retrieval on the tower basis") {
  auto tower = FieldTower::build(2, 2);
  const auto inst = ProtocolInstance::create(build_basis_tower(2, 1, tower), 2, Backend::kBoth);
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 60; ++rep) {
    const int k = 1 + rep % 2;
    const auto m = random_files(inst, rng);
    const auto R = random_randomness(inst, rng);
    const auto tr = run_protocol(inst, k, m, R);
    CHECK(tr.decoded == file_block(m, k, 2));
    REQUIRE(tr.dense_leakage.has_value());
    CHECK(*tr.dense_leakage <= 1e-9);
    CHECK(tr.messages == 4);
  }
  const std::vector<FieldElem> zero(4, tower->zero());
  const auto tr = run_protocol(inst, 1, zero, random_randomness(inst, rng));
  CHECK(tr.decoded == std::vector<FieldElem>(2, tower->zero()));
  CHECK_THROWS_AS(run_protocol(inst, 3, zero, random_randomness(inst, rng)), PreconditionError);
}

TEST_CASE("zero-error retrieval on searched bases agrees across backends") {
  const auto inst = small_instance(3, 2, 2, 8, 7, Backend::kBoth);
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 200; ++rep) {
    const int k = 1 + rep % 2;
    const auto m = random_files(inst, rng);
    const auto tr = run_protocol(inst, k, m, random_randomness(inst, rng));
    CHECK(tr.decoded == file_block(m, k, inst.file_length()));
  }
  // The decoded output does not depend on R (exhaustive at q = 2).
  const auto small = small_instance(2, 1, 2, 2, 1);
  const auto m = random_files(small, rng);
  const auto els = small.tower()->elements();
  for (int x = 0; x < 256; ++x) {
    FqMatrix R(small.tower(), 2, 4);
    for (int b = 0; b < 8; ++b) R(b / 4, b % 4) = els[(x >> b) & 1];
    for (int k = 1; k <= 2; ++k) CHECK(run_protocol(small, k, m, R).decoded == file_block(m, k, 2));
  }
}

TEST_CASE("server order does not change the returned state") {
  const auto inst = small_instance(3, 2, 2, 4, 1, Backend::kDense);
  std::mt19937_64 rng(13);
  const auto m = random_files(inst, rng);
  const auto q = user_query(2, inst, random_randomness(inst, rng));
  const auto& fam = inst.dense_family();
  DensityMatrix fwd = inst.dense_initial_state(), rev = fwd;
  std::vector<SympVector> parts;
  for (int s = 0; s < 3; ++s) {
    const auto l = server_encode(q.x_row(s), q.z_row(s), m);
    SympVector w(inst.tower(), 3);
    w[s] = l.w.a(0);
    w[3 + s] = l.w.b(0);
    parts.push_back(w);
  }
  for (int s = 0; s < 3; ++s) fwd = apply_weyl(fam.context(), fwd, parts[s]);
  for (int s = 2; s >= 0; --s) rev = apply_weyl(fam.context(), rev, parts[s]);
  CHECK((fwd.matrix() - rev.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transcripts are deterministic and transport-independent") {
  const auto inst = small_instance(4, 3, 2, 4, 3);
  std::mt19937_64 rng(14);
  const auto m = random_files(inst, rng);
  const auto R = random_randomness(inst, rng);
  const auto a = dump(to_json(run_protocol(inst, 2, m, R), inst));
  const auto b = dump(to_json(run_protocol(inst, 2, m, R), inst));
  RunOptions ser;
  ser.transport = Transport::kSerialized;
  const auto c = dump(to_json(run_protocol(inst, 2, m, R, ser), inst));
  CHECK(a == b);
  CHECK(a == c);
  const auto j = Json::parse(a);
  CHECK(j["servers"].size() == 4);
  CHECK(j["timing"]["messages"] == 8);
  // 4 sends, 4 receives, then the measurement.
  CHECK(j["timing"]["logical_finish"] == 9);
}

TEST_CASE("instances reject unverified bases and serve smaller T") {
  auto f2 = FieldTower::build(2, 0);
  // V = span{e_1, e_2}: self-orthogonal, but server 1 sees a singular block.
  std::vector<SympVector> v = {vec(f2, {1, 0, 0, 0}), vec(f2, {0, 1, 0, 0}), vec(f2, {0, 0, 1, 0}),
                               vec(f2, {0, 0, 0, 1})};
  BasisSet bad(2, 1, f2, v, "mutated");
  CHECK_THROWS_AS(ProtocolInstance::create(bad, 2), VerificationError);
  const auto weak = ProtocolInstance::create_unchecked(bad, 2);
  CHECK_FALSE(weak.verified());
  CHECK(native_collusion(4, 1) == 2);
  CHECK(native_collusion(5, 1) == 3);
  CHECK(native_collusion(4, 3) == 3);
  const auto served = ProtocolInstance::create(search_basis(4, 2, FieldTower::build(4, 0), 1), 2,
                                               Backend::kPhaseSpace, 1);
  CHECK(served.requested_T() == 1);
  CHECK(served.T() == 2);
  CHECK_THROWS_AS(ProtocolInstance::create(search_basis(4, 3, FieldTower::build(4, 0), 1), 2,
                                           Backend::kPhaseSpace, 1),
                  PreconditionError);
}

TEST_CASE("two-party multicast") {
  auto f2 = FieldTower::build(2, 0);
  const Subspace v(f2, 2, {vec(f2, {1, 1, 0, 0}), vec(f2, {0, 0, 1, 1})});
  const auto cs = CosetSpace::for_stabilizer(v);
  const auto z = f2->zero(), o = f2->one();
  CHECK(run_multicast(v, {{z, z}, {z, z}}) == cs.reduce(SympVector(f2, 2)));
  const auto out = run_multicast(v, {{o, z}, {z, o}});
  CHECK(out == cs.reduce(vec(f2, {1, 0, 0, 1})));
  // Every pair of labels with sums (1, 1) lands on the same outcome.
  CHECK(run_multicast(v, {{z, o}, {o, z}}) == out);
  CHECK(run_multicast(v, {{o, o}, {z, z}}) == out);
  CHECK(run_multicast(v, {{z, z}, {o, z}}) != out);
  for (const auto& extra : v.basis()) CHECK(cs.reduce(vec(f2, {1, 0, 0, 1}) + extra) == out);
  CHECK_THROWS_AS(run_multicast(v, {{z, z}}), MismatchError);
}
