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

#include <cmath>

#include "qpir/audit.hpp"
#include "qpir/error.hpp"

using namespace qpir;

namespace {

ProtocolInstance small_instance(int N, int T, int F, std::uint64_t q, std::uint64_t seed) {
  return ProtocolInstance::create(search_basis(N, T, FieldTower::build(q, 0), seed), F);
}

SympVector vec(const TowerPtr& t, std::initializer_list<int> xs) {
  std::vector<FieldElem> c;
  for (int x : xs) c.push_back(t->from_uint(x));
  return SympVector(t, c);
}

ProtocolInstance broken_instance() {
  auto f2 = FieldTower::build(2, 0);
  std::vector<SympVector> v = {vec(f2, {1, 0, 0, 0}), vec(f2, {0, 1, 0, 0}), vec(f2, {0, 0, 1, 0}),
                               vec(f2, {0, 0, 0, 1})};
  return ProtocolInstance::create_unchecked(BasisSet(2, 1, f2, v, "mutated"), 2);
}

}  // namespace

TEST_CASE("error probability") {
  const auto inst = small_instance(2, 1, 2, 2, 1);
  AuditPlan plan;
  const auto e = error_probability(inst, plan);
  CHECK(e.exhaustive);
  CHECK(e.points == 2 * 16 * 256);
  CHECK(e.worst == 0.0);
  CHECK(e.average == 0.0);
  const auto bad = error_probability(inst, plan, drop_first_coefficient_decoder());
  CHECK(bad.worst == 1.0);
  CHECK(bad.average == doctest::Approx(0.5));
  CHECK(bad.average <= bad.worst);
  plan.error_backend = Backend::kBoth;
  CHECK(error_probability(inst, plan).worst == 0.0);
  const auto single = small_instance(2, 1, 1, 4, 1);
  CHECK(error_probability(single, {}).worst == 0.0);
  // Sampled grid on a larger field.
  const auto big = ProtocolInstance::create(build_basis_tower(2, 1, FieldTower::build(2, 2)), 2);
  const auto s = error_probability(big, plan);
  CHECK_FALSE(s.exhaustive);
  CHECK(s.points == plan.error_samples);
  CHECK(s.worst == 0.0);
}

TEST_CASE("server secrecy") {
  AuditPlan plan;
  for (auto q : {2, 4}) {
    const auto r = server_secrecy(small_instance(2, 1, 2, q, 1), plan);
    CHECK_FALSE(r.skipped);
    CHECK(r.full_alphabet);
    CHECK(r.max_holevo <= 1e-9);
    CHECK(r.max_trace_distance <= 1e-10);
    CHECK(r.cases.size() == 4);
  }
  const auto tower = ProtocolInstance::create(build_basis_tower(2, 1, FieldTower::build(2, 2)), 2);
  const auto rt = server_secrecy(tower, plan);
  CHECK(rt.cases.front().members == 256);
  CHECK(rt.max_trace_distance <= 1e-10);
  // A pure ancilla leaks the non-target files.
  const auto mixed = server_secrecy(small_instance(3, 2, 2, 4, 1), plan);
  CHECK(mixed.max_holevo <= 1e-9);
  const auto pure = server_secrecy(small_instance(3, 2, 2, 4, 1), plan, Ancilla::kPure);
  CHECK(pure.max_holevo > 1e-3);
  CHECK(pure.max_trace_distance > 1e-3);
  // No ancilla exists when d = n.
  CHECK(server_secrecy(small_instance(2, 1, 2, 4, 1), plan, Ancilla::kPure).skipped);
  const auto one = server_secrecy(small_instance(2, 1, 1, 4, 1), plan);
  CHECK(one.cases.front().members == 1);
  CHECK(one.max_holevo == 0.0);
}

TEST_CASE("user secrecy") {
  AuditPlan plan;
  for (auto q : {2, 4}) {
    const auto r = user_secrecy(small_instance(2, 1, 2, q, 1), plan);
    CHECK(r.exact);
    CHECK(r.structural_ok);
    CHECK(r.max_t_subset <= 1e-12);
    for (const auto& s : r.subsets) CHECK(std::abs(s.mutual_information) <= 1e-12);
  }
  const auto zero = user_secrecy(small_instance(2, 1, 2, 2, 1), plan, Randomness::kZero);
  CHECK(zero.max_t_subset == doctest::Approx(1.0).epsilon(1e-9));
  const auto zero3 = user_secrecy(small_instance(2, 1, 3, 2, 1), plan, Randomness::kZero);
  CHECK(zero3.max_t_subset == doctest::Approx(std::log2(3.0)).epsilon(1e-9));
  const auto broken = user_secrecy(broken_instance(), plan);
  CHECK_FALSE(broken.structural_ok);
  CHECK(broken.max_t_subset > 0.5);
  // Monotone in the subset on a T = 3 instance, sampled.
  plan.exact_user = false;
  plan.user_samples = 4000;
  const auto mono = user_secrecy(small_instance(4, 3, 2, 2, 1), plan, Randomness::kZero);
  for (const auto& a : mono.subsets)
    for (const auto& b : mono.subsets)
      if (std::includes(b.servers.begin(), b.servers.end(), a.servers.begin(), a.servers.end()))
        CHECK(b.mutual_information >= a.mutual_information - 1e-12);
  plan.exact_user = true;
  plan.enumeration_limit = 10;
  CHECK(user_secrecy(small_instance(2, 1, 2, 4, 1), plan).skipped);
}

TEST_CASE("full audit") {
  const auto r = audit_instance(small_instance(2, 1, 2, 2, 1), {});
  CHECK(r.all_pass());
  CHECK(r.converse.slack == 0.0);
  CHECK(r.costs.rate == Rational(1));
  const auto j = to_json(r);
  CHECK(j["pass"] == true);
  CHECK(format_report(r).find("ALL PASS") != std::string::npos);
  const auto b = audit_instance(broken_instance(), {});
  CHECK_FALSE(b.user_ok());
  CHECK_FALSE(b.all_pass());
  CHECK(b.error_ok());
}
