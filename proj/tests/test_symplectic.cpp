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
#include "qpir/symplectic.hpp"

using namespace qpir;

namespace {

SympVector vec(const TowerPtr& t, std::initializer_list<int> xs) {
  std::vector<FieldElem> c;
  for (int x : xs) c.push_back(t->from_uint(x));
  return SympVector(t, c);
}

std::vector<SympVector> all_vectors(const TowerPtr& t, int n) {
  const auto els = t->elements();
  std::vector<SympVector> out;
  std::uint64_t total = 1;
  for (int i = 0; i < 2 * n; ++i) total *= els.size();
  for (std::uint64_t k = 0; k < total; ++k) {
    std::vector<FieldElem> c;
    std::uint64_t x = k;
    for (int i = 0; i < 2 * n; ++i) {
      c.push_back(els[x % els.size()]);
      x /= els.size();
    }
    out.emplace_back(t, c);
  }
  return out;
}

void check_basis_invariants(const BasisSet& b) {
  const int N = b.N(), T = b.T();
  const auto v = b.stabilizer_space();
  const auto perp = b.perp_space();
  CHECK(v.dim() == 2 * N - 2 * T);
  CHECK(perp.dim() == 2 * T);
  CHECK(v.is_self_orthogonal());
  CHECK(perp.contains(v));
  CHECK(orthogonal_complement(v).same_span(perp));
  CHECK(orthogonal_complement(perp).same_span(v));
  CHECK(singular_server_blocks(b.D1(), N, T).empty());
  const auto rep = verify_conditions({b.vectors().begin(), b.vectors().begin() + 2 * T}, N, T);
  CHECK(rep.ok());
}

}  // namespace

TEST_CASE("symplectic form examples") {
  auto f2 = FieldTower::build(2, 0);
  CHECK(symplectic_form(vec(f2, {1, 1, 0, 0}), vec(f2, {0, 0, 1, 1})).value() == 0);
  CHECK(symplectic_form(vec(f2, {1, 0}), vec(f2, {0, 1})).value() == 1);
  auto f3 = FieldTower::build(3, 0);
  // ⟨x, Jy⟩ = tr(b_x c_y - a_x d_y): (1,0)·(0,1) gives -1 = 2 mod 3.
  CHECK(symplectic_form(vec(f3, {1, 0}), vec(f3, {0, 1})).value() == 2);
  CHECK(symplectic_form(vec(f3, {0, 1}), vec(f3, {1, 0})).value() == 1);
  CHECK_THROWS_AS(symplectic_form(vec(f2, {1, 0}), vec(f2, {1, 0, 0, 0})), MismatchError);
}

TEST_CASE("form is alternating and bilinear") {
  for (auto [q0, L, n] : {std::tuple{2, 0, 1}, std::tuple{2, 0, 2}, std::tuple{2, 1, 1},
                          std::tuple{4, 0, 2}, std::tuple{3, 0, 1}}) {
    auto t = FieldTower::build(q0, L);
    const auto vs = all_vectors(t, n);
    for (const auto& x : vs) {
      CHECK(symplectic_form(x, x).value() == 0);
      CHECK(symplectic_form_fq(x, x).is_zero());
    }
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> pick(0, vs.size() - 1);
    const bool exhaustive = vs.size() <= 16;
    const std::size_t trials = exhaustive ? vs.size() * vs.size() * vs.size() : 20000;
    for (std::size_t k = 0; k < trials; ++k) {
      const auto& x = exhaustive ? vs[k % vs.size()] : vs[pick(rng)];
      const auto& y = exhaustive ? vs[(k / vs.size()) % vs.size()] : vs[pick(rng)];
      const auto& z = exhaustive ? vs[k / vs.size() / vs.size()] : vs[pick(rng)];
      CHECK(symplectic_form(x + y, z) == symplectic_form(x, z) + symplectic_form(y, z));
      CHECK(symplectic_form(z, x + y) == symplectic_form(z, x) + symplectic_form(z, y));
      CHECK(symplectic_form(x, y) == -symplectic_form(y, x));
    }
  }
}

TEST_CASE("orthogonal complements") {
  auto f2 = FieldTower::build(2, 0);
  const Subspace zero(f2, 2, {});
  CHECK(orthogonal_complement(zero).dim() == 4);
  const Subspace two_sum(f2, 2, {vec(f2, {1, 1, 0, 0}), vec(f2, {0, 0, 1, 1})});
  const auto c = orthogonal_complement(two_sum);
  CHECK(c.dim() == 2);
  CHECK(c.same_span(two_sum));
  CHECK(orthogonal_complement(Subspace::full(f2, 2)).dim() == 0);
  // Brute-force kernel oracle.
  int count = 0;
  for (const auto& w : all_vectors(f2, 2)) {
    bool orth = true;
    for (const auto& b : two_sum.basis()) orth = orth && symplectic_form(b, w).value() == 0;
    if (orth) {
      ++count;
      CHECK(c.contains(w));
    }
  }
  CHECK(count == 4);
}

TEST_CASE("F_q complement coincides with the trace-form complement") {
  std::mt19937_64 rng(4);
  for (auto [q0, L, n] : {std::tuple{2, 1, 2}, std::tuple{2, 2, 2}, std::tuple{3, 1, 2},
                          std::tuple{8, 0, 3}, std::tuple{9, 0, 2}}) {
    auto t = FieldTower::build(q0, L);
    for (int d = 0; d <= 2 * n; ++d) {
      std::vector<SympVector> g;
      for (int i = 0; i < d; ++i) g.push_back(SympVector::random(t, n, rng));
      const auto v = Subspace::span(t, n, g);
      const auto a = orthogonal_complement(v);
      const auto b = orthogonal_complement_trace(v);
      CHECK(a.dim() == 2 * n - v.dim());
      CHECK(a.same_span(b));
      CHECK(orthogonal_complement(a).same_span(v));
      CHECK(a.contains(v) == v.is_self_orthogonal());
    }
  }
}

TEST_CASE("tower-based construction") {
  for (auto [n, t, chain] : {std::tuple{2, 1, 2}, std::tuple{3, 2, 5}, std::tuple{3, 2, 7},
                             std::tuple{4, 2, 6}, std::tuple{4, 3, 8}}) {
    auto tower = FieldTower::build(2, chain);
    const auto s = tower_symplectic_matrix(n, t, tower);
    const auto j = symplectic_j(tower, n);
    CHECK(s.transpose() * j * s == j);
    const auto b = build_basis_tower(n, t, tower);
    CHECK(b.source() == "tower");
    check_basis_invariants(b);
    const auto rep = verify_conditions({b.vectors().begin(), b.vectors().begin() + 2 * t}, n, t);
    CHECK(rep.subsets_checked == static_cast<long>(subsets(n, t).size()));
  }
  // The odd-characteristic tower works with the unmodified B as well.
  check_basis_invariants(build_basis_tower(2, 1, FieldTower::build(3, 2)));
  check_basis_invariants(
      build_basis_tower(2, 1, FieldTower::build(3, 2), HankelVariant::kUnmodified));
  check_basis_invariants(
      build_basis_tower(3, 2, FieldTower::build(2, 5), HankelVariant::kUnmodified));
  auto tower = FieldTower::build(2, 2);
  CHECK_THROWS_AS(build_basis_tower(2, 2, tower), PreconditionError);
  CHECK_THROWS_AS(build_basis_tower(3, 2, tower), PreconditionError);
  CHECK_THROWS_AS(build_basis_tower(4, 1, FieldTower::build(2, 8)), PreconditionError);
}

TEST_CASE("with B = A and 2t = n, characteristic 2 breaks server blocks") {
  auto tower = FieldTower::build(2, 2);
  const auto s = tower_symplectic_matrix(2, 1, tower, HankelVariant::kUnmodified);
  const auto j = symplectic_j(tower, 2);
  CHECK(s.transpose() * j * s == j);
  std::vector<SympVector> v{SympVector(tower, s.column(0)), SympVector(tower, s.column(1))};
  const auto rep = verify_conditions(v, 2, 1);
  CHECK(rep.failed_pairs.empty());
  CHECK(rep.failed_subsets.size() == 2);
  CHECK_THROWS_AS(build_basis_tower(2, 1, tower, HankelVariant::kUnmodified),
                  VerificationError);
}

TEST_CASE("stacked Hankel rows are independent") {
  for (auto [k, r, chain] : {std::tuple{4, 2, 2}, std::tuple{6, 3, 4}, std::tuple{5, 2, 3},
                             std::tuple{7, 3, 5}}) {
    auto tower = FieldTower::build(2, chain);
    const auto m = stacked_hankel(k, r, tower);
    CHECK(dependent_row_subsets(m, r).empty());
  }
  // Over the base field alone, the same shape has dependent row sets.
  auto flat = FieldTower::build(2, 4);
  FqMatrix m(flat, 4, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = flat->one();
  m(2, 0) = flat->one();
  m(3, 1) = flat->one();
  CHECK_FALSE(dependent_row_subsets(m, 2).empty());
}

TEST_CASE("basis search") {
  const auto b1 = search_basis(2, 1, FieldTower::build(4, 0), 1);
  check_basis_invariants(b1);
  const auto b2 = search_basis(3, 2, FieldTower::build(8, 0), 7);
  check_basis_invariants(b2);
  const auto b3 = search_basis(4, 3, FieldTower::build(4, 0), 3);
  check_basis_invariants(b3);
  // Determinism.
  const auto again = search_basis(3, 2, FieldTower::build(8, 0), 7);
  CHECK(again.vectors() == b2.vectors());
  try {
    const auto b = search_basis(2, 1, FieldTower::build(2, 0), 1);
    check_basis_invariants(b);
  } catch (const SearchExhausted& e) {
    CHECK(e.attempts() > 0);
  }
  CHECK_THROWS_AS(search_basis(3, 1, FieldTower::build(4, 0), 1), PreconditionError);
  CHECK_THROWS_AS(search_basis(3, 2, FieldTower::build(2, 0), 1, 1), Error);
}

TEST_CASE("verify_conditions reports failures") {
  auto f16 = FieldTower::build(2, 2);
  const auto b = build_basis_tower(2, 1, f16);
  auto dup = std::vector<SympVector>{b.vectors()[0], b.vectors()[0]};
  const auto r1 = verify_conditions(dup, 2, 1);
  CHECK_FALSE(r1.independent);
  CHECK_FALSE(r1.ok());
  // e_1 and f_1 pair non-trivially.
  auto f2 = FieldTower::build(2, 0);
  const auto r2 = verify_conditions({vec(f2, {1, 0, 0, 0}), vec(f2, {0, 0, 1, 0})}, 2, 1);
  CHECK_FALSE(r2.failed_pairs.empty());
  CHECK(r2.failed_pairs.front() == std::pair{0, 1});
  // A symplectic basis with t = n has no orthogonality constraint to violate.
  const auto r3 = verify_conditions({vec(f2, {1, 0, 0, 0}), vec(f2, {0, 1, 0, 0}),
                                     vec(f2, {0, 0, 1, 0}), vec(f2, {0, 0, 0, 1})},
                                    2, 2);
  CHECK(r3.pairs_checked == 0);
  CHECK(r3.independent);
  // Server 2 has an all-zero block.
  const auto r4 = verify_conditions({vec(f2, {1, 0, 0, 0}), vec(f2, {0, 0, 1, 0})}, 2, 1);
  REQUIRE(r4.failed_subsets.size() == 1);
  CHECK(r4.failed_subsets[0] == std::vector<int>{1});
}

TEST_CASE("coset reduction") {
  auto tower = FieldTower::build(2, 2);
  const auto b = build_basis_tower(2, 1, tower);
  const auto& v = b.vectors();
  const int N = 2, T = 1;
  SympVector zero(tower, N);
  const auto l0 = coset_reduce(zero, b);
  for (const auto& c : coset_coefficients(l0, b)) CHECK(c.is_zero());
  const auto l1 = coset_reduce(v[2 * T], b);
  auto c1 = coset_coefficients(l1, b);
  CHECK(c1[0].is_one());
  CHECK(c1[1].is_zero());
  const auto l2 = coset_reduce(v[0] + v[2 * N - 1], b);
  CHECK(l2 == coset_reduce(v[2 * N - 1], b));
  auto c2 = coset_coefficients(l2, b);
  CHECK(c2[0].is_zero());
  CHECK(c2[1].is_one());
  CHECK(l2.rep == v[2 * N - 1]);
  // reduce(w) = reduce(w') iff w - w' ∈ V^{⊥_J}.
  std::mt19937_64 rng(9);
  const auto perp = b.perp_space();
  for (int i = 0; i < 200; ++i) {
    const auto w = SympVector::random(tower, N, rng);
    const auto w2 = (i % 2) ? w + tower->random(rng) * v[i % (2 * T)]
                            : SympVector::random(tower, N, rng);
    CHECK((coset_reduce(w, b) == coset_reduce(w2, b)) == perp.contains(w - w2));
  }
  const auto& cs = b.cosets();
  CHECK(cs.label_count() == 256);
  for (std::uint64_t i = 0; i < 256; i += 17) CHECK(cs.label_index(cs.label_at(i)) == i);
}
