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
#include <random>

#include "qpir/dense.hpp"
#include "qpir/error.hpp"

using namespace qpir;

namespace {

SympVector vec(const TowerPtr& t, std::initializer_list<int> xs) {
  std::vector<FieldElem> c;
  for (int x : xs) c.push_back(t->from_uint(x));
  return SympVector(t, c);
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

int numeric_rank(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  int r = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r += es.eigenvalues()(i) > 0.5;
  return r;
}

// Idempotency, orthogonality, completeness and rank of every member.
void check_family(const ProjectorFamily& fam) {
  const auto d = static_cast<Eigen::Index>(fam.context().dim());
  CMatrix sum = CMatrix::Zero(d, d);
  std::vector<CMatrix> ps;
  for (std::uint64_t l = 0; l < fam.label_count(); ++l) ps.push_back(fam.projector(l));
  for (std::size_t i = 0; i < ps.size(); ++i) {
    CHECK(max_abs(ps[i] * ps[i] - ps[i]) <= 1e-10);
    CHECK(max_abs(ps[i].adjoint() - ps[i]) <= 1e-10);
    CHECK(numeric_rank(ps[i]) == int(fam.rank()));
    for (std::size_t j = i + 1; j < ps.size(); ++j) CHECK(max_abs(ps[i] * ps[j]) <= 1e-10);
    sum += ps[i];
  }
  CHECK(max_abs(sum - CMatrix::Identity(d, d)) <= 1e-10);
  // W(v) = Σ_[w] ω^{⟨v,Jw⟩} P_[w].
  const std::uint32_t p = fam.context().tower()->prime();
  for (std::size_t e = 0; e < fam.elements().size(); ++e) {
    CMatrix rec = CMatrix::Zero(d, d);
    for (std::uint64_t l = 0; l < fam.label_count(); ++l)
      rec += phase_value(p, omega_exponent(p) * fam.pairing(e, l)) * ps[l];
    CHECK((rec - fam.element_ops()[e].dense()).norm() <= 1e-9);
  }
}

}  // namespace

TEST_CASE("Weyl matrices") {
  auto f4 = FieldTower::build(2, 1);
  DenseContext ctx(f4, 1);
  // Z(α) on |0⟩, |1⟩, |α⟩, |α+1⟩.
  const CMatrix z = weyl_matrix(ctx, SympVector::from_ab({f4->zero()}, {f4->alpha(1)}));
  CHECK(max_abs(z - Eigen::Vector4cd(1, -1, -1, 1).asDiagonal().toDenseMatrix()) == 0);
  // X(1) permutes 0 ↔ 1 and α ↔ α+1.
  const CMatrix x = weyl_matrix(ctx, SympVector::from_ab({f4->one()}, {f4->zero()}));
  CHECK(x(1, 0) == Complex(1));
  CHECK(x(3, 2) == Complex(1));
  std::mt19937_64 rng(9);
  for (auto [q0, L, n] : {std::tuple{3, 0, 2}, std::tuple{2, 2, 1}, std::tuple{4, 0, 2}}) {
    auto t = FieldTower::build(q0, L);
    DenseContext c(t, n);
    for (int rep = 0; rep < 10; ++rep) {
      const CMatrix u = weyl_matrix(c, SympVector::random(t, n, rng));
      CHECK(max_abs(u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols())) < 1e-12);
    }
  }
  CHECK_THROWS_AS(DenseContext(FieldTower::build(2, 2), 4), GuardExceeded);
}

TEST_CASE("trivial stabilizer family") {
  auto f2 = FieldTower::build(2, 0);
  const auto fam = stabilizer_projectors(build_stabilizer(Subspace(f2, 1, {})));
  CHECK(fam.label_count() == 1);
  CHECK(max_abs(fam.projector(std::uint64_t{0}) - CMatrix::Identity(2, 2)) < 1e-15);
  const auto rho = initial_state(fam);
  CHECK(max_abs(rho.matrix() - CMatrix::Identity(2, 2) / 2.0) < 1e-15);
  CHECK_THROWS_AS(pure_ancilla_initial_state(stabilizer_projectors(
                      build_stabilizer(Subspace(f2, 2, {vec(f2, {1, 1, 0, 0}),
                                                        vec(f2, {0, 0, 1, 1})})))),
                  PreconditionError);
}

TEST_CASE("two-sum stabilizer projects onto the maximally entangled state") {
  auto f2 = FieldTower::build(2, 0);
  const Subspace v(f2, 2, {vec(f2, {1, 1, 0, 0}), vec(f2, {0, 0, 1, 1})});
  const auto fam = stabilizer_projectors(build_stabilizer(v));
  check_family(fam);
  CHECK(fam.rank() == 1);
  Eigen::Vector4cd phi(1, 0, 0, 1);
  const auto bell = DensityMatrix::pure(phi, 2, 2);
  CHECK(max_abs(initial_state(fam).matrix() - bell.matrix()) < 1e-12);
  const auto half = partial_trace(bell, {0});
  CHECK(max_abs(half.matrix() - CMatrix::Identity(2, 2) / 2.0) < 1e-15);
  CHECK(std::abs(entropy(half) - 1.0) < 1e-12);
  CHECK(std::abs(entropy(bell)) < 1e-12);
}

TEST_CASE("projector families over protocol bases") {
  for (auto [n, t, q0, L, seed] : {std::tuple{2, 1, 4, 0, 1}, std::tuple{3, 2, 4, 0, 7},
                                   std::tuple{2, 1, 3, 0, 2}, std::tuple{2, 1, 3, 1, 5}}) {
    auto tower = FieldTower::build(q0, L);
    const auto b = search_basis(n, t, tower, seed);
    const auto stab = build_stabilizer(b.stabilizer_space(), b.cosets());
    const auto fam = stabilizer_projectors(stab);
    CAPTURE(n);
    CAPTURE(q0);
    check_family(fam);
    const auto& ctx = fam.context();
    const auto rho0 = initial_state(fam);
    CHECK(rho0.check().ok());
    for (const auto& op : fam.element_ops())
      CHECK(max_abs(op.conjugate(rho0.matrix()) - rho0.matrix()) <= 1e-10);
    auto dist = measure_pvm(rho0, fam);
    CHECK(std::abs(dist[0] - 1.0) <= 1e-10);
    // Conjugation moves labels: W(w') P_[w] W(w')* = P_[w + w'].
    std::mt19937_64 rng(seed);
    for (int rep = 0; rep < 20; ++rep) {
      const auto w = SympVector::random(tower, n, rng);
      const auto w2 = SympVector::random(tower, n, rng);
      const auto lw = stab->cosets().reduce(w);
      const auto lsum = stab->cosets().reduce(w + w2);
      const DensityMatrix start(fam.projector(lw) / double(fam.rank()), n, ctx.q());
      const auto moved = apply_weyl(ctx, start, w2);
      CHECK(max_abs(moved.matrix() - fam.projector(lsum) / double(fam.rank())) <= 1e-9);
      const auto d2 = measure_pvm(moved, fam);
      const auto idx = stab->cosets().label_index(lsum);
      CHECK(std::abs(d2[idx] - 1.0) <= 1e-9);
      const auto back = apply_weyl(ctx, moved, -w2);
      CHECK(max_abs(back.matrix() - start.matrix()) <= 1e-10);
    }
    const auto mixed = DensityMatrix::maximally_mixed(n, ctx.q());
    for (double pr : measure_pvm(mixed, fam))
      CHECK(std::abs(pr - 1.0 / double(fam.label_count())) <= 1e-10);
  }
}

TEST_CASE("local Weyl labels") {
  auto f4 = FieldTower::build(4, 0);
  const auto b = search_basis(2, 1, f4, 1);
  const auto fam = stabilizer_projectors(build_stabilizer(b.stabilizer_space(), b.cosets()));
  const auto rho = initial_state(fam);
  const auto& ctx = fam.context();
  const auto z = f4->zero();
  CHECK(max_abs(apply_local_weyls(ctx, rho, {{z, z}, {z, z}}).matrix() - rho.matrix()) == 0);
  const auto a = f4->from_index(2), c = f4->from_index(3);
  const auto moved = apply_local_weyls(ctx, rho, {{a, z}, {c, a}});
  const auto w = SympVector::from_ab({a, c}, {z, a});
  CHECK(max_abs(moved.matrix() - apply_weyl(ctx, rho, w).matrix()) < 1e-12);
  CHECK_THROWS_AS(apply_local_weyls(ctx, rho, {{z, z}}), MismatchError);
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(3);
  auto random_state = [&](int dim) {
    CMatrix g(dim, dim);
    std::normal_distribution<double> nd;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = Complex(nd(rng), nd(rng));
    CMatrix r = g * g.adjoint();
    return CMatrix(r / r.trace().real());
  };
  const CMatrix s = random_state(3), t = random_state(9);
  CMatrix prod(27, 27);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) prod.block(i * 9, j * 9, 9, 9) = s(i, j) * t;
  const DensityMatrix rho(prod, 3, 3);
  CHECK(max_abs(partial_trace(rho, {0}).matrix() - s) < 1e-12);
  CHECK(max_abs(partial_trace(rho, {2, 1}).matrix() - t) < 1e-12);
  CHECK(max_abs(partial_trace(rho, {0, 1, 2}).matrix() - prod) < 1e-15);
  CHECK(partial_trace(rho, {1}).check().ok());
  CHECK_THROWS_AS(partial_trace(rho, {3}), PreconditionError);
  CHECK_THROWS_AS(partial_trace(rho, {}), PreconditionError);
}

TEST_CASE("entropic quantities") {
  CHECK(std::abs(entropy(CMatrix(CMatrix::Identity(2, 2) / 2.0)) - 1.0) < 1e-12);
  CHECK(std::abs(entropy(DensityMatrix::maximally_mixed(2, 3)) - std::log2(9.0)) < 1e-12);
  CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1;
  k1(1, 1) = 1;
  CHECK(std::abs(holevo_information({{0.5, &k0}, {0.5, &k1}}) - 1.0) < 1e-12);
  CHECK(std::abs(holevo_information({{0.25, &k0}, {0.75, &k0}})) < 1e-12);
  CHECK_THROWS_AS(holevo_information({{0.5, &k0}, {0.4, &k1}}), PreconditionError);
  CHECK(trace_distance(k0, k0) == 0.0);
  CHECK(std::abs(trace_distance(k0, k1) - 1.0) < 1e-12);
  const CMatrix mixed = CMatrix::Identity(2, 2) / 2.0;
  CHECK(std::abs(trace_distance(k0, mixed) - 0.5) < 1e-12);
  // Non-orthogonal pure states |0⟩, |+⟩.
  Eigen::Vector2cd plus(1, 1);
  const auto pp = DensityMatrix::pure(plus, 1, 2);
  const double expected = std::sqrt(0.5);
  CHECK(std::abs(trace_distance(k0, pp.matrix()) - expected) < 1e-12);
}
