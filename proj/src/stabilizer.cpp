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

#include "qpir/stabilizer.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qpir/error.hpp"

namespace qpir {

std::uint32_t phase_modulus(std::uint32_t p) { return p == 2 ? 4 : p; }
std::uint32_t omega_exponent(std::uint32_t p) { return p == 2 ? 2 : 1; }

std::complex<double> phase_value(std::uint32_t p, std::uint64_t k) {
  const std::uint32_t m = phase_modulus(p);
  k %= m;
  if (p == 2) {
    static const std::complex<double> units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return units[k];
  }
  const double theta = 2.0 * std::numbers::pi * double(k) / double(m);
  return {std::cos(theta), std::sin(theta)};
}

WeylLabel WeylLabel::identity(TowerPtr tower, int n) { return {SympVector(std::move(tower), n), 0}; }

WeylLabel weyl_product(const WeylLabel& u, const WeylLabel& v) {
  if (u.w.size() != v.w.size()) throw MismatchError("Weyl labels act on different n");
  const std::uint32_t p = u.w.tower()->prime();
  const std::uint32_t m = phase_modulus(p);
  const std::uint32_t bc = trace_dot(u.w.b_part(), v.w.a_part()).value();
  const std::uint64_t k = std::uint64_t(u.k) + v.k + std::uint64_t(omega_exponent(p)) * bc;
  return {u.w + v.w, static_cast<std::uint32_t>(k % m)};
}

WeylLabel weyl_power(const WeylLabel& u, std::uint64_t e) {
  WeylLabel r = WeylLabel::identity(u.w.tower(), u.w.n());
  for (std::uint64_t i = 0; i < e; ++i) r = weyl_product(r, u);
  return r;
}

// ---------------------------------------------------------------- Stabilizer

namespace {

// Phase of a generator: i^{tr(a·b)} for p = 2, ω^{((p+1)/2) tr(a·b)} for odd p.
std::uint32_t generator_phase(const SympVector& g) {
  const std::uint32_t p = g.tower()->prime();
  const std::uint32_t ab = trace_dot(g.a_part(), g.b_part()).value();
  if (p == 2) return ab;
  return static_cast<std::uint32_t>((std::uint64_t(p + 1) / 2 * ab) % p);
}

}  // namespace

WeylLabel Stabilizer::element(const SympVector& v) const {
  const auto& tower = v_.tower();
  if (v_.dim() == 0) {
    if (!v.is_zero()) throw PreconditionError("vector is not in the stabilizer space");
    return WeylLabel::identity(tower, v_.n());
  }
  const auto c = v_.matrix().solve(v.coords());
  if (!c) throw PreconditionError("vector is not in the stabilizer space");
  const int r = tower->degree();
  WeylLabel out = WeylLabel::identity(tower, v_.n());
  for (int i = 0; i < v_.dim(); ++i) {
    const auto coords = (*c)[i].coords();
    for (int j = 0; j < r; ++j)
      if (coords[j]) out = weyl_product(out, weyl_power(gens_[std::size_t(i) * r + j], coords[j]));
  }
  if (out.w != v) throw InternalError("stabilizer element reconstruction mismatch");
  return out;
}

double Stabilizer::order() const {
  return std::round(std::pow(2.0, tower()->log2_order() * v_.dim()));
}

std::vector<WeylLabel> Stabilizer::elements() const {
  const double bits = tower()->log2_order() * v_.dim();
  if (bits > 20 + 1e-9) throw GuardExceeded("stabilizer has more than 2^20 elements");
  const std::uint32_t p = tower()->prime();
  const std::size_t g = gens_.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < g; ++i) total *= p;
  // Precompute powers of every generator.
  std::vector<std::vector<WeylLabel>> pw(g);
  for (std::size_t i = 0; i < g; ++i) {
    pw[i].push_back(WeylLabel::identity(tower(), n()));
    for (std::uint32_t e = 1; e < p; ++e) pw[i].push_back(weyl_product(pw[i].back(), gens_[i]));
  }
  std::vector<WeylLabel> out;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    WeylLabel l = WeylLabel::identity(tower(), n());
    std::size_t x = idx;
    for (std::size_t i = 0; i < g; ++i, x /= p)
      if (x % p) l = weyl_product(l, pw[i][x % p]);
    out.push_back(std::move(l));
  }
  return out;
}

StabilizerPtr build_stabilizer(const Subspace& v) {
  return build_stabilizer(v, CosetSpace::for_stabilizer(v));
}

StabilizerPtr build_stabilizer(const Subspace& v, const CosetSpace& cosets) {
  if (!v.is_self_orthogonal()) throw PreconditionError("subspace is not self-orthogonal");
  const auto& tower = v.tower();
  if (cosets.n() != v.n() ||
      !orthogonal_complement(v).same_span(Subspace(tower, v.n(), cosets.w_basis())))
    throw PreconditionError("quotient does not match the stabilizer space");
  auto s = std::make_shared<Stabilizer>();
  s->v_ = v;
  s->cosets_ = cosets;
  const int r = tower->degree();
  for (int j = 0; j < r; ++j) {
    std::vector<std::uint32_t> e(r, 0);
    e[j] = 1;
    s->lambdas_.push_back(tower->from_coords(e));
  }
  for (const auto& b : v.basis())
    for (const auto& lam : s->lambdas_) {
      auto g = lam * b;
      const auto k = generator_phase(g);
      s->gens_.push_back({std::move(g), k});
    }
  // Closure checks by label arithmetic: W(g)^p = I and W(g) W(g') = W(g+g').
  const std::uint32_t p = tower->prime();
  const auto id = WeylLabel::identity(tower, v.n());
  for (const auto& g : s->gens_)
    if (weyl_power(g, p) != id) throw VerificationError("stabilizer generator does not have order p");
  const std::size_t ng = s->gens_.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (ng <= 32) {
    for (std::size_t i = 0; i < ng; ++i)
      for (std::size_t j = 0; j < ng; ++j) pairs.emplace_back(i, j);
  } else {
    std::mt19937_64 rng(ng);
    std::uniform_int_distribution<std::size_t> pick(0, ng - 1);
    for (int k = 0; k < 256; ++k) pairs.emplace_back(pick(rng), pick(rng));
  }
  for (auto [i, j] : pairs) {
    const auto prod = weyl_product(s->gens_[i], s->gens_[j]);
    if (prod != weyl_product(s->gens_[j], s->gens_[i]))
      throw VerificationError("stabilizer generators do not commute");
    if (prod != s->element(prod.w)) throw VerificationError("stabilizer phases are not closed");
  }
  return s;
}

CosetState initial_coset_state(const StabilizerPtr& stab) {
  return {stab, stab->cosets().reduce(SympVector(stab->tower(), stab->n()))};
}

CosetState phase_space_apply(const CosetState& s, const SympVector& w) {
  return {s.stab, s.stab->cosets().reduce(s.label.rep + w)};
}

CosetLabel phase_space_measure(const CosetState& s) { return s.label; }

}  // namespace qpir
