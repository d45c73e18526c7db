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

#pragma once

// Heisenberg-Weyl bookkeeping and the phase-space simulator.
//
// W̃(a, b) = X(a_1)Z(b_1) ⊗ ... ⊗ X(a_n)Z(b_n). A label (w, k) stands for
// u^k W̃(w) where the phase unit u is i for p = 2 (so ω = -1 = u^2) and
// ω = e^{2πi/p} for odd p.

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "qpir/symplectic.hpp"

namespace qpir {

/// Number of distinct phase exponents: 4 for p = 2, p otherwise.
std::uint32_t phase_modulus(std::uint32_t p);
/// Exponent of the phase unit that equals ω.
std::uint32_t omega_exponent(std::uint32_t p);
/// u^k as a complex number.
std::complex<double> phase_value(std::uint32_t p, std::uint64_t k);

struct WeylLabel {
  SympVector w;
  std::uint32_t k = 0;

  static WeylLabel identity(TowerPtr tower, int n);
  static WeylLabel of(SympVector w) { return {std::move(w), 0}; }
  bool operator==(const WeylLabel& o) const { return k == o.k && w == o.w; }
  bool operator!=(const WeylLabel& o) const { return !(*this == o); }
};

/// u · v, using W̃(a,b) W̃(c,d) = ω^{⟨b,c⟩} W̃(a+c, b+d).
WeylLabel weyl_product(const WeylLabel& u, const WeylLabel& v);
WeylLabel weyl_power(const WeylLabel& u, std::uint64_t e);

/// Stabilizer group S(V) = {W(v) = c_v W̃(v) : v ∈ V}.
class Stabilizer {
 public:
  const Subspace& space() const noexcept { return v_; }
  const TowerPtr& tower() const noexcept { return v_.tower(); }
  int n() const noexcept { return v_.n(); }
  /// Quotient F_q^{2n} / V^{⊥_J} used to name the joint eigenspaces.
  const CosetSpace& cosets() const noexcept { return cosets_; }
  /// F_p-basis λ_j v_i of V with their assigned phases.
  const std::vector<WeylLabel>& generators() const noexcept { return gens_; }

  /// W(v); throws PreconditionError if v ∉ V.
  WeylLabel element(const SympVector& v) const;
  /// |V| as a double (exact while below 2^53).
  double order() const;
  /// Every W(v), v ∈ V (guarded to |V| ≤ 2^20).
  std::vector<WeylLabel> elements() const;

 private:
  friend std::shared_ptr<const Stabilizer> build_stabilizer(const Subspace&, const CosetSpace&);
  Subspace v_;
  CosetSpace cosets_;
  std::vector<WeylLabel> gens_;
  std::vector<FieldElem> lambdas_;
};

using StabilizerPtr = std::shared_ptr<const Stabilizer>;

/// Throws PreconditionError if V is not self-orthogonal and VerificationError
/// if the phase assignment fails its closure checks.
StabilizerPtr build_stabilizer(const Subspace& v);
/// As above with a caller-supplied quotient; `cosets.w_basis()` must span V^{⊥_J}.
StabilizerPtr build_stabilizer(const Subspace& v, const CosetSpace& cosets);

/// |[w]⟩⟨[w]| ⊗ ρ_mix, tracked by its coset label only.
struct CosetState {
  StabilizerPtr stab;
  CosetLabel label;
};

CosetState initial_coset_state(const StabilizerPtr& stab);
/// Conjugation by W(w): [w_old] ↦ [w_old + w].
CosetState phase_space_apply(const CosetState& s, const SympVector& w);
/// The PVM outcome, which is deterministic for these states.
CosetLabel phase_space_measure(const CosetState& s);

}  // namespace qpir
