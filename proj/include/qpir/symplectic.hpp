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

// Symplectic geometry over F_q^{2n}.
//
// A vector w = (a, b) has a-part w[0..n) and b-part w[n..2n). The form
// ⟨x, Jy⟩ with J = ((0, -I), (I, 0)) is F_p-valued through the trace; most
// linear algebra here uses its F_q-valued counterpart Σ_i (b_x,i c_i - a_x,i d_i)
// for y = (c, d), which has the same orthogonal complements.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qpir/field.hpp"
#include "qpir/fq_matrix.hpp"

namespace qpir {

class SympVector {
 public:
  SympVector() = default;
  SympVector(TowerPtr tower, int n);  // zero vector
  SympVector(TowerPtr tower, std::vector<FieldElem> coords);
  static SympVector from_ab(const std::vector<FieldElem>& a, const std::vector<FieldElem>& b);
  static SympVector unit(TowerPtr tower, int n, int index);
  static SympVector random(TowerPtr tower, int n, std::mt19937_64& rng);

  const TowerPtr& tower() const noexcept { return tower_; }
  int n() const noexcept { return static_cast<int>(c_.size() / 2); }
  int size() const noexcept { return static_cast<int>(c_.size()); }
  const std::vector<FieldElem>& coords() const noexcept { return c_; }

  FieldElem& operator[](int i) { return c_[i]; }
  const FieldElem& operator[](int i) const { return c_[i]; }
  const FieldElem& a(int i) const { return c_[i]; }
  const FieldElem& b(int i) const { return c_[n() + i]; }
  std::vector<FieldElem> a_part() const;
  std::vector<FieldElem> b_part() const;

  SympVector operator+(const SympVector& o) const;
  SympVector operator-(const SympVector& o) const;
  SympVector operator-() const;
  SympVector& operator+=(const SympVector& o);
  bool operator==(const SympVector& o) const;
  bool operator!=(const SympVector& o) const { return !(*this == o); }
  bool is_zero() const;

 private:
  void check_peer(const SympVector& o) const;

  TowerPtr tower_;
  std::vector<FieldElem> c_;
};

SympVector operator*(const FieldElem& s, const SympVector& v);

/// ⟨a, b⟩ = tr Σ a_i b_i.
PrimeElem trace_dot(const std::vector<FieldElem>& a, const std::vector<FieldElem>& b);
/// ⟨x, Jy⟩ ∈ F_p.
PrimeElem symplectic_form(const SympVector& x, const SympVector& y);
/// F_q-valued form Σ (b_x c_y - a_x d_y); its trace is symplectic_form.
FieldElem symplectic_form_fq(const SympVector& x, const SympVector& y);

/// An F_q-subspace of F_q^{2n} with an ordered, independent basis.
class Subspace {
 public:
  Subspace() = default;
  /// Throws PreconditionError if the vectors are dependent.
  Subspace(TowerPtr tower, int n, std::vector<SympVector> basis);
  /// Span of arbitrary generators; a basis is extracted greedily.
  static Subspace span(TowerPtr tower, int n, const std::vector<SympVector>& gens);
  static Subspace full(TowerPtr tower, int n);

  const TowerPtr& tower() const noexcept { return tower_; }
  int n() const noexcept { return n_; }
  int dim() const noexcept { return static_cast<int>(basis_.size()); }
  const std::vector<SympVector>& basis() const noexcept { return basis_; }
  /// 2n × d matrix with the basis as columns.
  FqMatrix matrix() const;

  bool contains(const SympVector& w) const;
  bool contains(const Subspace& o) const;
  bool is_self_orthogonal() const;
  bool same_span(const Subspace& o) const;

 private:
  TowerPtr tower_;
  int n_ = 0;
  std::vector<SympVector> basis_;
};

/// V^{⊥_J} computed with the F_q-valued form.
Subspace orthogonal_complement(const Subspace& v);
/// V^{⊥_J} computed with the F_p-valued trace form by expanding every vector
/// over F_p. Used to cross-check orthogonal_complement.
Subspace orthogonal_complement_trace(const Subspace& v);

/// Element of F_q^{2n} / W for a subspace W (the J-complement of some V),
/// described by its coefficients on a fixed complement of W.
struct CosetLabel {
  std::vector<FieldElem> coeffs;
  SympVector rep;  // Σ coeffs_i u_i, the canonical representative

  bool operator==(const CosetLabel& o) const { return coeffs == o.coeffs; }
  bool operator!=(const CosetLabel& o) const { return !(*this == o); }
};

/// The quotient F_q^{2n} / W together with the change of basis used to read
/// off canonical coset coordinates.
class CosetSpace {
 public:
  CosetSpace() = default;
  /// `w_basis` spans W and `complement` completes it to a basis of F_q^{2n}.
  CosetSpace(TowerPtr tower, int n, std::vector<SympVector> w_basis,
             std::vector<SympVector> complement);
  /// Quotient by V^{⊥_J}, completed with standard unit vectors.
  static CosetSpace for_stabilizer(const Subspace& v);

  const TowerPtr& tower() const noexcept { return tower_; }
  int n() const noexcept { return n_; }
  int quotient_dim() const noexcept { return static_cast<int>(complement_.size()); }
  const std::vector<SympVector>& w_basis() const noexcept { return w_; }
  const std::vector<SympVector>& complement() const noexcept { return complement_; }

  /// Coordinates of w in the basis (w_basis, complement).
  std::vector<FieldElem> expand(const SympVector& w) const;
  CosetLabel reduce(const SympVector& w) const;
  CosetLabel from_coefficients(const std::vector<FieldElem>& c) const;

  /// q^{quotient_dim}; throws GuardExceeded past 2^40.
  std::uint64_t label_count() const;
  /// Canonical index Σ index(c_i) q^i of a label.
  std::uint64_t label_index(const CosetLabel& l) const;
  CosetLabel label_at(std::uint64_t index) const;

 private:
  TowerPtr tower_;
  int n_ = 0;
  std::vector<SympVector> w_, complement_;
  FqMatrix change_inv_;
};

/// The 2N vectors v_1..v_{2N} used by the retrieval protocol.
class BasisSet {
 public:
  BasisSet() = default;
  /// Throws VerificationError if the vectors do not form a basis.
  BasisSet(int N, int T, TowerPtr tower, std::vector<SympVector> v, std::string source);

  int N() const noexcept { return N_; }
  int T() const noexcept { return T_; }
  const TowerPtr& tower() const noexcept { return tower_; }
  const std::vector<SympVector>& vectors() const noexcept { return v_; }
  const std::string& source() const noexcept { return source_; }

  /// V = span{v_1..v_{2N-2T}}.
  Subspace stabilizer_space() const;
  /// span{v_1..v_{2T}}.
  Subspace perp_space() const;
  /// D_1 = (v_1 .. v_{2T}), D_2 = (v_{2T+1} .. v_{2N}).
  FqMatrix D1() const;
  FqMatrix D2() const;
  const CosetSpace& cosets() const noexcept { return cosets_; }

 private:
  int N_ = 0, T_ = 0;
  TowerPtr tower_;
  std::vector<SympVector> v_;
  std::string source_;
  CosetSpace cosets_;
};

CosetLabel coset_reduce(const SympVector& w, const BasisSet& basis);
/// (c_{2T+1}, .., c_{2N}) of a label.
std::vector<FieldElem> coset_coefficients(const CosetLabel& label, const BasisSet& basis);

struct ConditionReport {
  int n = 0, t = 0;
  bool independent = false;
  long subsets_checked = 0;
  long pairs_checked = 0;
  std::vector<std::vector<int>> failed_subsets;    // 0-based server indices
  std::vector<std::pair<int, int>> failed_pairs;   // 0-based (i, j)
  std::vector<std::string> notes;

  bool ok() const { return independent && failed_subsets.empty() && failed_pairs.empty(); }
};

/// Checks independence of v_1..v_{2t}, row-subset independence (condition (a))
/// over every t-subset of servers, and ⟨v_i, J v_j⟩ = 0 for i ≤ 2n-2t,
/// j ≤ 2t (condition (b)).
ConditionReport verify_conditions(const std::vector<SympVector>& vectors, int n, int t);

/// For every t-subset π of servers, the 2t × 2t block of D_1 on rows
/// π(1..t) and n + π(1..t). Returns the subsets where it is singular.
std::vector<std::vector<int>> singular_server_blocks(const FqMatrix& d1, int n, int t);

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int k);

/// Choice of the matrix B in the tower-based construction.
enum class HankelVariant {
  // b_ij = α_{i+j-2+(2t-n)} everywhere except for 2t = n in characteristic 2,
  // where that choice gives I + BA^{-1} = 0; B = 0 is used there instead.
  kRepaired,
  // b_ij = α_{i+j-2+(2t-n)} unconditionally.
  kUnmodified,
};

/// Hankel-structured symplectic matrix of the tower-based construction.
FqMatrix tower_symplectic_matrix(int n, int t, const TowerPtr& tower,
                                 HankelVariant variant = HankelVariant::kRepaired);
BasisSet build_basis_tower(int n, int t, const TowerPtr& tower,
                           HankelVariant variant = HankelVariant::kRepaired);

/// Ā = (A; I_r) with a_ij = α_{i+j-2}, A of shape (k-r) × r.
FqMatrix stacked_hankel(int k, int r, const TowerPtr& tower);
/// r-row subsets of m whose rows are dependent.
std::vector<std::vector<int>> dependent_row_subsets(const FqMatrix& m, int r);

BasisSet search_basis(int n, int t, const TowerPtr& tower, std::uint64_t seed,
                      long max_attempts = 20000);

/// J as a 2n × 2n matrix.
FqMatrix symplectic_j(const TowerPtr& tower, int n);

}  // namespace qpir
