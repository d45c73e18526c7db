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

// Finite fields built as a tower F_{q'} = F_{p^r0} ⊂ F_{q'}(α_1) ⊂ ... ⊂ F_q.
//
// Every element is stored as its coordinate vector over F_p with respect to
// the nested product basis of the tower. An element of level i is written
// c_0 + c_1 α_i with c_0, c_1 in level i-1, and its coordinates are the
// concatenation [c_0 | c_1]. Consequently the subfield F_{q'}(α_1..α_i) is
// exactly the set of elements whose coordinates beyond the first dim(i)
// positions vanish.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace qpir {

class FieldTower;
class FieldElem;
using TowerPtr = std::shared_ptr<const FieldTower>;
using Coords = std::vector<std::uint32_t>;

/// An element of the prime field F_p.
class PrimeElem {
 public:
  PrimeElem() = default;
  PrimeElem(std::uint32_t value, std::uint32_t p);

  std::uint32_t value() const noexcept { return value_; }
  std::uint32_t prime() const noexcept { return p_; }

  PrimeElem operator+(PrimeElem o) const;
  PrimeElem operator-(PrimeElem o) const;
  PrimeElem operator*(PrimeElem o) const;
  PrimeElem operator-() const;
  bool operator==(const PrimeElem&) const = default;

 private:
  std::uint32_t value_ = 0;
  std::uint32_t p_ = 2;
};

/// Plain-text description of a tower, sufficient to rebuild it bit-exactly.
struct TowerSpec {
  std::uint32_t prime = 2;
  std::uint32_t base_degree = 1;
  // Monic modulus of the base field over F_p, low-to-high coefficients
  // (base_degree + 1 entries). Empty when base_degree == 1.
  std::vector<std::uint32_t> base_modulus;
  // Level i (1-based) is defined by x^2 + m1 x + m0 over level i-1; each
  // entry holds {coords(m0), coords(m1)}.
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>>
      level_moduli;

  bool operator==(const TowerSpec&) const = default;
};

class FieldTower : public std::enable_shared_from_this<FieldTower> {
 public:
  /// Builds F_{q'} for the prime power `base_order` and adjoins
  /// `chain_length` degree-2 extensions on top of it.
  static TowerPtr build(std::uint64_t base_order, int chain_length);

  /// Rebuilds a tower from its record; every modulus is re-checked for
  /// irreducibility.
  static TowerPtr from_spec(const TowerSpec& spec);

  std::uint32_t prime() const noexcept { return p_; }
  std::uint32_t base_degree() const noexcept { return dims_.front(); }
  int chain_length() const noexcept { return static_cast<int>(dims_.size()) - 1; }
  /// r = log_p q.
  int degree() const noexcept { return static_cast<int>(dims_.back()); }
  /// dim over F_p of F_{q'}(α_1..α_level).
  int level_dim(int level) const;
  /// |F_q| when it fits in 64 bits.
  std::optional<std::uint64_t> order() const;
  /// |F_q|, throwing GuardExceeded if it does not fit in 64 bits.
  std::uint64_t checked_order() const;
  double log2_order() const;

  TowerSpec spec() const { return spec_; }

  FieldElem zero() const;
  FieldElem one() const;
  /// α_0 = 1; α_i is the generator adjoined at level i.
  FieldElem alpha(int i) const;
  FieldElem from_uint(std::uint64_t v) const;  // image of v mod p
  FieldElem from_coords(std::span<const std::uint32_t> c) const;
  /// Element with canonical index Σ c_j p^j.
  FieldElem from_index(std::uint64_t index) const;
  /// All q elements in canonical index order (guarded to q ≤ 2^20).
  std::vector<FieldElem> elements() const;
  FieldElem random(std::mt19937_64& rng) const;

  // Raw arithmetic on coordinate vectors; FieldElem wraps these.
  void add(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
           std::span<std::uint32_t> out) const;
  void sub(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
           std::span<std::uint32_t> out) const;
  void mul(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
           std::span<std::uint32_t> out) const;
  /// Inverse of a nonzero element, one level at a time through the norm.
  void inv(std::span<const std::uint32_t> a, std::span<std::uint32_t> out) const;
  /// tr x = Tr T_x computed from cached traces of the basis elements.
  std::uint32_t trace(std::span<const std::uint32_t> a) const;
  /// Multiplication-by-x matrix over F_p (row-major r×r, column j = x·e_j).
  std::vector<std::uint32_t> multiplication_matrix(
      std::span<const std::uint32_t> a) const;

  bool same_field(const FieldTower& other) const;

 private:
  FieldTower() = default;
  // `scratch` must hold at least 6 * degree() entries.
  void mul_level(int level, const std::uint32_t* a, const std::uint32_t* b,
                 std::uint32_t* out, std::uint32_t* scratch) const;
  void mul_level(int level, const std::uint32_t* a, const std::uint32_t* b,
                 std::uint32_t* out) const;
  void inv_level(int level, const std::uint32_t* a, std::uint32_t* out) const;
  void mul_base(const std::uint32_t* a, const std::uint32_t* b,
                std::uint32_t* out) const;
  std::vector<std::uint32_t> basis_traces(int level) const;
  std::uint32_t level_trace(int level, std::span<const std::uint32_t> a) const;
  std::uint32_t level_norm(int level, std::span<const std::uint32_t> a) const;
  void add_chain_level(int level);
  bool chain_modulus_irreducible(int level,
                                 std::span<const std::uint32_t> m0,
                                 std::span<const std::uint32_t> m1) const;

  std::uint32_t p_ = 2;
  std::vector<std::uint32_t> dims_;  // dims_[i] = r_i
  std::vector<std::uint32_t> base_modulus_;
  std::vector<std::vector<std::uint32_t>> m0_, m1_;  // per chain level, 1-based
  std::vector<std::uint32_t> traces_;                // tr(e_j) for the top level
  TowerSpec spec_;
};

class FieldElem {
 public:
  FieldElem() = default;
  FieldElem(TowerPtr tower, Coords coords);

  const TowerPtr& tower() const noexcept { return tower_; }
  std::span<const std::uint32_t> coords() const noexcept { return coords_; }
  bool valid() const noexcept { return tower_ != nullptr; }
  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator-(const FieldElem& o) const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem operator/(const FieldElem& o) const;
  FieldElem operator-() const;
  FieldElem& operator+=(const FieldElem& o);
  FieldElem& operator-=(const FieldElem& o);
  FieldElem& operator*=(const FieldElem& o);
  FieldElem inv() const;
  FieldElem pow(std::uint64_t e) const;

  /// tr x ∈ F_p.
  PrimeElem trace() const;
  /// Smallest i with x ∈ F_{q'}(α_1..α_i).
  int subfield_level() const;
  /// Σ c_j p^j; throws GuardExceeded when q does not fit in 64 bits.
  std::uint64_t index() const;

  bool operator==(const FieldElem& o) const;
  bool operator!=(const FieldElem& o) const { return !(*this == o); }

 private:
  const FieldTower& checked_peer(const FieldElem& o) const;

  TowerPtr tower_;
  Coords coords_;
};

std::ostream& operator<<(std::ostream& os, const FieldElem& x);

/// Digit string of the coordinates (base-36 digit per coordinate, coordinate 0
/// first). Used by the plain-text matrix blocks.
std::string to_coord_string(const FieldElem& x);
FieldElem from_coord_string(const TowerPtr& tower, const std::string& s);

/// Factors a prime power into (p, r); throws PreconditionError otherwise.
std::pair<std::uint32_t, std::uint32_t> split_prime_power(std::uint64_t q);

}  // namespace qpir
