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

#include "qpir/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include "qpir/error.hpp"

namespace qpir {

namespace {

constexpr std::uint64_t kMaxEnumerable = 1u << 20;
constexpr long kMaxModulusCandidates = 1'000'000;

std::uint32_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint32_t p) {
  std::uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

std::uint32_t mod_inv(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw PreconditionError("inverse of zero in F_p");
  return mod_pow(a, p - 2, p);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Determinant of a row-major r×r matrix over F_p.
std::uint32_t det_mod_p(std::vector<std::uint32_t> m, int r, std::uint32_t p) {
  std::uint64_t det = 1;
  for (int c = 0; c < r; ++c) {
    int piv = -1;
    for (int i = c; i < r; ++i)
      if (m[i * r + c] % p) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < r; ++j) std::swap(m[piv * r + j], m[c * r + j]);
      det = (p - det) % p;
    }
    det = det * m[c * r + c] % p;
    const std::uint32_t inv = mod_inv(m[c * r + c], p);
    for (int i = c + 1; i < r; ++i) {
      const std::uint64_t f = std::uint64_t(m[i * r + c]) * inv % p;
      if (!f) continue;
      for (int j = c; j < r; ++j)
        m[i * r + j] = static_cast<std::uint32_t>(
            (m[i * r + j] + p - f * m[c * r + j] % p) % p);
    }
  }
  return static_cast<std::uint32_t>(det);
}

// Polynomial remainder over F_p; polynomials are low-to-high coefficient lists.
std::vector<std::uint32_t> poly_mod(std::vector<std::uint32_t> a,
                                    const std::vector<std::uint32_t>& m,
                                    std::uint32_t p) {
  const int dm = static_cast<int>(m.size()) - 1;
  const std::uint32_t lead_inv = mod_inv(m.back(), p);
  for (int k = static_cast<int>(a.size()) - 1; k >= dm; --k) {
    const std::uint64_t c = std::uint64_t(a[k]) * lead_inv % p;
    if (!c) continue;
    for (int j = 0; j <= dm; ++j)
      a[k - dm + j] =
          static_cast<std::uint32_t>((a[k - dm + j] + p - c * m[j] % p) % p);
  }
  a.resize(std::max(dm, 0));
  return a;
}

bool poly_irreducible_over_prime(const std::vector<std::uint32_t>& f,
                                 std::uint32_t p) {
  const int deg = static_cast<int>(f.size()) - 1;
  for (int d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<std::uint32_t> g(d + 1);
      std::uint64_t t = idx;
      for (int i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      g[d] = 1;
      const auto rem = poly_mod(f, g, p);
      if (std::all_of(rem.begin(), rem.end(), [](auto v) { return v == 0; }))
        return false;
    }
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- PrimeElem

PrimeElem::PrimeElem(std::uint32_t value, std::uint32_t p)
    : value_(value % p), p_(p) {}

PrimeElem PrimeElem::operator+(PrimeElem o) const {
  return {(value_ + o.value_) % p_, p_};
}
PrimeElem PrimeElem::operator-(PrimeElem o) const {
  return {(value_ + p_ - o.value_) % p_, p_};
}
PrimeElem PrimeElem::operator*(PrimeElem o) const {
  return {static_cast<std::uint32_t>(std::uint64_t(value_) * o.value_ % p_), p_};
}
PrimeElem PrimeElem::operator-() const { return {(p_ - value_) % p_, p_}; }

// --------------------------------------------------------------- FieldTower

std::pair<std::uint32_t, std::uint32_t> split_prime_power(std::uint64_t q) {
  if (q < 2) throw PreconditionError("field order must be a prime power >= 2");
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (!p) p = q;
  std::uint32_t r = 0;
  std::uint64_t t = q;
  while (t % p == 0) {
    t /= p;
    ++r;
  }
  if (t != 1 || !is_prime(p) || p > (1u << 16))
    throw PreconditionError("not a supported prime power: " + std::to_string(q));
  return {static_cast<std::uint32_t>(p), r};
}

TowerPtr FieldTower::build(std::uint64_t base_order, int chain_length) {
  if (chain_length < 0) throw PreconditionError("chain length must be >= 0");
  const auto [p, r0] = split_prime_power(base_order);
  if (base_order > kMaxEnumerable)
    throw PreconditionError("base field order above 2^20 is not supported");
  std::shared_ptr<FieldTower> t(new FieldTower());
  t->p_ = p;
  t->dims_ = {r0};
  if (r0 > 1) {
    // Exhaustive search over monic polynomials of degree r0 in index order.
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < r0; ++i) count *= p;
    bool found = false;
    for (std::uint64_t idx = 0; idx < count && !found; ++idx) {
      std::vector<std::uint32_t> f(r0 + 1);
      std::uint64_t v = idx;
      for (std::uint32_t i = 0; i < r0; ++i) {
        f[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      f[r0] = 1;
      if (f[0] != 0 && poly_irreducible_over_prime(f, p)) {
        t->base_modulus_ = f;
        found = true;
      }
    }
    if (!found) throw InternalError("no irreducible base polynomial found");
  }
  t->m0_.emplace_back();
  t->m1_.emplace_back();
  for (int level = 1; level <= chain_length; ++level) t->add_chain_level(level);
  t->traces_ = t->basis_traces(chain_length);
  t->spec_.prime = p;
  t->spec_.base_degree = r0;
  t->spec_.base_modulus = t->base_modulus_;
  for (int level = 1; level <= chain_length; ++level)
    t->spec_.level_moduli.emplace_back(t->m0_[level], t->m1_[level]);
  return t;
}

void FieldTower::add_chain_level(int level) {
  const std::uint32_t h = dims_[level - 1];
  // Candidates are enumerated exhaustively, reading the index digits into the
  // coordinates from the top down so that elements of the previous subfield
  // (which can never work) are visited last.
  std::vector<std::uint32_t> c(h), m1(h, 0), m0(h);
  for (long k = 1; k < kMaxModulusCandidates; ++k) {
    std::fill(c.begin(), c.end(), 0u);
    long v = k;
    for (std::uint32_t j = 0; j < h && v; ++j) {
      c[h - 1 - j] = static_cast<std::uint32_t>(v % p_);
      v /= p_;
    }
    if (v) break;
    if (p_ == 2) {
      // x^2 + x + c is irreducible iff Tr(c) = 1.
      std::fill(m1.begin(), m1.end(), 0u);
      m1[0] = 1;
      m0 = c;
    } else {
      // x^2 - c is irreducible iff c is a non-square.
      for (std::uint32_t j = 0; j < h; ++j) m0[j] = (p_ - c[j]) % p_;
    }
    if (chain_modulus_irreducible(level, m0, m1)) {
      dims_.push_back(2 * h);
      m0_.push_back(m0);
      m1_.push_back(m1);
      return;
    }
  }
  throw InternalError("no irreducible quadratic found at level " +
                      std::to_string(level));
}

bool FieldTower::chain_modulus_irreducible(
    int level, std::span<const std::uint32_t> m0,
    std::span<const std::uint32_t> m1) const {
  const std::uint32_t h = dims_[level - 1];
  if (m0.size() != h || m1.size() != h) return false;
  const int below = level - 1;
  if (p_ == 2) {
    if (std::all_of(m1.begin(), m1.end(), [](auto x) { return x == 0; }))
      return false;  // every element is a square in characteristic 2
    // x = m1 y turns x^2 + m1 x + m0 into y^2 + y + m0/m1^2.
    std::vector<std::uint32_t> sq(h), inv(h), t(h);
    mul_level(below, m1.data(), m1.data(), sq.data());
    // Invert m1^2 inside level `below` through the multiplication matrix.
    std::vector<std::uint32_t> mat(h * h), e(h, 0), col(h);
    for (std::uint32_t j = 0; j < h; ++j) {
      std::fill(e.begin(), e.end(), 0u);
      e[j] = 1;
      mul_level(below, sq.data(), e.data(), col.data());
      for (std::uint32_t i = 0; i < h; ++i) mat[i * h + j] = col[i];
    }
    // Solve mat * inv = 1 over F_2.
    std::vector<std::uint32_t> aug(h * (h + 1));
    for (std::uint32_t i = 0; i < h; ++i) {
      for (std::uint32_t j = 0; j < h; ++j) aug[i * (h + 1) + j] = mat[i * h + j];
      aug[i * (h + 1) + h] = (i == 0);
    }
    for (std::uint32_t c = 0; c < h; ++c) {
      std::uint32_t piv = c;
      while (piv < h && !aug[piv * (h + 1) + c]) ++piv;
      if (piv == h) return false;
      for (std::uint32_t j = 0; j <= h; ++j)
        std::swap(aug[piv * (h + 1) + j], aug[c * (h + 1) + j]);
      for (std::uint32_t i = 0; i < h; ++i)
        if (i != c && aug[i * (h + 1) + c])
          for (std::uint32_t j = 0; j <= h; ++j)
            aug[i * (h + 1) + j] ^= aug[c * (h + 1) + j];
    }
    for (std::uint32_t i = 0; i < h; ++i) inv[i] = aug[i * (h + 1) + h];
    mul_level(below, m0.data(), inv.data(), t.data());
    return level_trace(below, t) == 1;
  }
  // Odd p: irreducible iff the discriminant m1^2 - 4 m0 is a non-square,
  // i.e. its norm down to F_p is a quadratic non-residue.
  std::vector<std::uint32_t> disc(h), sq(h);
  mul_level(below, m1.data(), m1.data(), sq.data());
  for (std::uint32_t j = 0; j < h; ++j)
    disc[j] = static_cast<std::uint32_t>(
        (sq[j] + std::uint64_t(p_ - (4 * std::uint64_t(m0[j])) % p_)) % p_);
  const std::uint32_t n = level_norm(below, disc);
  if (n == 0) return false;
  return mod_pow(n, (p_ - 1) / 2, p_) == p_ - 1;
}

TowerPtr FieldTower::from_spec(const TowerSpec& spec) {
  if (!is_prime(spec.prime) || spec.prime > (1u << 16))
    throw VerificationError("tower record: prime is not a supported prime");
  if (spec.base_degree < 1)
    throw VerificationError("tower record: base degree must be >= 1");
  if (spec.base_degree * std::log2(double(spec.prime)) > 20.0 + 1e-9)
    throw VerificationError("tower record: base field order above 2^20");
  std::shared_ptr<FieldTower> t(new FieldTower());
  t->p_ = spec.prime;
  t->dims_ = {spec.base_degree};
  if (spec.base_degree > 1) {
    if (spec.base_modulus.size() != spec.base_degree + 1 ||
        spec.base_modulus.back() != 1)
      throw VerificationError("tower record: malformed base modulus");
    for (auto c : spec.base_modulus)
      if (c >= spec.prime)
        throw VerificationError("tower record: coefficient out of range");
    if (!poly_irreducible_over_prime(spec.base_modulus, spec.prime))
      throw VerificationError("tower record: base modulus is reducible");
    t->base_modulus_ = spec.base_modulus;
  } else if (!spec.base_modulus.empty()) {
    throw VerificationError("tower record: unexpected base modulus");
  }
  t->m0_.emplace_back();
  t->m1_.emplace_back();
  int level = 1;
  for (const auto& [m0, m1] : spec.level_moduli) {
    for (auto c : m0)
      if (c >= spec.prime)
        throw VerificationError("tower record: coefficient out of range");
    for (auto c : m1)
      if (c >= spec.prime)
        throw VerificationError("tower record: coefficient out of range");
    if (!t->chain_modulus_irreducible(level, m0, m1))
      throw VerificationError("tower record: level " + std::to_string(level) +
                              " modulus is not irreducible");
    t->dims_.push_back(2 * t->dims_.back());
    t->m0_.push_back(m0);
    t->m1_.push_back(m1);
    ++level;
  }
  t->traces_ = t->basis_traces(t->chain_length());
  t->spec_ = spec;
  return t;
}

int FieldTower::level_dim(int level) const {
  if (level < 0 || level > chain_length())
    throw PreconditionError("tower level out of range");
  return static_cast<int>(dims_[level]);
}

std::optional<std::uint64_t> FieldTower::order() const {
  std::uint64_t q = 1;
  for (int i = 0; i < degree(); ++i) {
    if (q > std::numeric_limits<std::uint64_t>::max() / p_) return std::nullopt;
    q *= p_;
  }
  return q;
}

std::uint64_t FieldTower::checked_order() const {
  auto q = order();
  if (!q) throw GuardExceeded("field order does not fit in 64 bits");
  return *q;
}

double FieldTower::log2_order() const { return degree() * std::log2(double(p_)); }

bool FieldTower::same_field(const FieldTower& other) const {
  return this == &other || spec_ == other.spec_;
}

void FieldTower::mul_base(const std::uint32_t* a, const std::uint32_t* b,
                          std::uint32_t* out) const {
  const std::uint32_t r0 = dims_[0];
  if (r0 == 1) {
    out[0] = static_cast<std::uint32_t>(std::uint64_t(a[0]) * b[0] % p_);
    return;
  }
  std::array<std::uint64_t, 64> prod{};
  for (std::uint32_t i = 0; i < r0; ++i) {
    if (!a[i]) continue;
    for (std::uint32_t j = 0; j < r0; ++j)
      prod[i + j] = (prod[i + j] + std::uint64_t(a[i]) * b[j]) % p_;
  }
  for (int k = 2 * static_cast<int>(r0) - 2; k >= static_cast<int>(r0); --k) {
    const std::uint64_t c = prod[k];
    if (!c) continue;
    for (std::uint32_t j = 0; j < r0; ++j)
      prod[k - r0 + j] = (prod[k - r0 + j] + p_ - c * base_modulus_[j] % p_) % p_;
  }
  for (std::uint32_t i = 0; i < r0; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
}

void FieldTower::mul_level(int level, const std::uint32_t* a,
                           const std::uint32_t* b, std::uint32_t* out) const {
  thread_local std::vector<std::uint32_t> scratch;
  const std::size_t need = 8 * std::size_t(dims_[level]) + 8;
  if (scratch.size() < need) scratch.resize(need);
  mul_level(level, a, b, out, scratch.data());
}

void FieldTower::mul_level(int level, const std::uint32_t* a, const std::uint32_t* b,
                           std::uint32_t* out, std::uint32_t* scratch) const {
  if (level == 0) {
    mul_base(a, b, out);
    return;
  }
  const std::uint32_t h = dims_[level - 1];
  const std::uint32_t* a0 = a;
  const std::uint32_t* a1 = a + h;
  const std::uint32_t* b0 = b;
  const std::uint32_t* b1 = b + h;
  auto zero = [h](const std::uint32_t* x) {
    for (std::uint32_t i = 0; i < h; ++i)
      if (x[i]) return false;
    return true;
  };
  std::uint32_t* p0 = scratch;
  std::uint32_t* p1 = p0 + h;
  std::uint32_t* p2 = p1 + h;
  std::uint32_t* sa = p2 + h;
  std::uint32_t* sb = sa + h;
  std::uint32_t* t = sb + h;
  std::uint32_t* next = t + h;
  const bool a1z = zero(a1), b1z = zero(b1);
  if (a1z || b1z) {
    // One operand lies in the previous level: two half-size products.
    const std::uint32_t* s = a1z ? a0 : b0;
    const std::uint32_t* x0 = a1z ? b0 : a0;
    const std::uint32_t* x1 = a1z ? b1 : a1;
    mul_level(level - 1, s, x0, p0, next);
    if (a1z && b1z)
      std::fill(p1, p1 + h, 0u);
    else
      mul_level(level - 1, s, x1, p1, next);
    std::copy(p0, p0 + h, out);
    std::copy(p1, p1 + h, out + h);
    return;
  }
  // Karatsuba over the previous level, then reduce with x^2 = -m1 x - m0.
  mul_level(level - 1, a0, b0, p0, next);
  mul_level(level - 1, a1, b1, p2, next);
  for (std::uint32_t i = 0; i < h; ++i) {
    sa[i] = (a0[i] + a1[i]) % p_;
    sb[i] = (b0[i] + b1[i]) % p_;
  }
  mul_level(level - 1, sa, sb, p1, next);
  for (std::uint32_t i = 0; i < h; ++i)
    p1[i] = static_cast<std::uint32_t>((p1[i] + 2 * std::uint64_t(p_) - p0[i] - p2[i]) % p_);
  const auto& m0 = m0_[level];
  const auto& m1 = m1_[level];
  mul_level(level - 1, m0.data(), p2, t, next);
  for (std::uint32_t i = 0; i < h; ++i) out[i] = (p0[i] + p_ - t[i]) % p_;
  bool m1_one = m1[0] == 1;
  bool m1_zero = m1[0] == 0;
  for (std::uint32_t i = 1; i < h; ++i) {
    m1_one = m1_one && m1[i] == 0;
    m1_zero = m1_zero && m1[i] == 0;
  }
  if (m1_zero) {
    std::copy(p1, p1 + h, out + h);
  } else if (m1_one) {
    for (std::uint32_t i = 0; i < h; ++i) out[h + i] = (p1[i] + p_ - p2[i]) % p_;
  } else {
    mul_level(level - 1, m1.data(), p2, t, next);
    for (std::uint32_t i = 0; i < h; ++i) out[h + i] = (p1[i] + p_ - t[i]) % p_;
  }
}

void FieldTower::inv_level(int level, const std::uint32_t* a, std::uint32_t* out) const {
  if (level == 0) {
    // Solve T_a y = 1 over F_p.
    const int r = static_cast<int>(dims_[0]);
    if (r == 1) {
      out[0] = mod_inv(a[0], p_);
      return;
    }
    std::vector<std::uint32_t> aug(std::size_t(r) * (r + 1), 0), e(r), col(r);
    for (int j = 0; j < r; ++j) {
      std::fill(e.begin(), e.end(), 0u);
      e[j] = 1;
      mul_base(a, e.data(), col.data());
      for (int i = 0; i < r; ++i) aug[i * (r + 1) + j] = col[i];
    }
    aug[r] = 1;
    for (int c = 0; c < r; ++c) {
      int piv = c;
      while (piv < r && !aug[piv * (r + 1) + c]) ++piv;
      if (piv == r) throw PreconditionError("inverse of zero");
      for (int j = 0; j <= r; ++j) std::swap(aug[piv * (r + 1) + j], aug[c * (r + 1) + j]);
      const std::uint64_t iv = mod_inv(aug[c * (r + 1) + c], p_);
      for (int j = 0; j <= r; ++j)
        aug[c * (r + 1) + j] = static_cast<std::uint32_t>(aug[c * (r + 1) + j] * iv % p_);
      for (int i = 0; i < r; ++i) {
        if (i == c || !aug[i * (r + 1) + c]) continue;
        const std::uint64_t f = aug[i * (r + 1) + c];
        for (int j = 0; j <= r; ++j)
          aug[i * (r + 1) + j] = static_cast<std::uint32_t>(
              (aug[i * (r + 1) + j] + p_ - f * aug[c * (r + 1) + j] % p_) % p_);
      }
    }
    for (int i = 0; i < r; ++i) out[i] = aug[i * (r + 1) + r];
    return;
  }
  // (c0 + c1 α)^{-1} = (c0 - m1 c1 - c1 α) / N with N = c0^2 - m1 c0 c1 + m0 c1^2.
  const std::uint32_t h = dims_[level - 1];
  const std::uint32_t* c0 = a;
  const std::uint32_t* c1 = a + h;
  std::vector<std::uint32_t> s(h), t(h), u(h), nrm(h), ninv(h);
  mul_level(level - 1, c0, c0, s.data());
  mul_level(level - 1, c0, c1, t.data());
  mul_level(level - 1, m1_[level].data(), t.data(), u.data());
  mul_level(level - 1, c1, c1, t.data());
  mul_level(level - 1, m0_[level].data(), t.data(), nrm.data());
  for (std::uint32_t i = 0; i < h; ++i)
    nrm[i] = static_cast<std::uint32_t>((std::uint64_t(s[i]) + p_ - u[i] + nrm[i]) % p_);
  inv_level(level - 1, nrm.data(), ninv.data());
  mul_level(level - 1, m1_[level].data(), c1, u.data());
  for (std::uint32_t i = 0; i < h; ++i) s[i] = (c0[i] + p_ - u[i]) % p_;
  mul_level(level - 1, s.data(), ninv.data(), t.data());
  mul_level(level - 1, c1, ninv.data(), u.data());
  std::copy(t.begin(), t.end(), out);
  for (std::uint32_t i = 0; i < h; ++i) out[h + i] = (p_ - u[i]) % p_;
}

void FieldTower::inv(std::span<const std::uint32_t> a, std::span<std::uint32_t> out) const {
  if (std::all_of(a.begin(), a.end(), [](auto x) { return x == 0; }))
    throw PreconditionError("inverse of zero");
  Coords t(a.size());
  inv_level(chain_length(), a.data(), t.data());
  std::copy(t.begin(), t.end(), out.begin());
}

std::vector<std::uint32_t> FieldTower::basis_traces(int level) const {
  if (level == 0) {
    const std::uint32_t r0 = dims_[0];
    std::vector<std::uint32_t> tr(r0, 0), e(r0), f(r0), out(r0);
    for (std::uint32_t j = 0; j < r0; ++j) {
      std::fill(e.begin(), e.end(), 0u);
      e[j] = 1;
      std::uint64_t s = 0;
      for (std::uint32_t k = 0; k < r0; ++k) {
        std::fill(f.begin(), f.end(), 0u);
        f[k] = 1;
        mul_base(e.data(), f.data(), out.data());
        s += out[k];
      }
      tr[j] = static_cast<std::uint32_t>(s % p_);
    }
    return tr;
  }
  // Transitivity of the trace: for x = c0 + c1 α with α^2 = -m1 α - m0 the
  // matrix of x over the previous level has trace 2 c0 - m1 c1.
  const auto below = basis_traces(level - 1);
  const std::uint32_t h = dims_[level - 1];
  std::vector<std::uint32_t> tr(2 * h);
  std::vector<std::uint32_t> e(h), t(h);
  for (std::uint32_t j = 0; j < h; ++j) {
    tr[j] = static_cast<std::uint32_t>(2 * std::uint64_t(below[j]) % p_);
    std::fill(e.begin(), e.end(), 0u);
    e[j] = 1;
    mul_level(level - 1, m1_[level].data(), e.data(), t.data());
    std::uint64_t s = 0;
    for (std::uint32_t i = 0; i < h; ++i) s += std::uint64_t(t[i]) * below[i];
    tr[h + j] = static_cast<std::uint32_t>((p_ - s % p_) % p_);
  }
  return tr;
}

std::uint32_t FieldTower::level_trace(int level,
                                      std::span<const std::uint32_t> a) const {
  const auto tr = basis_traces(level);
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) s += std::uint64_t(tr[i]) * a[i];
  return static_cast<std::uint32_t>(s % p_);
}

std::uint32_t FieldTower::level_norm(int level,
                                     std::span<const std::uint32_t> a) const {
  if (level == 0) {
    const std::uint32_t r0 = dims_[0];
    std::vector<std::uint32_t> mat(r0 * r0), e(r0), col(r0);
    for (std::uint32_t j = 0; j < r0; ++j) {
      std::fill(e.begin(), e.end(), 0u);
      e[j] = 1;
      mul_base(a.data(), e.data(), col.data());
      for (std::uint32_t i = 0; i < r0; ++i) mat[i * r0 + j] = col[i];
    }
    return det_mod_p(mat, static_cast<int>(r0), p_);
  }
  // N(c0 + c1 α) = c0^2 - m1 c0 c1 + m0 c1^2, taken down one level at a time.
  const std::uint32_t h = dims_[level - 1];
  const std::uint32_t* c0 = a.data();
  const std::uint32_t* c1 = a.data() + h;
  std::vector<std::uint32_t> s(h), t(h), u(h), n(h);
  mul_level(level - 1, c0, c0, s.data());
  mul_level(level - 1, c0, c1, t.data());
  mul_level(level - 1, m1_[level].data(), t.data(), u.data());
  mul_level(level - 1, c1, c1, t.data());
  mul_level(level - 1, m0_[level].data(), t.data(), n.data());
  for (std::uint32_t i = 0; i < h; ++i)
    n[i] = static_cast<std::uint32_t>((std::uint64_t(s[i]) + p_ - u[i] + n[i]) % p_);
  return level_norm(level - 1, n);
}

void FieldTower::add(std::span<const std::uint32_t> a,
                     std::span<const std::uint32_t> b,
                     std::span<std::uint32_t> out) const {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (a[i] + b[i]) % p_;
}

void FieldTower::sub(std::span<const std::uint32_t> a,
                     std::span<const std::uint32_t> b,
                     std::span<std::uint32_t> out) const {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (a[i] + p_ - b[i]) % p_;
}

void FieldTower::mul(std::span<const std::uint32_t> a,
                     std::span<const std::uint32_t> b,
                     std::span<std::uint32_t> out) const {
  Coords t(out.size());
  mul_level(chain_length(), a.data(), b.data(), t.data());
  std::copy(t.begin(), t.end(), out.begin());
}

std::uint32_t FieldTower::trace(std::span<const std::uint32_t> a) const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < traces_.size(); ++i) s += std::uint64_t(traces_[i]) * a[i];
  return static_cast<std::uint32_t>(s % p_);
}

std::vector<std::uint32_t> FieldTower::multiplication_matrix(
    std::span<const std::uint32_t> a) const {
  const int r = degree();
  std::vector<std::uint32_t> mat(std::size_t(r) * r);
  Coords e(r), col(r);
  for (int j = 0; j < r; ++j) {
    std::fill(e.begin(), e.end(), 0u);
    e[j] = 1;
    mul(a, e, col);
    for (int i = 0; i < r; ++i) mat[std::size_t(i) * r + j] = col[i];
  }
  return mat;
}

FieldElem FieldTower::zero() const {
  return FieldElem(shared_from_this(), Coords(degree(), 0u));
}

FieldElem FieldTower::one() const {
  Coords c(degree(), 0u);
  c[0] = 1;
  return FieldElem(shared_from_this(), std::move(c));
}

FieldElem FieldTower::alpha(int i) const {
  if (i == 0) return one();
  if (i < 0 || i > chain_length())
    throw PreconditionError("alpha index " + std::to_string(i) +
                            " outside tower of chain length " +
                            std::to_string(chain_length()));
  Coords c(degree(), 0u);
  c[dims_[i - 1]] = 1;
  return FieldElem(shared_from_this(), std::move(c));
}

FieldElem FieldTower::from_uint(std::uint64_t v) const {
  Coords c(degree(), 0u);
  c[0] = static_cast<std::uint32_t>(v % p_);
  return FieldElem(shared_from_this(), std::move(c));
}

FieldElem FieldTower::from_coords(std::span<const std::uint32_t> c) const {
  if (c.size() != static_cast<std::size_t>(degree()))
    throw MismatchError("coordinate vector has wrong length");
  Coords cc(c.begin(), c.end());
  for (auto& x : cc)
    if (x >= p_) throw PreconditionError("coordinate out of range");
  return FieldElem(shared_from_this(), std::move(cc));
}

FieldElem FieldTower::from_index(std::uint64_t index) const {
  Coords c(degree(), 0u);
  for (int i = 0; i < degree() && index; ++i) {
    c[i] = static_cast<std::uint32_t>(index % p_);
    index /= p_;
  }
  if (index) throw PreconditionError("element index out of range");
  return FieldElem(shared_from_this(), std::move(c));
}

std::vector<FieldElem> FieldTower::elements() const {
  const auto q = order();
  if (!q || *q > kMaxEnumerable)
    throw GuardExceeded("refusing to enumerate a field with more than 2^20 elements");
  std::vector<FieldElem> out;
  out.reserve(*q);
  for (std::uint64_t i = 0; i < *q; ++i) out.push_back(from_index(i));
  return out;
}

FieldElem FieldTower::random(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::uint32_t> dist(0, p_ - 1);
  Coords c(degree());
  for (auto& x : c) x = dist(rng);
  return FieldElem(shared_from_this(), std::move(c));
}

// ---------------------------------------------------------------- FieldElem

FieldElem::FieldElem(TowerPtr tower, Coords coords)
    : tower_(std::move(tower)), coords_(std::move(coords)) {}

bool FieldElem::is_zero() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c == 0; });
}

bool FieldElem::is_one() const noexcept {
  if (coords_.empty() || coords_[0] != 1) return false;
  return std::all_of(coords_.begin() + 1, coords_.end(), [](auto c) { return c == 0; });
}

const FieldTower& FieldElem::checked_peer(const FieldElem& o) const {
  if (!tower_ || !o.tower_) throw MismatchError("operation on an unset field element");
  if (tower_ != o.tower_ && !tower_->same_field(*o.tower_))
    throw MismatchError("field elements belong to different towers");
  return *tower_;
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
  FieldElem r = *this;
  r += o;
  return r;
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
  FieldElem r = *this;
  r -= o;
  return r;
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
  FieldElem r = *this;
  r *= o;
  return r;
}

FieldElem& FieldElem::operator+=(const FieldElem& o) {
  checked_peer(o).add(coords_, o.coords_, coords_);
  return *this;
}

FieldElem& FieldElem::operator-=(const FieldElem& o) {
  checked_peer(o).sub(coords_, o.coords_, coords_);
  return *this;
}

FieldElem& FieldElem::operator*=(const FieldElem& o) {
  checked_peer(o).mul(coords_, o.coords_, coords_);
  return *this;
}

FieldElem FieldElem::operator-() const {
  if (!tower_) throw MismatchError("operation on an unset field element");
  FieldElem r = *this;
  const auto p = tower_->prime();
  for (auto& c : r.coords_) c = (p - c) % p;
  return r;
}

FieldElem FieldElem::operator/(const FieldElem& o) const {
  checked_peer(o);
  return *this * o.inv();
}

FieldElem FieldElem::inv() const {
  if (!tower_) throw MismatchError("operation on an unset field element");
  if (is_zero()) throw PreconditionError("inverse of zero");
  Coords out(coords_.size());
  tower_->inv(coords_, out);
  return FieldElem(tower_, std::move(out));
}

FieldElem FieldElem::pow(std::uint64_t e) const {
  if (!tower_) throw MismatchError("operation on an unset field element");
  FieldElem result = tower_->one();
  FieldElem b = *this;
  while (e) {
    if (e & 1) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

PrimeElem FieldElem::trace() const {
  if (!tower_) throw MismatchError("operation on an unset field element");
  return PrimeElem(tower_->trace(coords_), tower_->prime());
}

int FieldElem::subfield_level() const {
  if (!tower_) throw MismatchError("operation on an unset field element");
  int top = -1;
  for (int i = static_cast<int>(coords_.size()) - 1; i >= 0; --i)
    if (coords_[i]) {
      top = i;
      break;
    }
  for (int level = 0; level <= tower_->chain_length(); ++level)
    if (top < tower_->level_dim(level)) return level;
  throw InternalError("coordinate beyond the top level");
}

std::uint64_t FieldElem::index() const {
  if (!tower_) throw MismatchError("operation on an unset field element");
  tower_->checked_order();
  std::uint64_t idx = 0;
  for (int i = static_cast<int>(coords_.size()) - 1; i >= 0; --i)
    idx = idx * tower_->prime() + coords_[i];
  return idx;
}

bool FieldElem::operator==(const FieldElem& o) const {
  if (tower_ != o.tower_ && (!tower_ || !o.tower_ || !tower_->same_field(*o.tower_)))
    return false;
  return std::equal(coords_.begin(), coords_.end(), o.coords_.begin(), o.coords_.end());
}

std::ostream& operator<<(std::ostream& os, const FieldElem& x) {
  return os << (x.valid() ? to_coord_string(x) : std::string("<unset>"));
}

std::string to_coord_string(const FieldElem& x) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  if (x.tower()->prime() > 36)
    throw PreconditionError("coordinate strings require p <= 36");
  std::string s;
  s.reserve(x.coords().size());
  for (auto c : x.coords()) s.push_back(kDigits[c]);
  return s;
}

FieldElem from_coord_string(const TowerPtr& tower, const std::string& s) {
  if (s.size() != static_cast<std::size_t>(tower->degree()))
    throw VerificationError("coordinate string '" + s + "' has wrong length");
  Coords c;
  for (char ch : s) {
    std::uint32_t v;
    if (ch >= '0' && ch <= '9')
      v = ch - '0';
    else if (ch >= 'a' && ch <= 'z')
      v = 10 + (ch - 'a');
    else
      throw VerificationError("bad digit in coordinate string '" + s + "'");
    if (v >= tower->prime())
      throw VerificationError("digit out of range in coordinate string '" + s + "'");
    c.push_back(v);
  }
  return FieldElem(tower, std::move(c));
}

}  // namespace qpir
