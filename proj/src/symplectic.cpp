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

#include "qpir/symplectic.hpp"

#include <algorithm>

#include "qpir/error.hpp"

namespace qpir {

namespace {

std::uint32_t pinv(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

// Null space of a row-major matrix over F_p.
std::vector<std::vector<std::uint32_t>> kernel_mod_p(std::vector<std::vector<std::uint32_t>> m,
                                                     int cols, std::uint32_t p) {
  const int rows = static_cast<int>(m.size());
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int k = r;
    while (k < rows && m[k][c] == 0) ++k;
    if (k == rows) continue;
    std::swap(m[k], m[r]);
    const std::uint64_t iv = pinv(m[r][c], p);
    for (auto& x : m[r]) x = static_cast<std::uint32_t>(x * iv % p);
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const std::uint64_t f = m[i][c];
      for (int j = 0; j < cols; ++j)
        m[i][j] = static_cast<std::uint32_t>((m[i][j] + p - f * m[r][j] % p) % p);
    }
    piv.push_back(c);
    ++r;
  }
  std::vector<bool> is_piv(cols, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<std::vector<std::uint32_t>> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<std::uint32_t> x(cols, 0);
    x[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = (p - m[i][f]) % p;
    basis.push_back(std::move(x));
  }
  return basis;
}

// Row functional x ↦ Σ (b_u c_x - a_u d_x) as a 2n-entry row.
std::vector<FieldElem> form_row(const SympVector& u) {
  const int n = u.n();
  std::vector<FieldElem> row(2 * n);
  for (int i = 0; i < n; ++i) {
    row[i] = u.b(i);
    row[n + i] = -u.a(i);
  }
  return row;
}

FqMatrix rows_to_matrix(const TowerPtr& tower, int cols,
                        const std::vector<std::vector<FieldElem>>& rows) {
  FqMatrix m(tower, static_cast<int>(rows.size()), cols);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

FqMatrix vectors_to_columns(const TowerPtr& tower, int n, const std::vector<SympVector>& vs) {
  FqMatrix m(tower, 2 * n, static_cast<int>(vs.size()));
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < 2 * n; ++i) m(i, j) = vs[j][i];
  return m;
}

}  // namespace

// --------------------------------------------------------------- SympVector

SympVector::SympVector(TowerPtr tower, int n) : tower_(std::move(tower)) {
  if (n < 0) throw PreconditionError("negative vector length");
  c_.assign(2 * n, tower_->zero());
}

SympVector::SympVector(TowerPtr tower, std::vector<FieldElem> coords)
    : tower_(std::move(tower)), c_(std::move(coords)) {
  if (c_.size() % 2) throw PreconditionError("symplectic vectors have even length");
  for (const auto& x : c_)
    if (!x.valid() || !x.tower()->same_field(*tower_))
      throw MismatchError("coordinate from a different tower");
}

SympVector SympVector::from_ab(const std::vector<FieldElem>& a, const std::vector<FieldElem>& b) {
  if (a.size() != b.size() || a.empty()) throw MismatchError("a- and b-parts differ in length");
  std::vector<FieldElem> c(a);
  c.insert(c.end(), b.begin(), b.end());
  return SympVector(a.front().tower(), std::move(c));
}

SympVector SympVector::unit(TowerPtr tower, int n, int index) {
  SympVector v(tower, n);
  v.c_.at(index) = tower->one();
  return v;
}

SympVector SympVector::random(TowerPtr tower, int n, std::mt19937_64& rng) {
  SympVector v(tower, n);
  for (auto& x : v.c_) x = tower->random(rng);
  return v;
}

std::vector<FieldElem> SympVector::a_part() const { return {c_.begin(), c_.begin() + n()}; }
std::vector<FieldElem> SympVector::b_part() const { return {c_.begin() + n(), c_.end()}; }

void SympVector::check_peer(const SympVector& o) const {
  if (c_.size() != o.c_.size()) throw MismatchError("symplectic vectors differ in length");
}

SympVector SympVector::operator+(const SympVector& o) const {
  SympVector r = *this;
  r += o;
  return r;
}

SympVector& SympVector::operator+=(const SympVector& o) {
  check_peer(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SympVector SympVector::operator-(const SympVector& o) const {
  check_peer(o);
  SympVector r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

SympVector SympVector::operator-() const {
  SympVector r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

bool SympVector::operator==(const SympVector& o) const { return c_ == o.c_; }

bool SympVector::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const FieldElem& x) { return x.is_zero(); });
}

SympVector operator*(const FieldElem& s, const SympVector& v) {
  std::vector<FieldElem> c = v.coords();
  for (auto& x : c) x = s * x;
  return SympVector(v.tower(), std::move(c));
}

// -------------------------------------------------------------------- forms

PrimeElem trace_dot(const std::vector<FieldElem>& a, const std::vector<FieldElem>& b) {
  if (a.size() != b.size() || a.empty()) throw MismatchError("trace_dot length mismatch");
  FieldElem s = a.front().tower()->zero();
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s.trace();
}

FieldElem symplectic_form_fq(const SympVector& x, const SympVector& y) {
  if (x.size() != y.size()) throw MismatchError("symplectic form length mismatch");
  FieldElem s = x.tower()->zero();
  for (int i = 0; i < x.n(); ++i) s += x.b(i) * y.a(i) - x.a(i) * y.b(i);
  return s;
}

PrimeElem symplectic_form(const SympVector& x, const SympVector& y) {
  return symplectic_form_fq(x, y).trace();
}

FqMatrix symplectic_j(const TowerPtr& tower, int n) {
  FqMatrix j(tower, 2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    j(i, n + i) = -tower->one();
    j(n + i, i) = tower->one();
  }
  return j;
}

// ----------------------------------------------------------------- Subspace

Subspace::Subspace(TowerPtr tower, int n, std::vector<SympVector> basis)
    : tower_(std::move(tower)), n_(n), basis_(std::move(basis)) {
  for (const auto& v : basis_)
    if (v.n() != n_) throw MismatchError("basis vector has wrong length");
  if (!basis_.empty() && matrix().rank() != dim())
    throw PreconditionError("subspace basis is linearly dependent");
}

Subspace Subspace::span(TowerPtr tower, int n, const std::vector<SympVector>& gens) {
  std::vector<SympVector> basis;
  int rank = 0;
  for (const auto& g : gens) {
    basis.push_back(g);
    const int r = vectors_to_columns(tower, n, basis).rank();
    if (r == rank)
      basis.pop_back();
    else
      rank = r;
  }
  return Subspace(std::move(tower), n, std::move(basis));
}

Subspace Subspace::full(TowerPtr tower, int n) {
  std::vector<SympVector> basis;
  for (int i = 0; i < 2 * n; ++i) basis.push_back(SympVector::unit(tower, n, i));
  return Subspace(std::move(tower), n, std::move(basis));
}

FqMatrix Subspace::matrix() const { return vectors_to_columns(tower_, n_, basis_); }

bool Subspace::contains(const SympVector& w) const {
  if (w.n() != n_) throw MismatchError("vector has wrong length");
  if (w.is_zero()) return true;
  if (basis_.empty()) return false;
  auto vs = basis_;
  vs.push_back(w);
  return vectors_to_columns(tower_, n_, vs).rank() == dim();
}

bool Subspace::contains(const Subspace& o) const {
  return std::all_of(o.basis_.begin(), o.basis_.end(),
                     [this](const SympVector& v) { return contains(v); });
}

bool Subspace::is_self_orthogonal() const {
  for (const auto& x : basis_)
    for (const auto& y : basis_)
      if (!symplectic_form_fq(x, y).is_zero()) return false;
  return true;
}

bool Subspace::same_span(const Subspace& o) const {
  return dim() == o.dim() && contains(o);
}

Subspace orthogonal_complement(const Subspace& v) {
  const int n = v.n();
  if (v.dim() == 0) return Subspace::full(v.tower(), n);
  std::vector<std::vector<FieldElem>> rows;
  for (const auto& b : v.basis()) rows.push_back(form_row(b));
  std::vector<SympVector> out;
  for (auto& k : rows_to_matrix(v.tower(), 2 * n, rows).kernel())
    out.emplace_back(v.tower(), std::move(k));
  return Subspace(v.tower(), n, std::move(out));
}

Subspace orthogonal_complement_trace(const Subspace& v) {
  const auto& tower = v.tower();
  const int n = v.n();
  const int r = tower->degree();
  const std::uint32_t p = tower->prime();
  // Unknown: w ∈ F_q^{2n} flattened to 2n·r coordinates over F_p. Each F_p
  // generator g = e_l · v_i of V gives the equation tr ⟨g, J w⟩ = 0.
  std::vector<std::vector<std::uint32_t>> rows;
  std::vector<FieldElem> basis_elems;
  for (int l = 0; l < r; ++l) {
    std::vector<std::uint32_t> e(r, 0);
    e[l] = 1;
    basis_elems.push_back(tower->from_coords(e));
  }
  for (const auto& vi : v.basis())
    for (const auto& lam : basis_elems) {
      const auto coef = form_row(lam * vi);
      std::vector<std::uint32_t> row(2 * n * r);
      for (int k = 0; k < 2 * n; ++k)
        for (int l = 0; l < r; ++l)
          row[k * r + l] = (coef[k] * basis_elems[l]).trace().value();
      rows.push_back(std::move(row));
    }
  std::vector<SympVector> gens;
  if (rows.empty()) return Subspace::full(tower, n);
  for (const auto& x : kernel_mod_p(rows, 2 * n * r, p)) {
    std::vector<FieldElem> c;
    for (int k = 0; k < 2 * n; ++k)
      c.push_back(tower->from_coords(std::span(x).subspan(k * r, r)));
    gens.emplace_back(tower, std::move(c));
  }
  return Subspace::span(tower, n, gens);
}

// --------------------------------------------------------------- CosetSpace

CosetSpace::CosetSpace(TowerPtr tower, int n, std::vector<SympVector> w_basis,
                       std::vector<SympVector> complement)
    : tower_(std::move(tower)), n_(n), w_(std::move(w_basis)),
      complement_(std::move(complement)) {
  if (static_cast<int>(w_.size() + complement_.size()) != 2 * n_)
    throw VerificationError("coset space vectors do not number 2n");
  auto all = w_;
  all.insert(all.end(), complement_.begin(), complement_.end());
  const auto b = vectors_to_columns(tower_, n_, all);
  try {
    change_inv_ = b.inverse();
  } catch (const PreconditionError&) {
    throw VerificationError("coset space vectors are not a basis of F_q^{2n}");
  }
}

CosetSpace CosetSpace::for_stabilizer(const Subspace& v) {
  const auto perp = orthogonal_complement(v);
  auto basis = perp.basis();
  std::vector<SympVector> comp;
  int rank = perp.dim();
  for (int i = 0; i < 2 * v.n() && rank < 2 * v.n(); ++i) {
    basis.push_back(SympVector::unit(v.tower(), v.n(), i));
    const int r = vectors_to_columns(v.tower(), v.n(), basis).rank();
    if (r > rank) {
      rank = r;
      comp.push_back(basis.back());
    } else {
      basis.pop_back();
    }
  }
  return CosetSpace(v.tower(), v.n(), perp.basis(), std::move(comp));
}

std::vector<FieldElem> CosetSpace::expand(const SympVector& w) const {
  if (w.n() != n_) throw MismatchError("vector has wrong length for this quotient");
  return change_inv_ * w.coords();
}

CosetLabel CosetSpace::reduce(const SympVector& w) const {
  const auto c = expand(w);
  return from_coefficients({c.begin() + w_.size(), c.end()});
}

CosetLabel CosetSpace::from_coefficients(const std::vector<FieldElem>& c) const {
  if (c.size() != complement_.size()) throw MismatchError("wrong number of coset coefficients");
  CosetLabel l{c, SympVector(tower_, n_)};
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) l.rep += c[i] * complement_[i];
  return l;
}

std::uint64_t CosetSpace::label_count() const {
  const double bits = tower_->log2_order() * quotient_dim();
  if (bits > 40) throw GuardExceeded("too many coset labels to enumerate");
  std::uint64_t c = 1;
  for (int i = 0; i < quotient_dim(); ++i) c *= tower_->checked_order();
  return c;
}

std::uint64_t CosetSpace::label_index(const CosetLabel& l) const {
  const std::uint64_t q = tower_->checked_order();
  std::uint64_t idx = 0;
  for (int i = quotient_dim() - 1; i >= 0; --i) idx = idx * q + l.coeffs[i].index();
  return idx;
}

CosetLabel CosetSpace::label_at(std::uint64_t index) const {
  const std::uint64_t q = tower_->checked_order();
  std::vector<FieldElem> c;
  for (int i = 0; i < quotient_dim(); ++i) {
    c.push_back(tower_->from_index(index % q));
    index /= q;
  }
  if (index) throw PreconditionError("label index out of range");
  return from_coefficients(c);
}

// ----------------------------------------------------------------- BasisSet

BasisSet::BasisSet(int N, int T, TowerPtr tower, std::vector<SympVector> v, std::string source)
    : N_(N), T_(T), tower_(std::move(tower)), v_(std::move(v)), source_(std::move(source)) {
  if (N_ < 1 || T_ < 1 || T_ > N_) throw PreconditionError("invalid (N, T) for a basis set");
  if (static_cast<int>(v_.size()) != 2 * N_)
    throw VerificationError("basis set must hold 2N vectors");
  for (const auto& x : v_)
    if (x.n() != N_) throw VerificationError("basis vector has wrong length");
  cosets_ = CosetSpace(tower_, N_, {v_.begin(), v_.begin() + 2 * T_},
                       {v_.begin() + 2 * T_, v_.end()});
}

Subspace BasisSet::stabilizer_space() const {
  return Subspace(tower_, N_, {v_.begin(), v_.begin() + 2 * (N_ - T_)});
}

Subspace BasisSet::perp_space() const {
  return Subspace(tower_, N_, {v_.begin(), v_.begin() + 2 * T_});
}

FqMatrix BasisSet::D1() const {
  return vectors_to_columns(tower_, N_, {v_.begin(), v_.begin() + 2 * T_});
}

FqMatrix BasisSet::D2() const {
  return vectors_to_columns(tower_, N_, {v_.begin() + 2 * T_, v_.end()});
}

CosetLabel coset_reduce(const SympVector& w, const BasisSet& basis) {
  return basis.cosets().reduce(w);
}

std::vector<FieldElem> coset_coefficients(const CosetLabel& label, const BasisSet& basis) {
  if (static_cast<int>(label.coeffs.size()) != 2 * (basis.N() - basis.T()))
    throw MismatchError("label does not belong to this basis set");
  return label.coeffs;
}

// ------------------------------------------------------------- conditions

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::vector<std::vector<int>> singular_server_blocks(const FqMatrix& d1, int n, int t) {
  std::vector<std::vector<int>> bad;
  std::vector<int> cols(d1.cols());
  for (int j = 0; j < d1.cols(); ++j) cols[j] = j;
  for (const auto& s : subsets(n, t)) {
    std::vector<int> rows;
    for (int x : s) rows.push_back(x);
    for (int x : s) rows.push_back(n + x);
    const auto block = d1.submatrix(rows, cols);
    if (block.rank() < std::min(block.rows(), block.cols()) || block.rows() != block.cols())
      bad.push_back(s);
  }
  return bad;
}

ConditionReport verify_conditions(const std::vector<SympVector>& vectors, int n, int t) {
  ConditionReport rep;
  rep.n = n;
  rep.t = t;
  if (t < 1 || t > n || static_cast<int>(vectors.size()) != 2 * t) {
    rep.notes.push_back("expected 2t vectors with 1 <= t <= n");
    return rep;
  }
  for (const auto& v : vectors)
    if (v.n() != n) {
      rep.notes.push_back("vector of wrong length");
      return rep;
    }
  if (2 * t < n) rep.notes.push_back("t < n/2: condition (b) ranges over more indices than vectors");
  const auto& tower = vectors.front().tower();
  const auto d1 = vectors_to_columns(tower, n, vectors);
  rep.independent = d1.rank() == 2 * t;
  const auto all = subsets(n, t);
  rep.subsets_checked = static_cast<long>(all.size());
  rep.failed_subsets = singular_server_blocks(d1, n, t);
  const int lim = std::min(2 * n - 2 * t, 2 * t);
  for (int i = 0; i < lim; ++i)
    for (int j = 0; j < 2 * t; ++j) {
      ++rep.pairs_checked;
      if (!symplectic_form_fq(vectors[i], vectors[j]).is_zero()) rep.failed_pairs.emplace_back(i, j);
    }
  if (lim == 0) rep.notes.push_back("condition (b) is vacuous for t = n");
  return rep;
}

// ------------------------------------------------------------ construction

FqMatrix tower_symplectic_matrix(int n, int t, const TowerPtr& tower,
                                 HankelVariant variant) {
  if (!(2 * t >= n && t < n && t >= 1))
    throw PreconditionError("construction requires n/2 <= t < n");
  if (tower->chain_length() < n + 2 * t - 2)
    throw PreconditionError("tower chain length " + std::to_string(tower->chain_length()) +
                            " is below n + 2t - 2 = " + std::to_string(n + 2 * t - 2));
  const bool zero_b =
      variant == HankelVariant::kRepaired && tower->prime() == 2 && 2 * t == n;
  FqMatrix a(tower, n, n), b(tower, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a(i, j) = tower->alpha(i + j);
      if (!zero_b) b(i, j) = tower->alpha(i + j + 2 * t - n);
    }
  FqMatrix ainv;
  try {
    ainv = a.inverse();
  } catch (const PreconditionError&) {
    throw InternalError("Hankel matrix A is singular; the tower is malformed");
  }
  const auto id = FqMatrix::identity(tower, n);
  const auto top_left = id + b * ainv;
  FqMatrix s(tower, 2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      s(i, j) = top_left(i, j);
      s(i, n + j) = b(i, j);
      s(n + i, j) = ainv(i, j);
      s(n + i, n + j) = id(i, j);
    }
  const auto jm = symplectic_j(tower, n);
  if (!(s.transpose() * jm * s == jm)) throw InternalError("constructed matrix is not symplectic");
  return s;
}

BasisSet build_basis_tower(int n, int t, const TowerPtr& tower, HankelVariant variant) {
  const auto s = tower_symplectic_matrix(n, t, tower, variant);
  auto col = [&](int one_based) { return SympVector(tower, s.column(one_based - 1)); };
  std::vector<SympVector> v;
  for (int i = 2 * t - n + 1; i <= n; ++i) v.push_back(col(i));
  for (int i = 1; i <= 2 * t - n; ++i) v.push_back(col(i));
  for (int i = n + 1; i <= 2 * t; ++i) v.push_back(col(i));
  for (int i = 2 * t + 1; i <= 2 * n; ++i) v.push_back(col(i));
  const auto rep = verify_conditions({v.begin(), v.begin() + 2 * t}, n, t);
  if (!rep.ok()) throw VerificationError("tower-based basis failed its conditions");
  return BasisSet(n, t, tower, std::move(v), "tower");
}

FqMatrix stacked_hankel(int k, int r, const TowerPtr& tower) {
  if (!(0 < r && r < k)) throw PreconditionError("stacked Hankel matrix needs 0 < r < k");
  if (tower->chain_length() < k - 2)
    throw PreconditionError("tower chain length is below k - 2");
  FqMatrix m(tower, k, r);
  for (int i = 0; i < k - r; ++i)
    for (int j = 0; j < r; ++j) m(i, j) = tower->alpha(i + j);
  for (int j = 0; j < r; ++j) m(k - r + j, j) = tower->one();
  return m;
}

std::vector<std::vector<int>> dependent_row_subsets(const FqMatrix& m, int r) {
  std::vector<std::vector<int>> bad;
  std::vector<int> cols(m.cols());
  for (int j = 0; j < m.cols(); ++j) cols[j] = j;
  for (const auto& s : subsets(m.rows(), r))
    if (m.submatrix(s, cols).rank() < r) bad.push_back(s);
  return bad;
}

BasisSet search_basis(int n, int t, const TowerPtr& tower, std::uint64_t seed,
                      long max_attempts) {
  if (!(2 * t >= n && t < n && t >= 1))
    throw PreconditionError("basis search requires n/2 <= t < n");
  std::mt19937_64 rng(seed);
  const int d = 2 * n - 2 * t;
  for (long attempt = 1; attempt <= max_attempts; ++attempt) {
    // Draw each vector uniformly from the solutions of its orthogonality
    // constraints: v_j ⊥ v_i for i < min(j, d).
    std::vector<SympVector> v;
    bool degenerate = false;
    for (int j = 0; j < 2 * t && !degenerate; ++j) {
      std::vector<std::vector<FieldElem>> rows;
      for (int i = 0; i < std::min(j, d); ++i) rows.push_back(form_row(v[i]));
      std::vector<std::vector<FieldElem>> ker;
      if (rows.empty()) {
        for (int i = 0; i < 2 * n; ++i) ker.push_back(SympVector::unit(tower, n, i).coords());
      } else {
        ker = rows_to_matrix(tower, 2 * n, rows).kernel();
      }
      SympVector x(tower, n);
      for (const auto& k : ker) x += tower->random(rng) * SympVector(tower, k);
      if (x.is_zero()) degenerate = true;
      v.push_back(std::move(x));
    }
    if (degenerate || !verify_conditions(v, n, t).ok()) continue;
    // Complete with u_j satisfying ⟨v_i, J u_j⟩ = δ_ij for i < d.
    std::vector<std::vector<FieldElem>> rows;
    for (int i = 0; i < d; ++i) rows.push_back(form_row(v[i]));
    const auto sys = rows_to_matrix(tower, 2 * n, rows);
    for (int j = 0; j < d; ++j) {
      std::vector<FieldElem> rhs(d, tower->zero());
      rhs[j] = tower->one();
      auto u = sys.solve(rhs);
      if (!u) throw InternalError("dual completion system is inconsistent");
      v.emplace_back(tower, std::move(*u));
    }
    return BasisSet(n, t, tower, std::move(v), "search");
  }
  throw SearchExhausted("no basis found for (n, t) = (" + std::to_string(n) + ", " +
                            std::to_string(t) + ") within the attempt budget",
                        max_attempts);
}

}  // namespace qpir
