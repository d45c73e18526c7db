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

#include "qpir/dense.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qpir/error.hpp"

namespace qpir {

namespace {

constexpr double kEigenFloor = 1e-10;

std::vector<Complex> phase_table(std::uint32_t p) {
  std::vector<Complex> t;
  for (std::uint32_t k = 0; k < phase_modulus(p); ++k) t.push_back(phase_value(p, k));
  return t;
}

}  // namespace

// ------------------------------------------------------------- DenseContext

DenseContext::DenseContext(TowerPtr tower, int n) : tower_(std::move(tower)), n_(n) {
  if (n < 1) throw PreconditionError("dense context needs n >= 1");
  const auto q = tower_->order();
  double dim = std::pow(tower_->log2_order() <= 64 ? double(q.value_or(0)) : 1e300, n);
  if (!q || dim > double(kDenseDimLimit))
    throw GuardExceeded("dense backend limited to q^n <= 4096");
  q_ = static_cast<std::uint32_t>(*q);
  dim_ = 1;
  for (int s = 0; s < n; ++s) dim_ *= q_;
  place_.resize(n);
  std::size_t pl = 1;
  for (int s = n - 1; s >= 0; --s) {
    place_[s] = pl;
    pl *= q_;
  }
  const auto els = tower_->elements();
  add_.resize(std::size_t(q_) * q_);
  trmul_.resize(std::size_t(q_) * q_);
  for (std::uint32_t x = 0; x < q_; ++x)
    for (std::uint32_t y = 0; y < q_; ++y) {
      add_[x * q_ + y] = static_cast<std::uint32_t>((els[x] + els[y]).index());
      trmul_[x * q_ + y] = (els[x] * els[y]).trace().value();
    }
}

std::uint32_t DenseContext::digit(std::size_t J, int s) const {
  return static_cast<std::uint32_t>((J / place_[s]) % q_);
}

// --------------------------------------------------------------- MonomialOp

CMatrix MonomialOp::dense() const {
  const auto d = static_cast<Eigen::Index>(perm.size());
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) m(perm[j], j) = coef[j];
  return m;
}

CMatrix MonomialOp::conjugate(const CMatrix& rho) const {
  const auto d = static_cast<Eigen::Index>(perm.size());
  CMatrix out(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Complex ck = std::conj(coef[k]);
    const auto pk = static_cast<Eigen::Index>(perm[k]);
    for (Eigen::Index j = 0; j < d; ++j) out(perm[j], pk) = coef[j] * rho(j, k) * ck;
  }
  return out;
}

Complex MonomialOp::trace_with(const CMatrix& rho) const {
  Complex s = 0;
  for (std::size_t k = 0; k < perm.size(); ++k)
    s += coef[k] * rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(perm[k]));
  return s;
}

MonomialOp weyl_monomial(const DenseContext& ctx, const WeylLabel& l) {
  const int n = ctx.n();
  if (l.w.n() != n) throw MismatchError("Weyl label has wrong number of factors");
  const std::uint32_t p = ctx.tower()->prime();
  const std::uint32_t m = phase_modulus(p);
  const std::uint32_t oe = omega_exponent(p);
  const auto phases = phase_table(p);
  std::vector<std::uint32_t> a(n), b(n);
  for (int s = 0; s < n; ++s) {
    a[s] = static_cast<std::uint32_t>(l.w.a(s).index());
    b[s] = static_cast<std::uint32_t>(l.w.b(s).index());
  }
  MonomialOp op;
  op.perm.resize(ctx.dim());
  op.coef.resize(ctx.dim());
  for (std::size_t J = 0; J < ctx.dim(); ++J) {
    std::size_t target = 0;
    std::uint64_t e = l.k;
    for (int s = 0; s < n; ++s) {
      const std::uint32_t j = ctx.digit(J, s);
      target = target * ctx.q() + ctx.add(j, a[s]);
      e += std::uint64_t(oe) * ctx.trmul(b[s], j);
    }
    op.perm[J] = target;
    op.coef[J] = phases[e % m];
  }
  return op;
}

CMatrix weyl_matrix(const DenseContext& ctx, const SympVector& w) {
  return weyl_monomial(ctx, WeylLabel::of(w)).dense();
}

CMatrix weyl_matrix(const DenseContext& ctx, const WeylLabel& l) {
  return weyl_monomial(ctx, l).dense();
}

// ------------------------------------------------------------ DensityMatrix

DensityMatrix::DensityMatrix(CMatrix rho, int n, std::uint32_t q)
    : rho_(std::move(rho)), n_(n), q_(q) {
  if (rho_.rows() != rho_.cols()) throw PreconditionError("density matrix must be square");
  std::size_t d = 1;
  for (int s = 0; s < n; ++s) d *= q;
  if (static_cast<std::size_t>(rho_.rows()) != d)
    throw MismatchError("density matrix dimension does not match q^n");
}

DensityMatrix DensityMatrix::maximally_mixed(int n, std::uint32_t q) {
  std::size_t d = 1;
  for (int s = 0; s < n; ++s) d *= q;
  const auto di = static_cast<Eigen::Index>(d);
  return DensityMatrix(CMatrix::Identity(di, di) / double(d), n, q);
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi, int n, std::uint32_t q) {
  const Eigen::VectorXcd v = psi / psi.norm();
  return DensityMatrix(v * v.adjoint(), n, q);
}

StateCheck DensityMatrix::check() const {
  StateCheck c;
  c.hermiticity = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(rho_.trace() - Complex(1, 0));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

// ---------------------------------------------------------- ProjectorFamily

ProjectorFamily::ProjectorFamily(std::shared_ptr<const DenseContext> ctx, StabilizerPtr stab)
    : ctx_(std::move(ctx)), stab_(std::move(stab)) {
  if (stab_->n() != ctx_->n() || !stab_->tower()->same_field(*ctx_->tower()))
    throw MismatchError("stabilizer and dense context disagree");
  elems_ = stab_->elements();
  for (const auto& e : elems_) ops_.push_back(weyl_monomial(*ctx_, e));
  const auto& cs = stab_->cosets();
  labels_ = cs.label_count();
  rank_ = ctx_->dim() / labels_;
  for (const auto& e : elems_) {
    std::vector<std::uint32_t> f;
    for (const auto& u : cs.complement())
      f.push_back(static_cast<std::uint32_t>(symplectic_form_fq(e.w, u).index()));
    pair_coeffs_.push_back(std::move(f));
  }
}

std::uint32_t ProjectorFamily::pairing(std::size_t element, std::uint64_t label_index) const {
  const auto& f = pair_coeffs_[element];
  const std::uint32_t p = ctx_->tower()->prime();
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < f.size(); ++i, label_index /= ctx_->q())
    s += ctx_->trmul(f[i], static_cast<std::uint32_t>(label_index % ctx_->q()));
  return s % p;
}

CMatrix ProjectorFamily::projector(const CosetLabel& l) const {
  return projector(stab_->cosets().label_index(l));
}

CMatrix ProjectorFamily::projector(std::uint64_t label_index) const {
  if (label_index >= labels_) throw PreconditionError("label index out of range");
  const std::uint32_t p = ctx_->tower()->prime();
  const std::uint32_t m = phase_modulus(p);
  const std::uint32_t oe = omega_exponent(p);
  const auto phases = phase_table(p);
  const auto d = static_cast<Eigen::Index>(ctx_->dim());
  CMatrix P = CMatrix::Zero(d, d);
  const double inv = 1.0 / double(elems_.size());
  for (std::size_t e = 0; e < elems_.size(); ++e) {
    const std::uint32_t ex = (m - (oe * pairing(e, label_index)) % m) % m;
    const Complex c = phases[ex] * inv;
    const auto& op = ops_[e];
    for (Eigen::Index j = 0; j < d; ++j) P(op.perm[j], j) += c * op.coef[j];
  }
  return P;
}

std::vector<double> ProjectorFamily::distribution(const DensityMatrix& rho) const {
  if (rho.dim() != ctx_->dim()) throw MismatchError("state dimension mismatch");
  const std::uint32_t p = ctx_->tower()->prime();
  const std::uint32_t m = phase_modulus(p);
  const std::uint32_t oe = omega_exponent(p);
  const auto phases = phase_table(p);
  std::vector<Complex> chi(elems_.size());
  for (std::size_t e = 0; e < elems_.size(); ++e) chi[e] = ops_[e].trace_with(rho.matrix());
  std::vector<double> out(labels_);
  const double inv = 1.0 / double(elems_.size());
  for (std::uint64_t l = 0; l < labels_; ++l) {
    Complex s = 0;
    for (std::size_t e = 0; e < elems_.size(); ++e)
      s += phases[(m - (oe * pairing(e, l)) % m) % m] * chi[e];
    out[l] = s.real() * inv;
  }
  return out;
}

ProjectorFamily stabilizer_projectors(const StabilizerPtr& stab) {
  return ProjectorFamily(std::make_shared<DenseContext>(stab->tower(), stab->n()), stab);
}

DensityMatrix initial_state(const ProjectorFamily& fam) {
  const auto& ctx = fam.context();
  return DensityMatrix(fam.projector(std::uint64_t{0}) / double(fam.rank()), ctx.n(), ctx.q());
}

DensityMatrix pure_ancilla_initial_state(const ProjectorFamily& fam) {
  if (fam.rank() < 2) throw PreconditionError("no ancilla factor: eigenspaces are one-dimensional");
  const CMatrix P = fam.projector(std::uint64_t{0});
  for (Eigen::Index j = 0; j < P.cols(); ++j) {
    const Eigen::VectorXcd col = P.col(j);
    if (col.norm() > 1e-6)
      return DensityMatrix::pure(col, fam.context().n(), fam.context().q());
  }
  throw InternalError("projector has no nonzero column");
}

DensityMatrix apply_local_weyls(const DenseContext& ctx, const DensityMatrix& rho,
                                const std::vector<std::pair<FieldElem, FieldElem>>& labels) {
  if (static_cast<int>(labels.size()) != ctx.n())
    throw MismatchError("need one Weyl label per subsystem");
  std::vector<FieldElem> a, b;
  for (const auto& [x, z] : labels) {
    a.push_back(x);
    b.push_back(z);
  }
  return apply_weyl(ctx, rho, SympVector::from_ab(a, b));
}

DensityMatrix apply_weyl(const DenseContext& ctx, const DensityMatrix& rho, const SympVector& w) {
  if (rho.dim() != ctx.dim()) throw MismatchError("state dimension mismatch");
  return DensityMatrix(weyl_monomial(ctx, WeylLabel::of(w)).conjugate(rho.matrix()), rho.n(),
                       rho.q());
}

std::vector<double> measure_pvm(const DensityMatrix& rho, const ProjectorFamily& fam) {
  return fam.distribution(rho);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  const int n = rho.n();
  const std::size_t q = rho.q();
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (int s : keep)
    if (s < 0 || s >= n) throw PreconditionError("subsystem index out of range");
  if (keep.empty()) throw PreconditionError("partial trace must keep at least one subsystem");
  std::vector<int> traced;
  for (int s = 0; s < n; ++s)
    if (!std::binary_search(keep.begin(), keep.end(), s)) traced.push_back(s);
  std::vector<std::size_t> place(n);
  std::size_t pl = 1;
  for (int s = n - 1; s >= 0; --s) {
    place[s] = pl;
    pl *= q;
  }
  auto count = [q](std::size_t k) {
    std::size_t d = 1;
    for (std::size_t i = 0; i < k; ++i) d *= q;
    return d;
  };
  const std::size_t da = count(keep.size()), db = count(traced.size());
  // full[a * db + t] = global index of kept digits a and traced digits t.
  std::vector<std::size_t> full(da * db);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t t = 0; t < db; ++t) {
      std::size_t idx = 0, x = a, y = t;
      for (int i = static_cast<int>(keep.size()) - 1; i >= 0; --i, x /= q) idx += (x % q) * place[keep[i]];
      for (int i = static_cast<int>(traced.size()) - 1; i >= 0; --i, y /= q)
        idx += (y % q) * place[traced[i]];
      full[a * db + t] = idx;
    }
  const auto& m = rho.matrix();
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da));
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < da; ++b) {
      Complex s = 0;
      for (std::size_t t = 0; t < db; ++t)
        s += m(static_cast<Eigen::Index>(full[a * db + t]), static_cast<Eigen::Index>(full[b * db + t]));
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
    }
  return DensityMatrix(std::move(out), static_cast<int>(keep.size()), rho.q());
}

double entropy(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  double h = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > kEigenFloor) h -= l * std::log2(l);
  }
  return h;
}

double entropy(const DensityMatrix& rho) { return entropy(rho.matrix()); }

double holevo_information(const std::vector<std::pair<double, const CMatrix*>>& ensemble) {
  if (ensemble.empty()) throw PreconditionError("empty ensemble");
  double total = 0;
  for (const auto& [p, r] : ensemble) {
    if (p < 0) throw PreconditionError("negative ensemble weight");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw PreconditionError("ensemble weights do not sum to 1");
  const auto d = ensemble.front().second->rows();
  CMatrix avg = CMatrix::Zero(d, d);
  // Members that coincide numerically share one eigendecomposition.
  std::vector<const CMatrix*> reps;
  std::vector<double> rep_entropy;
  double mean_entropy = 0;
  for (const auto& [p, r] : ensemble) {
    avg += p * (*r);
    std::size_t k = 0;
    for (; k < reps.size(); ++k)
      if ((*reps[k] - *r).norm() < 1e-12) break;
    if (k == reps.size()) {
      reps.push_back(r);
      rep_entropy.push_back(entropy(*r));
    }
    mean_entropy += p * rep_entropy[k];
  }
  return entropy(avg) - mean_entropy;
}

double holevo_information(const std::vector<std::pair<double, DensityMatrix>>& ensemble) {
  std::vector<std::pair<double, const CMatrix*>> e;
  for (const auto& [p, r] : ensemble) e.emplace_back(p, &r.matrix());
  return holevo_information(e);
}

double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows()) throw MismatchError("trace distance dimension mismatch");
  const CMatrix diff = rho - sigma;
  if (diff.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return trace_distance(rho.matrix(), sigma.matrix());
}

}  // namespace qpir
