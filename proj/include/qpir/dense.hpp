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

// Exact dense simulation on (C^q)^{⊗n}.
//
// Basis state |j_1 .. j_n⟩ has index Σ_s idx(j_s) q^{n-s}: server 1 is the
// most significant digit and each factor is enumerated in the tower's
// canonical element order.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "qpir/stabilizer.hpp"

namespace qpir {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Largest Hilbert-space dimension the dense backend accepts.
inline constexpr std::uint64_t kDenseDimLimit = 4096;

/// Index-level tables for a small field plus the tensor layout.
class DenseContext {
 public:
  /// Throws GuardExceeded when q^n > kDenseDimLimit.
  DenseContext(TowerPtr tower, int n);

  const TowerPtr& tower() const noexcept { return tower_; }
  int n() const noexcept { return n_; }
  std::uint32_t q() const noexcept { return q_; }
  std::size_t dim() const noexcept { return dim_; }

  std::uint32_t add(std::uint32_t x, std::uint32_t y) const { return add_[x * q_ + y]; }
  /// tr(x y) ∈ F_p for element indices x, y.
  std::uint32_t trmul(std::uint32_t x, std::uint32_t y) const { return trmul_[x * q_ + y]; }
  /// Digit of server s (0-based) in basis index J.
  std::uint32_t digit(std::size_t J, int s) const;

 private:
  TowerPtr tower_;
  int n_;
  std::uint32_t q_;
  std::size_t dim_;
  std::vector<std::uint32_t> add_, trmul_;
  std::vector<std::size_t> place_;  // q^{n-1-s}
};

/// U|J⟩ = coef[J] |perm[J]⟩.
struct MonomialOp {
  std::vector<std::size_t> perm;
  std::vector<Complex> coef;

  CMatrix dense() const;
  /// U ρ U*.
  CMatrix conjugate(const CMatrix& rho) const;
  /// Tr(U ρ).
  Complex trace_with(const CMatrix& rho) const;
};

MonomialOp weyl_monomial(const DenseContext& ctx, const WeylLabel& l);
CMatrix weyl_matrix(const DenseContext& ctx, const SympVector& w);
CMatrix weyl_matrix(const DenseContext& ctx, const WeylLabel& l);

struct StateCheck {
  double hermiticity = 0;  // max |ρ - ρ*|
  double trace_error = 0;  // |Tr ρ - 1|
  double min_eigenvalue = 0;
  bool ok(double tol = 1e-10) const {
    return hermiticity <= tol && trace_error <= tol && min_eigenvalue >= -tol;
  }
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(CMatrix rho, int n, std::uint32_t q);
  static DensityMatrix maximally_mixed(int n, std::uint32_t q);
  static DensityMatrix pure(const Eigen::VectorXcd& psi, int n, std::uint32_t q);

  const CMatrix& matrix() const noexcept { return rho_; }
  int n() const noexcept { return n_; }
  std::uint32_t q() const noexcept { return q_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
  StateCheck check() const;

 private:
  CMatrix rho_;
  int n_ = 0;
  std::uint32_t q_ = 2;
};

/// The PVM {P_[w]} of a stabilizer, built on demand from
/// P_[w] = |V|^{-1} Σ_{v∈V} ω^{-⟨v,Jw⟩} W(v).
class ProjectorFamily {
 public:
  ProjectorFamily(std::shared_ptr<const DenseContext> ctx, StabilizerPtr stab);

  const DenseContext& context() const noexcept { return *ctx_; }
  const StabilizerPtr& stabilizer() const noexcept { return stab_; }
  std::uint64_t label_count() const noexcept { return labels_; }
  /// q^{n-d}.
  std::uint64_t rank() const noexcept { return rank_; }
  const std::vector<WeylLabel>& elements() const noexcept { return elems_; }
  const std::vector<MonomialOp>& element_ops() const noexcept { return ops_; }

  CMatrix projector(const CosetLabel& l) const;
  CMatrix projector(std::uint64_t label_index) const;
  /// Tr(P_[w] ρ) for every label, indexed by CosetSpace::label_index.
  std::vector<double> distribution(const DensityMatrix& rho) const;
  /// ω-exponent of ⟨v_e, J w_l⟩ for element e and label l.
  std::uint32_t pairing(std::size_t element, std::uint64_t label_index) const;

 private:
  std::shared_ptr<const DenseContext> ctx_;
  StabilizerPtr stab_;
  std::vector<WeylLabel> elems_;
  std::vector<MonomialOp> ops_;
  // f_[e][i] = index of ⟨v_e, J u_i⟩_{F_q} for complement vector u_i.
  std::vector<std::vector<std::uint32_t>> pair_coeffs_;
  std::uint64_t labels_ = 0, rank_ = 0;
};

ProjectorFamily stabilizer_projectors(const StabilizerPtr& stab);

/// P_[0] / q^{n-d}.
DensityMatrix initial_state(const ProjectorFamily& fam);
/// |[0]⟩⟨[0]| ⊗ σ with a pure σ: the normalized projection P_[0]|e⟩ of the
/// first basis state with nonzero overlap. Requires q^{n-d} > 1.
DensityMatrix pure_ancilla_initial_state(const ProjectorFamily& fam);

/// Conjugation by X(a_1)Z(b_1) ⊗ .. ⊗ X(a_n)Z(b_n).
DensityMatrix apply_local_weyls(const DenseContext& ctx, const DensityMatrix& rho,
                                const std::vector<std::pair<FieldElem, FieldElem>>& labels);
DensityMatrix apply_weyl(const DenseContext& ctx, const DensityMatrix& rho, const SympVector& w);

/// Tr(P_[w] ρ) for every label.
std::vector<double> measure_pvm(const DensityMatrix& rho, const ProjectorFamily& fam);

/// Keeps the listed tensor factors (0-based, any order; output in ascending order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep);

/// Von Neumann entropy in bits; eigenvalues below 1e-10 in magnitude count as 0.
double entropy(const CMatrix& rho);
double entropy(const DensityMatrix& rho);
/// H(Σ p_x ρ_x) - Σ p_x H(ρ_x) in bits. Throws PreconditionError unless Σ p = 1.
double holevo_information(const std::vector<std::pair<double, const CMatrix*>>& ensemble);
double holevo_information(const std::vector<std::pair<double, DensityMatrix>>& ensemble);
/// ½ ‖ρ - σ‖_1.
double trace_distance(const CMatrix& rho, const CMatrix& sigma);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace qpir
