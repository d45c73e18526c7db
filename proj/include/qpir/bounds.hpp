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

// Capacities, costs and the scalar functions of the finite-length converse.
//
// Logarithms are base 2 except inside η₀, which uses the natural logarithm
// so that its cap 1/e is the true maximum of -x ln x.

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace qpir {

using Rational = boost::rational<std::int64_t>;

/// Binary entropy in bits on [0, 1].
double h2(double x);
/// -x ln x on [0, 1/e], 1/e above; η₀(0) = 0.
double eta0(double x);
/// β + η₀(2√(2Fγ)) + 2 h₂(2√(2Fγ)) + h₂(α).
double bound_f(double alpha, double beta, double gamma, int F);
/// 10√(2Fγ) log₂ M + η₀(2√(2Fγ)) + 2 h₂(2√(2Fγ)).
double bound_g(double log2_M, double gamma, int F);

/// min{1, 2(N - T)/N}.
Rational quantum_capacity(int N, int T);

enum class ClassicalVariant { kPir, kSymmetric, kTPrivate, kSymmetricTPrivate };
std::string variant_name(ClassicalVariant v);
double classical_capacity(int N, int T, int F, ClassicalVariant v);
/// The F → ∞ limit of classical_capacity.
double classical_capacity_limit(int N, int T, ClassicalVariant v);

struct Costs {
  Rational rate;          // log M / log D
  double log2_M = 0;      // file size
  double log2_U = 0;      // upload: |F_q^{2N × 2(N-T)F}|
  double log2_D = 0;      // download: dimension q^N of all answers
  double log2_dim = 0;    // one server's answer, log₂ q
};

/// Costs of the stabilizer protocol at (N, T) over a field of order 2^{log2_q}.
Costs rate_and_costs(int N, int T, int F, double log2_q);

struct ConverseInputs {
  double log2_M = 0;
  double log2_dim = 0;  // per-server answer dimension
  int N = 0, T = 0, F = 0;
  double p_err = 0, beta = 0, gamma = 0;
};

struct ConverseCertificate {
  bool hypothesis_ok = false;
  bool pass = false;
  double lhs = 0;    // log₂ M
  double rhs = 0;    // (2(N-T) log₂ dim + f) / (1 - P_err - 10√(2Fγ))
  double slack = 0;  // rhs - lhs
  std::string note;
};

/// Evaluates the inequality when its hypothesis holds; passes when
/// lhs <= rhs + 1e-12.
ConverseCertificate converse_check(const ConverseInputs& in);

}  // namespace qpir
