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

#include "qpir/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qpir/error.hpp"

namespace qpir {

namespace {

constexpr double kTolerance = 1e-12;

void check_domain(int N, int T) {
  if (N < 2 || T < 1 || T >= N) throw PreconditionError("need N >= 2 and 1 <= T < N");
}

double leak(double gamma, int F) {
  if (gamma < 0 || F < 1) throw PreconditionError("need gamma >= 0 and F >= 1");
  return 2.0 * std::sqrt(2.0 * F * gamma);
}

}  // namespace

double h2(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw PreconditionError("h2 is defined on [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double eta0(double x) {
  if (!(x >= 0.0)) throw PreconditionError("eta0 needs x >= 0");
  if (x == 0.0) return 0.0;
  if (x > 1.0 / std::numbers::e) return 1.0 / std::numbers::e;
  return -x * std::log(x);
}

double bound_f(double alpha, double beta, double gamma, int F) {
  const double x = leak(gamma, F);
  return beta + eta0(x) + 2.0 * h2(x) + h2(alpha);
}

double bound_g(double log2_M, double gamma, int F) {
  const double x = leak(gamma, F);
  return 5.0 * x * log2_M + eta0(x) + 2.0 * h2(x);
}

Rational quantum_capacity(int N, int T) {
  check_domain(N, T);
  return std::min(Rational(1), Rational(2 * (N - T), N));
}

std::string variant_name(ClassicalVariant v) {
  switch (v) {
    case ClassicalVariant::kPir: return "pir";
    case ClassicalVariant::kSymmetric: return "symmetric";
    case ClassicalVariant::kTPrivate: return "t-private";
    case ClassicalVariant::kSymmetricTPrivate: return "symmetric-t-private";
  }
  return "pir";
}

double classical_capacity(int N, int T, int F, ClassicalVariant v) {
  check_domain(N, T);
  if (F < 2) throw PreconditionError("classical capacities need F >= 2");
  const double n = N, t = T;
  switch (v) {
    case ClassicalVariant::kPir: return (1.0 - 1.0 / n) / (1.0 - std::pow(n, -F));
    case ClassicalVariant::kSymmetric: return 1.0 - 1.0 / n;
    case ClassicalVariant::kTPrivate: return (1.0 - t / n) / (1.0 - std::pow(t / n, F));
    case ClassicalVariant::kSymmetricTPrivate: return (n - t) / n;
  }
  throw PreconditionError("unknown variant");
}

double classical_capacity_limit(int N, int T, ClassicalVariant v) {
  check_domain(N, T);
  const double n = N, t = T;
  switch (v) {
    case ClassicalVariant::kPir:
    case ClassicalVariant::kSymmetric: return 1.0 - 1.0 / n;
    case ClassicalVariant::kTPrivate:
    case ClassicalVariant::kSymmetricTPrivate: return (n - t) / n;
  }
  throw PreconditionError("unknown variant");
}

Costs rate_and_costs(int N, int T, int F, double log2_q) {
  check_domain(N, T);
  if (F < 1 || !(log2_q > 0)) throw PreconditionError("need F >= 1 and q >= 2");
  Costs c;
  c.log2_M = 2.0 * (N - T) * log2_q;
  c.log2_U = 4.0 * N * F * (N - T) * log2_q;
  c.log2_D = N * log2_q;
  c.log2_dim = log2_q;
  c.rate = Rational(2 * (N - T), N);
  return c;
}

ConverseCertificate converse_check(const ConverseInputs& in) {
  check_domain(in.N, in.T);
  ConverseCertificate c;
  c.lhs = in.log2_M;
  const double ten = 10.0 * std::sqrt(2.0 * in.F * in.gamma);
  const double denom = 1.0 - in.p_err - ten;
  if (in.p_err < 0 || in.beta < 0 || in.gamma < 0) {
    c.note = "negative inputs";
    return c;
  }
  if (in.p_err > std::min(0.5, 1.0 - ten) || denom <= 0) {
    c.note = "hypothesis violated: P_err exceeds min{1/2, 1 - 10 sqrt(2 F gamma)}";
    return c;
  }
  c.hypothesis_ok = true;
  c.rhs = (2.0 * (in.N - in.T) * in.log2_dim + bound_f(in.p_err, in.beta, in.gamma, in.F)) / denom;
  c.slack = c.rhs - c.lhs;
  c.pass = c.lhs <= c.rhs + kTolerance;
  c.note = c.pass ? "holds" : "violated";
  return c;
}

}  // namespace qpir
