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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qpir/bounds.hpp"
#include "qpir/error.hpp"

using namespace qpir;

TEST_CASE("scalar functions") {
  CHECK(h2(0.5) == 1.0);
  CHECK(h2(0.0) == 0.0);
  CHECK(h2(1.0) == 0.0);
  CHECK(h2(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-15));
  CHECK_THROWS_AS(h2(1.5), PreconditionError);
  CHECK(eta0(0.5) == 1.0 / std::numbers::e);
  CHECK(eta0(0.0) == 0.0);
  CHECK(eta0(0.1) == doctest::Approx(0.1 * std::log(10.0)).epsilon(1e-15));
  // At exactly 1/e the -x ln x branch is taken; it meets the cap.
  CHECK(eta0(1.0 / std::numbers::e) == doctest::Approx(1.0 / std::numbers::e).epsilon(1e-15));
  CHECK_THROWS_AS(eta0(-0.1), PreconditionError);
  CHECK(bound_f(0, 0, 0, 2) == 0.0);
  CHECK(bound_f(0.5, 0.25, 0, 2) == 1.25);
  CHECK(bound_g(10, 0, 3) == 0.0);
  // γ = 1/800, F = 1: 2√(2Fγ) = 0.1 and 10√(2Fγ) = 0.5.
  const double x = 0.1;
  CHECK(bound_g(4, 1.0 / 800, 1) == doctest::Approx(0.5 * 4 + eta0(x) + 2 * h2(x)).epsilon(1e-14));
  CHECK(bound_f(0.1, 0.0, 1.0 / 800, 1) == doctest::Approx(eta0(x) + 3 * h2(x)).epsilon(1e-14));
}

TEST_CASE("capacities") {
  CHECK(quantum_capacity(2, 1) == Rational(1));
  CHECK(quantum_capacity(3, 2) == Rational(2, 3));
  CHECK(quantum_capacity(4, 3) == Rational(1, 2));
  CHECK(quantum_capacity(6, 2) == Rational(1));
  CHECK_THROWS_AS(quantum_capacity(2, 2), PreconditionError);
  CHECK(classical_capacity(2, 1, 2, ClassicalVariant::kSymmetricTPrivate) == 0.5);
  CHECK(classical_capacity(4, 3, 2, ClassicalVariant::kSymmetricTPrivate) == 0.25);
  CHECK(classical_capacity(4, 3, 2, ClassicalVariant::kTPrivate) == doctest::Approx(4.0 / 7.0));
  CHECK(std::round(classical_capacity(4, 3, 2, ClassicalVariant::kTPrivate) * 1000) == 571);
  CHECK(classical_capacity(2, 1, 2, ClassicalVariant::kPir) == doctest::Approx(2.0 / 3.0));
  CHECK(classical_capacity(3, 1, 2, ClassicalVariant::kSymmetric) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(classical_capacity(2, 1, 1, ClassicalVariant::kPir), PreconditionError);
  // Twice the classical symmetric value once T >= N/2.
  for (int N = 2; N <= 8; ++N)
    for (int T = (N + 1) / 2; T < N; ++T)
      CHECK(boost::rational_cast<double>(quantum_capacity(N, T)) ==
            doctest::Approx(2 * classical_capacity(N, T, 3, ClassicalVariant::kSymmetricTPrivate)));
}

TEST_CASE("rates and costs") {
  CHECK(rate_and_costs(2, 1, 2, 1).rate == Rational(1));
  CHECK(rate_and_costs(3, 2, 2, 3).rate == Rational(2, 3));
  CHECK(rate_and_costs(4, 3, 2, 2).rate == Rational(1, 2));
  const auto c = rate_and_costs(3, 2, 2, 3);
  CHECK(c.log2_M == 6);
  CHECK(c.log2_D == 9);
  CHECK(c.log2_U == 4 * 3 * 2 * 1 * 3);
}

TEST_CASE("converse certificate") {
  for (auto [N, T] : {std::pair{2, 1}, std::pair{3, 2}, std::pair{4, 3}}) {
    const double lq = 3;
    const auto cert = converse_check({2.0 * (N - T) * lq, lq, N, T, 2, 0, 0, 0});
    CHECK(cert.hypothesis_ok);
    CHECK(cert.pass);
    CHECK(cert.slack == 0.0);
    const auto over = converse_check({(2.0 * (N - T) + 1) * lq, lq, N, T, 2, 0, 0, 0});
    CHECK_FALSE(over.pass);
    CHECK(over.slack < 0);
  }
  const auto bad = converse_check({4, 1, 2, 1, 2, 0, 0, 0.01});
  CHECK_FALSE(bad.hypothesis_ok);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(converse_check({4, 1, 2, 1, 2, 0.6, 0, 0}).hypothesis_ok);
}
