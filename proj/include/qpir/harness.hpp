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

// Configuration, instance bundles and the command implementations behind
// the qpir tool. Everything here is deterministic given the config and seed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpir/audit.hpp"
#include "qpir/bounds.hpp"
#include "qpir/protocol.hpp"
#include "qpir/serialize.hpp"

namespace qpir {

struct FieldConfig {
  std::uint64_t base_order = 2;  // q', a prime power
  int chain_length = 0;          // degree-2 extensions on top of F_{q'}
};

struct BasisConfig {
  std::string source = "search";  // tower | search | file
  std::uint64_t seed = 1;
  std::string variant = "repaired";  // tower only: repaired | unmodified
  long max_attempts = 20000;
  std::string path;  // file only
};

struct RunConfig {
  int N = 2, T = 1, F = 2;
  FieldConfig field;
  BasisConfig basis;
  Backend backend = Backend::kPhaseSpace;
  std::uint64_t seed = 1;
  AuditPlan audit;
  std::string out;

  /// Throws PreconditionError naming the offending field.
  void validate() const;
  static RunConfig from_json(const Json& j);
  Json to_json() const;
};

TowerPtr build_tower(const FieldConfig& f);
/// The basis for (N, native_collusion(N, T)).
BasisSet build_basis(const RunConfig& cfg, const TowerPtr& tower);

/// Builds and verifies the instance; the bundle embeds its certificate.
Json cmd_setup(const RunConfig& cfg);

/// Rebuilds the instance and re-runs verification. With `require_verified`
/// a failing certificate or a stored claim that disagrees with the recomputed
/// one raises VerificationError.
ProtocolInstance load_bundle(const Json& bundle, bool require_verified = true);

struct RunResult {
  Transcript transcript;
  std::vector<FieldElem> target;
  bool correct = false;
  Json json;
};

/// One retrieval. Files come from `files` or are drawn from the seed; R is
/// always drawn from the seed.
RunResult cmd_run(const Json& bundle, int k, const std::optional<std::vector<FieldElem>>& files,
                  std::uint64_t seed, std::optional<Backend> backend = std::nullopt,
                  Transport transport = Transport::kInProcess);

/// Audits even unverified bundles so broken bases show up as failures.
AuditReport cmd_audit(const Json& bundle, const AuditPlan& plan);

struct BoundsQuery {
  int N = 2, T = 1, F = 2;
  bool f_limit = false;
  double log2_q = 1;
  double p_err = 0, beta = 0, gamma = 0;
  std::optional<double> log2_M;  // defaults to 2(N - T') log2 q
};

Json cmd_bounds(const BoundsQuery& q);
std::string format_bounds(const Json& bounds);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qpir
