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

// Error, secrecy and cost certificates for a protocol instance.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qpir/bounds.hpp"
#include "qpir/protocol.hpp"
#include "qpir/serialize.hpp"

namespace qpir {

using Decoder = std::function<std::vector<FieldElem>(const CosetLabel&, const ProtocolInstance&)>;

/// A decoder that forgets c_{2T+1}; used to show the error audit has teeth.
Decoder drop_first_coefficient_decoder();

struct AuditPlan {
  std::uint64_t seed = 1;
  /// Grids up to this many points are enumerated, larger ones sampled.
  std::uint64_t exhaustive_limit = 100000;
  std::uint64_t error_samples = 1000;
  Backend error_backend = Backend::kPhaseSpace;
  /// Query matrices drawn per file index for server secrecy.
  int secrecy_queries = 2;
  /// Largest non-target ensemble enumerated in full.
  std::uint64_t ensemble_limit = 4096;
  bool exact_user = true;
  std::uint64_t enumeration_limit = 1000000;
  std::uint64_t user_samples = 20000;
};

/// Probability that the decoded output differs from m_k at one grid point.
double retrieval_error(const ProtocolInstance& inst, int k, const std::vector<FieldElem>& m,
                       const FqMatrix& R, Backend backend, const Decoder& decoder = {});

struct ErrorAudit {
  double worst = 0;
  double average = 0;
  std::uint64_t points = 0;
  std::uint64_t failures = 0;  // points with nonzero error
  bool exhaustive = false;
  std::string backend;
};

ErrorAudit error_probability(const ProtocolInstance& inst, const AuditPlan& plan,
                             const Decoder& decoder = {});

enum class Ancilla {
  kMixed,  // P_[0] / q^{n-d}
  kPure,   // a pure state inside the range of P_[0]
};

struct SecrecyCase {
  int k = 0;
  int query = 0;
  std::uint64_t members = 0;
  double holevo = 0;
  double max_trace_distance = 0;
  bool pairwise_exact = true;
};

struct ServerSecrecyAudit {
  bool skipped = false;
  std::string reason;
  bool full_alphabet = true;
  double max_holevo = 0;
  double max_trace_distance = 0;
  std::vector<SecrecyCase> cases;
};

/// Holevo information between the non-target files and the returned state,
/// for a fixed target file, over several query matrices per k.
ServerSecrecyAudit server_secrecy(const ProtocolInstance& inst, const AuditPlan& plan,
                                  Ancilla ancilla = Ancilla::kMixed);

enum class Randomness { kUniform, kZero };

struct SubsetSecrecy {
  std::vector<int> servers;  // 0-based
  double mutual_information = 0;
};

struct UserSecrecyAudit {
  bool skipped = false;
  std::string reason;
  bool exact = true;
  std::uint64_t points = 0;
  /// All nonempty subsets of at most T servers.
  std::vector<SubsetSecrecy> subsets;
  double max_t_subset = 0;
  /// Every 2T × 2T block D_{1,π} is invertible.
  bool structural_ok = false;
  std::vector<std::vector<int>> singular_subsets;
};

/// I(K; Q_π) under uniform K and the given randomness, exact or sampled.
UserSecrecyAudit user_secrecy(const ProtocolInstance& inst, const AuditPlan& plan,
                              Randomness randomness = Randomness::kUniform);

struct AuditReport {
  std::string instance_id;
  bool verified = false;
  ErrorAudit error;
  ServerSecrecyAudit server;
  UserSecrecyAudit user;
  Costs costs;
  Rational capacity;
  ConverseCertificate converse;
  AuditPlan plan;

  bool error_ok() const { return error.worst == 0.0; }
  bool server_ok() const;
  bool user_ok() const;
  bool all_pass() const;
};

AuditReport audit_instance(const ProtocolInstance& inst, const AuditPlan& plan);

Json to_json(const AuditReport& r);
/// Fixed-width table for terminals.
std::string format_report(const AuditReport& r);

}  // namespace qpir
