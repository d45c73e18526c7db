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

// The retrieval protocol and the two-party multicast primitive it builds on.
//
// Files m_1..m_F each live in F_q^{L} with L = 2(N - T) and are stored
// concatenated as one vector m ∈ F_q^{LF}. File indices k are 1-based.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qpir/dense.hpp"
#include "qpir/stabilizer.hpp"
#include "qpir/symplectic.hpp"

namespace qpir {

enum class Backend { kPhaseSpace, kDense, kBoth };

std::string backend_name(Backend b);
/// Accepts "phase", "dense" or "both".
Backend parse_backend(const std::string& s);

/// The collusion level actually run: T itself when N/2 <= T, else ceil(N/2).
int native_collusion(int N, int T);

class ProtocolInstance {
 public:
  ProtocolInstance() = default;
  /// Verifies the basis for (N, basis.T()) and throws VerificationError on
  /// failure. `requested_T` defaults to basis.T(); when given it must satisfy
  /// native_collusion(N, requested_T) == basis.T().
  static ProtocolInstance create(BasisSet basis, int F, Backend backend = Backend::kPhaseSpace,
                                 std::optional<int> requested_T = std::nullopt);
  /// As create, but a failed condition report is recorded instead of thrown.
  /// V must still be self-orthogonal. Used to audit deliberately broken bases.
  static ProtocolInstance create_unchecked(BasisSet basis, int F,
                                           Backend backend = Backend::kPhaseSpace,
                                           std::optional<int> requested_T = std::nullopt);

  int N() const noexcept { return basis_.N(); }
  /// Collusion level of the construction.
  int T() const noexcept { return basis_.T(); }
  /// Collusion level the caller asked for (at most T()).
  int requested_T() const noexcept { return requested_T_; }
  int F() const noexcept { return F_; }
  /// L = 2(N - T), the number of F_q symbols per file.
  int file_length() const noexcept { return 2 * (N() - T()); }
  const TowerPtr& tower() const noexcept { return basis_.tower(); }
  const BasisSet& basis() const noexcept { return basis_; }
  const StabilizerPtr& stabilizer() const noexcept { return stab_; }
  const ConditionReport& report() const noexcept { return report_; }
  bool verified() const noexcept { return report_.ok(); }
  Backend backend() const noexcept { return backend_; }
  const std::string& id() const noexcept { return id_; }

  /// True when q^N fits the dense backend.
  bool dense_available() const;
  /// Built on first use and shared by copies; throws GuardExceeded.
  const ProjectorFamily& dense_family() const;
  const DensityMatrix& dense_initial_state() const;

 private:
  struct DenseCache;
  static ProtocolInstance make(BasisSet basis, int F, Backend backend,
                               std::optional<int> requested_T, bool require_verified);
  BasisSet basis_;
  StabilizerPtr stab_;
  ConditionReport report_;
  int requested_T_ = 0, F_ = 0;
  Backend backend_ = Backend::kPhaseSpace;
  std::string id_;
  std::shared_ptr<DenseCache> dense_;
};

/// The 2N × LF query; server s (0-based) owns rows s and N + s.
struct QueryMatrix {
  FqMatrix q;
  int N = 0;

  std::vector<FieldElem> x_row(int s) const { return q.row(s); }
  std::vector<FieldElem> z_row(int s) const { return q.row(N + s); }
};

/// E_k: the L × LF block row with the identity in block k.
FqMatrix selection_matrix(int k, int L, int F, const TowerPtr& tower);
/// q = D_1 R + D_2 E_k. R has shape 2T × LF.
QueryMatrix user_query(int k, const ProtocolInstance& inst, const FqMatrix& R);
/// The label (q_sX · m, q_sZ · m) of the single-qudit operator X(·)Z(·).
WeylLabel server_encode(const std::vector<FieldElem>& qx, const std::vector<FieldElem>& qz,
                        const std::vector<FieldElem>& m);
/// (c_{2T+1}, .., c_{2N}) of the outcome.
std::vector<FieldElem> user_decode(const CosetLabel& outcome, const ProtocolInstance& inst);

/// Joint label (a_1..a_N, b_1..b_N) from per-server single-qudit labels.
SympVector assemble_answers(const TowerPtr& tower, const std::vector<WeylLabel>& answers);

/// File k (1-based) of the concatenated file vector.
std::vector<FieldElem> file_block(const std::vector<FieldElem>& m, int k, int L);
std::vector<FieldElem> random_files(const ProtocolInstance& inst, std::mt19937_64& rng);
FqMatrix random_randomness(const ProtocolInstance& inst, std::mt19937_64& rng);

struct ServerRecord {
  int server = 0;  // 0-based
  std::vector<FieldElem> qx, qz;
  WeylLabel answer;
  std::uint64_t query_time = 0, answer_time = 0;  // Lamport times
};

struct Transcript {
  std::string instance_id;
  int N = 0, T = 0, F = 0;
  int k = 0;
  FqMatrix R;
  std::vector<ServerRecord> servers;
  std::vector<FieldElem> outcome;  // coset coefficients of the measured label
  std::vector<FieldElem> decoded;
  Backend backend = Backend::kPhaseSpace;
  std::optional<double> dense_leakage;  // 1 - max_w Tr(P_[w] ρ)
  std::uint64_t finish_time = 0;
  std::uint64_t messages = 0;
};

enum class Transport {
  kInProcess,   // messages move as values
  kSerialized,  // every message is round-tripped through its JSON encoding
};

struct RunOptions {
  std::optional<Backend> backend;  // defaults to the instance's
  Transport transport = Transport::kInProcess;
  /// Replaces user_decode, e.g. to audit a faulty decoder.
  std::function<std::vector<FieldElem>(const CosetLabel&, const ProtocolInstance&)> decoder;
};

/// Runs one retrieval with one thread per server over a fresh Network.
/// Throws BackendDisagreement if the backends disagree or the dense
/// outcome is not a point mass.
Transcript run_protocol(const ProtocolInstance& inst, int k, const std::vector<FieldElem>& m,
                        const FqMatrix& R, const RunOptions& opts = {});

/// The measured label after every player applies its own X(a_s)Z(b_s) to
/// the stabilizer state of V. Phase-space evaluation.
CosetLabel run_multicast(const Subspace& v,
                         const std::vector<std::pair<FieldElem, FieldElem>>& labels);

}  // namespace qpir
