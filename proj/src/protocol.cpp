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

#include "qpir/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "qpir/error.hpp"
#include "qpir/network.hpp"
#include "qpir/serialize.hpp"

namespace qpir {

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::kPhaseSpace: return "phase";
    case Backend::kDense: return "dense";
    case Backend::kBoth: return "both";
  }
  return "phase";
}

Backend parse_backend(const std::string& s) {
  if (s == "phase") return Backend::kPhaseSpace;
  if (s == "dense") return Backend::kDense;
  if (s == "both") return Backend::kBoth;
  throw PreconditionError("unknown backend '" + s + "'");
}

int native_collusion(int N, int T) {
  if (N < 2 || T < 1 || T >= N) throw PreconditionError("need N >= 2 and 1 <= T < N");
  return std::max(T, (N + 1) / 2);
}

// ---------------------------------------------------------- ProtocolInstance

struct ProtocolInstance::DenseCache {
  std::once_flag once;
  std::unique_ptr<ProjectorFamily> family;
  std::unique_ptr<DensityMatrix> initial;
};

ProtocolInstance ProtocolInstance::create(BasisSet basis, int F, Backend backend,
                                          std::optional<int> requested_T) {
  return make(std::move(basis), F, backend, requested_T, true);
}

ProtocolInstance ProtocolInstance::create_unchecked(BasisSet basis, int F, Backend backend,
                                                    std::optional<int> requested_T) {
  return make(std::move(basis), F, backend, requested_T, false);
}

ProtocolInstance ProtocolInstance::make(BasisSet basis, int F, Backend backend,
                                        std::optional<int> requested_T, bool require_verified) {
  const int N = basis.N(), T = basis.T();
  if (N < 2 || T < 1 || T >= N || 2 * T < N)
    throw PreconditionError("construction needs N/2 <= T < N");
  if (F < 1) throw PreconditionError("need at least one file");
  ProtocolInstance inst;
  inst.requested_T_ = requested_T.value_or(T);
  if (native_collusion(N, inst.requested_T_) != T)
    throw PreconditionError("basis collusion level does not serve the requested T");
  const auto& v = basis.vectors();
  inst.report_ = verify_conditions({v.begin(), v.begin() + 2 * T}, N, T);
  if (require_verified && !inst.report_.ok()) throw VerificationError("basis fails the retrieval conditions");
  inst.stab_ = build_stabilizer(basis.stabilizer_space(), basis.cosets());
  inst.F_ = F;
  inst.backend_ = backend;
  inst.id_ = "N" + std::to_string(N) + "-T" + std::to_string(T) + "-F" + std::to_string(F) +
             "-q" + std::to_string(basis.tower()->checked_order()) + "-" + basis.source();
  inst.basis_ = std::move(basis);
  inst.dense_ = std::make_shared<DenseCache>();
  if (backend != Backend::kPhaseSpace && !inst.dense_available())
    throw GuardExceeded("dense backend requested but q^N exceeds the dense limit");
  return inst;
}

bool ProtocolInstance::dense_available() const {
  return tower()->log2_order() * N() <= std::log2(double(kDenseDimLimit)) + 1e-9;
}

const ProjectorFamily& ProtocolInstance::dense_family() const {
  if (!dense_) throw PreconditionError("instance is not initialized");
  std::call_once(dense_->once, [this] {
    auto fam = std::make_unique<ProjectorFamily>(stabilizer_projectors(stab_));
    dense_->initial = std::make_unique<DensityMatrix>(initial_state(*fam));
    dense_->family = std::move(fam);
  });
  return *dense_->family;
}

const DensityMatrix& ProtocolInstance::dense_initial_state() const {
  dense_family();
  return *dense_->initial;
}

// ------------------------------------------------------------ protocol steps

FqMatrix selection_matrix(int k, int L, int F, const TowerPtr& tower) {
  if (k < 1 || k > F) throw PreconditionError("file index out of range");
  FqMatrix e(tower, L, L * F);
  for (int i = 0; i < L; ++i) e(i, (k - 1) * L + i) = tower->one();
  return e;
}

QueryMatrix user_query(int k, const ProtocolInstance& inst, const FqMatrix& R) {
  const int L = inst.file_length();
  if (R.rows() != 2 * inst.T() || R.cols() != L * inst.F())
    throw MismatchError("randomness matrix must be 2T x LF");
  const auto e = selection_matrix(k, L, inst.F(), inst.tower());
  return {inst.basis().D1() * R + inst.basis().D2() * e, inst.N()};
}

WeylLabel server_encode(const std::vector<FieldElem>& qx, const std::vector<FieldElem>& qz,
                        const std::vector<FieldElem>& m) {
  if (qx.size() != m.size() || qz.size() != m.size() || m.empty())
    throw MismatchError("query rows and files differ in length");
  const auto& tower = m.front().tower();
  FieldElem a = tower->zero(), b = tower->zero();
  for (std::size_t i = 0; i < m.size(); ++i) {
    a += qx[i] * m[i];
    b += qz[i] * m[i];
  }
  return WeylLabel::of(SympVector::from_ab({a}, {b}));
}

std::vector<FieldElem> user_decode(const CosetLabel& outcome, const ProtocolInstance& inst) {
  return coset_coefficients(outcome, inst.basis());
}

SympVector assemble_answers(const TowerPtr& tower, const std::vector<WeylLabel>& answers) {
  std::vector<FieldElem> a, b;
  for (const auto& l : answers) {
    if (l.w.n() != 1) throw MismatchError("server answers act on a single qudit");
    a.push_back(l.w.a(0));
    b.push_back(l.w.b(0));
  }
  if (answers.empty()) return SympVector(tower, 0);
  return SympVector::from_ab(a, b);
}

std::vector<FieldElem> file_block(const std::vector<FieldElem>& m, int k, int L) {
  if (k < 1 || std::size_t(k) * L > m.size()) throw PreconditionError("file index out of range");
  return {m.begin() + std::size_t(k - 1) * L, m.begin() + std::size_t(k) * L};
}

std::vector<FieldElem> random_files(const ProtocolInstance& inst, std::mt19937_64& rng) {
  std::vector<FieldElem> m;
  for (int i = 0; i < inst.file_length() * inst.F(); ++i) m.push_back(inst.tower()->random(rng));
  return m;
}

FqMatrix random_randomness(const ProtocolInstance& inst, std::mt19937_64& rng) {
  FqMatrix r(inst.tower(), 2 * inst.T(), inst.file_length() * inst.F());
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j) r(i, j) = inst.tower()->random(rng);
  return r;
}

// ----------------------------------------------------------------- run loop

namespace {

struct Outcome {
  CosetLabel label;
  std::optional<double> leakage;
};

Outcome measure_phase(const ProtocolInstance& inst, const SympVector& joint) {
  return {phase_space_measure(phase_space_apply(initial_coset_state(inst.stabilizer()), joint)),
          std::nullopt};
}

Outcome measure_dense(const ProtocolInstance& inst, const std::vector<WeylLabel>& answers) {
  const auto& fam = inst.dense_family();
  std::vector<std::pair<FieldElem, FieldElem>> local;
  for (const auto& l : answers) local.emplace_back(l.w.a(0), l.w.b(0));
  const auto rho = apply_local_weyls(fam.context(), inst.dense_initial_state(), local);
  const auto dist = measure_pvm(rho, fam);
  const auto best = std::max_element(dist.begin(), dist.end()) - dist.begin();
  const double leakage = std::max(0.0, 1.0 - dist[best]);
  if (leakage > 1e-9) throw BackendDisagreement("dense outcome is not a point mass");
  return {inst.stabilizer()->cosets().label_at(static_cast<std::uint64_t>(best)), leakage};
}

template <typename M>
M transport(const M& msg, Transport mode, const TowerPtr& tower) {
  if (mode == Transport::kInProcess) return msg;
  const std::string wire = to_json(msg).dump();
  if constexpr (std::is_same_v<M, QueryMessage>)
    return query_message_from_json(tower, Json::parse(wire));
  else
    return answer_message_from_json(tower, Json::parse(wire));
}

}  // namespace

Transcript run_protocol(const ProtocolInstance& inst, int k, const std::vector<FieldElem>& m,
                        const FqMatrix& R, const RunOptions& opts) {
  const int N = inst.N(), L = inst.file_length();
  if (k < 1 || k > inst.F()) throw PreconditionError("file index out of range");
  if (m.size() != std::size_t(L) * inst.F()) throw MismatchError("file vector has wrong length");
  const Backend backend = opts.backend.value_or(inst.backend());
  const auto& tower = inst.tower();

  Network net(N);
  Transcript tr;
  tr.instance_id = inst.id();
  tr.N = N;
  tr.T = inst.T();
  tr.F = inst.F();
  tr.k = k;
  tr.R = R;
  tr.backend = backend;
  tr.servers.resize(N);

  // Servers: receive the query, act on the local qudit, return it.
  std::vector<std::exception_ptr> errors(N);
  std::vector<std::thread> actors;
  for (int s = 0; s < N; ++s) {
    actors.emplace_back([&, s] {
      try {
        const auto q = net.to_server(s).receive();
        std::uint64_t clock = q.tick + 1;
        AnswerMessage ans{s, server_encode(q.qx, q.qz, m), ++clock};
        net.count_message();
        net.to_user(s).send(transport(ans, opts.transport, tower));
      } catch (...) {
        errors[s] = std::current_exception();
        net.to_user(s).close();
      }
    });
  }

  std::vector<WeylLabel> answers;
  std::exception_ptr user_error;
  std::uint64_t clock = 0;
  try {
    const auto query = user_query(k, inst, R);
    for (int s = 0; s < N; ++s) {
      QueryMessage msg{s, query.x_row(s), query.z_row(s), ++clock};
      tr.servers[s].server = s;
      tr.servers[s].qx = msg.qx;
      tr.servers[s].qz = msg.qz;
      tr.servers[s].query_time = msg.tick;
      net.count_message();
      net.to_server(s).send(transport(msg, opts.transport, tower));
    }
    for (int s = 0; s < N; ++s) {
      auto ans = net.to_user(s).receive();
      clock = std::max(clock, ans.tick) + 1;
      tr.servers[s].answer = ans.action;
      tr.servers[s].answer_time = ans.tick;
      answers.push_back(std::move(ans.action));
    }
  } catch (...) {
    user_error = std::current_exception();
    net.close_all();
  }
  for (auto& t : actors) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  if (user_error) std::rethrow_exception(user_error);

  // The shared state absorbs the answers in server-index order.
  const auto joint = assemble_answers(tower, answers);
  Outcome out;
  if (backend == Backend::kPhaseSpace) {
    out = measure_phase(inst, joint);
  } else if (backend == Backend::kDense) {
    out = measure_dense(inst, answers);
  } else {
    out = measure_phase(inst, joint);
    const auto dense = measure_dense(inst, answers);
    if (dense.label != out.label)
      throw BackendDisagreement("phase-space and dense outcomes differ");
    out.leakage = dense.leakage;
  }
  tr.outcome = out.label.coeffs;
  tr.dense_leakage = out.leakage;
  tr.decoded = opts.decoder ? opts.decoder(out.label, inst) : user_decode(out.label, inst);
  tr.finish_time = clock + 1;
  tr.messages = net.messages();
  return tr;
}

CosetLabel run_multicast(const Subspace& v,
                         const std::vector<std::pair<FieldElem, FieldElem>>& labels) {
  if (static_cast<int>(labels.size()) != v.n())
    throw MismatchError("need one label per player");
  std::vector<FieldElem> a, b;
  for (const auto& [x, z] : labels) {
    a.push_back(x);
    b.push_back(z);
  }
  const auto stab = build_stabilizer(v);
  return phase_space_measure(phase_space_apply(initial_coset_state(stab), SympVector::from_ab(a, b)));
}

}  // namespace qpir
