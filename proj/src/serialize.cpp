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

#include "qpir/serialize.hpp"

#include "qpir/error.hpp"

namespace qpir {

Json to_json(const TowerSpec& spec) {
  Json levels = Json::array();
  for (const auto& [m0, m1] : spec.level_moduli) levels.push_back({{"m0", m0}, {"m1", m1}});
  return {{"prime", spec.prime},
          {"base_degree", spec.base_degree},
          {"base_modulus", spec.base_modulus},
          {"levels", levels}};
}

TowerSpec tower_spec_from_json(const Json& j) {
  try {
    TowerSpec s;
    s.prime = j.at("prime").get<std::uint32_t>();
    s.base_degree = j.at("base_degree").get<std::uint32_t>();
    s.base_modulus = j.at("base_modulus").get<std::vector<std::uint32_t>>();
    for (const auto& l : j.at("levels"))
      s.level_moduli.emplace_back(l.at("m0").get<std::vector<std::uint32_t>>(),
                                  l.at("m1").get<std::vector<std::uint32_t>>());
    return s;
  } catch (const Json::exception& e) {
    throw VerificationError(std::string("malformed tower spec: ") + e.what());
  }
}

Json to_json(const std::vector<FieldElem>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_coord_string(x));
  return out;
}

std::vector<FieldElem> elems_from_json(const TowerPtr& tower, const Json& j) {
  if (!j.is_array()) throw VerificationError("expected an array of field elements");
  std::vector<FieldElem> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw VerificationError("field elements are coordinate strings");
    out.push_back(from_coord_string(tower, x.get<std::string>()));
  }
  return out;
}

Json to_json(const FqMatrix& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

FqMatrix matrix_from_json(const TowerPtr& tower, const Json& j) {
  if (!j.is_array()) throw VerificationError("expected a matrix block");
  std::vector<std::vector<FieldElem>> rows;
  for (const auto& r : j) rows.push_back(elems_from_json(tower, r));
  const int cols = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  FqMatrix m(tower, static_cast<int>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != cols) throw VerificationError("ragged matrix block");
    for (int c = 0; c < cols; ++c) m(static_cast<int>(i), c) = rows[i][c];
  }
  return m;
}

Json to_json(const WeylLabel& l) {
  return {{"a", to_json(l.w.a_part())}, {"b", to_json(l.w.b_part())}, {"k", l.k}};
}

WeylLabel weyl_label_from_json(const TowerPtr& tower, const Json& j) {
  try {
    return {SympVector::from_ab(elems_from_json(tower, j.at("a")), elems_from_json(tower, j.at("b"))),
            j.at("k").get<std::uint32_t>()};
  } catch (const Json::exception& e) {
    throw VerificationError(std::string("malformed Weyl label: ") + e.what());
  }
}

Json to_json(const BasisSet& b) {
  std::vector<std::vector<FieldElem>> cols;
  for (const auto& v : b.vectors()) cols.push_back(v.coords());
  return {{"N", b.N()},
          {"T", b.T()},
          {"source", b.source()},
          {"vectors", to_json(FqMatrix::from_columns(b.tower(), 2 * b.N(), cols))}};
}

BasisSet basis_from_json(const TowerPtr& tower, const Json& j) {
  try {
    const int N = j.at("N").get<int>(), T = j.at("T").get<int>();
    const auto m = matrix_from_json(tower, j.at("vectors"));
    if (m.rows() != 2 * N || m.cols() != 2 * N) throw VerificationError("basis block must be 2N x 2N");
    std::vector<SympVector> v;
    for (int c = 0; c < m.cols(); ++c) v.emplace_back(tower, m.column(c));
    return BasisSet(N, T, tower, std::move(v), j.at("source").get<std::string>());
  } catch (const Json::exception& e) {
    throw VerificationError(std::string("malformed basis: ") + e.what());
  }
}

Json to_json(const ConditionReport& r) {
  Json subsets = Json::array(), pairs = Json::array();
  for (const auto& s : r.failed_subsets) subsets.push_back(s);
  for (const auto& [i, j] : r.failed_pairs) pairs.push_back({i, j});
  return {{"n", r.n},
          {"t", r.t},
          {"independent", r.independent},
          {"subsets_checked", r.subsets_checked},
          {"pairs_checked", r.pairs_checked},
          {"failed_subsets", subsets},
          {"failed_pairs", pairs},
          {"notes", r.notes},
          {"ok", r.ok()}};
}

Json to_json(const QueryMessage& m) {
  return {{"server", m.server}, {"qx", to_json(m.qx)}, {"qz", to_json(m.qz)}, {"tick", m.tick}};
}

QueryMessage query_message_from_json(const TowerPtr& tower, const Json& j) {
  return {j.at("server").get<int>(), elems_from_json(tower, j.at("qx")),
          elems_from_json(tower, j.at("qz")), j.at("tick").get<std::uint64_t>()};
}

Json to_json(const AnswerMessage& m) {
  return {{"server", m.server}, {"action", to_json(m.action)}, {"tick", m.tick}};
}

AnswerMessage answer_message_from_json(const TowerPtr& tower, const Json& j) {
  return {j.at("server").get<int>(), weyl_label_from_json(tower, j.at("action")),
          j.at("tick").get<std::uint64_t>()};
}

Json instance_header(const ProtocolInstance& inst) {
  return {{"id", inst.id()},
          {"N", inst.N()},
          {"T", inst.T()},
          {"requested_T", inst.requested_T()},
          {"F", inst.F()},
          {"q", inst.tower()->checked_order()},
          {"tower", to_json(inst.tower()->spec())},
          {"basis", to_json(inst.basis())},
          {"verification", to_json(inst.report())}};
}

Json to_json(const Transcript& t, const ProtocolInstance& inst) {
  Json servers = Json::array();
  for (const auto& s : t.servers)
    servers.push_back({{"server", s.server + 1},
                       {"qx", to_json(s.qx)},
                       {"qz", to_json(s.qz)},
                       {"answer", to_json(s.answer)},
                       {"query_time", s.query_time},
                       {"answer_time", s.answer_time}});
  Json out = {{"instance", instance_header(inst)},
              {"k", t.k},
              {"R", to_json(t.R)},
              {"servers", servers},
              {"outcome", to_json(t.outcome)},
              {"decoded", to_json(t.decoded)},
              {"backend", backend_name(t.backend)},
              {"timing", {{"logical_finish", t.finish_time}, {"messages", t.messages}}}};
  if (t.dense_leakage) out["dense_leakage"] = *t.dense_leakage;
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qpir
