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

// JSON encodings for towers, bases, messages and transcripts.
//
// Field elements are coordinate strings (see to_coord_string) and matrices
// are arrays of rows. Object keys come out sorted, so a fixed input always
// produces the same bytes.

#include <json.hpp>
#include <string>
#include <vector>

#include "qpir/network.hpp"
#include "qpir/protocol.hpp"

namespace qpir {

using Json = nlohmann::json;

Json to_json(const TowerSpec& spec);
TowerSpec tower_spec_from_json(const Json& j);

Json to_json(const std::vector<FieldElem>& v);
std::vector<FieldElem> elems_from_json(const TowerPtr& tower, const Json& j);

Json to_json(const FqMatrix& m);
FqMatrix matrix_from_json(const TowerPtr& tower, const Json& j);

/// {"a": [...], "b": [...], "k": phase exponent}.
Json to_json(const WeylLabel& l);
WeylLabel weyl_label_from_json(const TowerPtr& tower, const Json& j);

/// Columns of the block are v_1..v_{2N}.
Json to_json(const BasisSet& b);
BasisSet basis_from_json(const TowerPtr& tower, const Json& j);

Json to_json(const ConditionReport& r);

Json to_json(const QueryMessage& m);
QueryMessage query_message_from_json(const TowerPtr& tower, const Json& j);
Json to_json(const AnswerMessage& m);
AnswerMessage answer_message_from_json(const TowerPtr& tower, const Json& j);

/// Instance header: N, T, F, tower spec, basis block, verification report.
Json instance_header(const ProtocolInstance& inst);
Json to_json(const Transcript& t, const ProtocolInstance& inst);

/// Two-space indentation plus a trailing newline.
std::string dump(const Json& j);

}  // namespace qpir
