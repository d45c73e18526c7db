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

#include "qpir/harness.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qpir/error.hpp"

namespace qpir {

namespace {

constexpr const char* kBundleFormat = "qpir-bundle/1";

std::string rational_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

HankelVariant parse_variant(const std::string& v) {
  if (v == "repaired") return HankelVariant::kRepaired;
  if (v == "unmodified") return HankelVariant::kUnmodified;
  throw PreconditionError("config: basis.variant must be 'repaired' or 'unmodified'");
}

}  // namespace

// ---------------------------------------------------------------- RunConfig

void RunConfig::validate() const {
  if (N < 2) throw PreconditionError("config: N must be at least 2");
  if (T < 1 || T >= N) throw PreconditionError("config: T must satisfy 1 <= T < N");
  if (F < 2) throw PreconditionError("config: F must be at least 2");
  split_prime_power(field.base_order);
  if (field.chain_length < 0) throw PreconditionError("config: field.chain_length must be >= 0");
  const int t = native_collusion(N, T);
  if (basis.source == "tower") {
    if (field.chain_length < N + 2 * t - 2)
      throw PreconditionError("config: tower source needs chain_length >= N + 2T - 2 = " +
                              std::to_string(N + 2 * t - 2));
    parse_variant(basis.variant);
  } else if (basis.source == "file") {
    if (basis.path.empty()) throw PreconditionError("config: basis.path is required for source 'file'");
  } else if (basis.source != "search") {
    throw PreconditionError("config: basis.source must be tower, search or file");
  }
  if (basis.max_attempts < 1) throw PreconditionError("config: basis.max_attempts must be positive");
}

RunConfig RunConfig::from_json(const Json& j) {
  try {
    RunConfig c;
    c.N = j.value("N", c.N);
    c.T = j.value("T", c.T);
    c.F = j.value("F", c.F);
    if (j.contains("field")) {
      const auto& f = j["field"];
      c.field.base_order = f.value("base_order", c.field.base_order);
      c.field.chain_length = f.value("chain_length", c.field.chain_length);
    }
    if (j.contains("basis")) {
      const auto& b = j["basis"];
      c.basis.source = b.value("source", c.basis.source);
      c.basis.seed = b.value("seed", c.basis.seed);
      c.basis.variant = b.value("variant", c.basis.variant);
      c.basis.max_attempts = b.value("max_attempts", c.basis.max_attempts);
      c.basis.path = b.value("path", c.basis.path);
    }
    c.backend = parse_backend(j.value("backend", backend_name(c.backend)));
    c.seed = j.value("seed", c.seed);
    if (j.contains("audit")) {
      const auto& a = j["audit"];
      auto& p = c.audit;
      p.seed = a.value("seed", p.seed);
      p.exhaustive_limit = a.value("exhaustive_limit", p.exhaustive_limit);
      p.error_samples = a.value("error_samples", p.error_samples);
      p.error_backend = parse_backend(a.value("error_backend", backend_name(p.error_backend)));
      p.secrecy_queries = a.value("secrecy_queries", p.secrecy_queries);
      p.ensemble_limit = a.value("ensemble_limit", p.ensemble_limit);
      p.exact_user = a.value("exact_user", p.exact_user);
      p.enumeration_limit = a.value("enumeration_limit", p.enumeration_limit);
      p.user_samples = a.value("user_samples", p.user_samples);
    }
    c.out = j.value("out", c.out);
    return c;
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("config: ") + e.what());
  }
}

Json RunConfig::to_json() const {
  return {{"N", N},
          {"T", T},
          {"F", F},
          {"field", {{"base_order", field.base_order}, {"chain_length", field.chain_length}}},
          {"basis",
           {{"source", basis.source},
            {"seed", basis.seed},
            {"variant", basis.variant},
            {"max_attempts", basis.max_attempts},
            {"path", basis.path}}},
          {"backend", backend_name(backend)},
          {"seed", seed},
          {"audit",
           {{"seed", audit.seed},
            {"exhaustive_limit", audit.exhaustive_limit},
            {"error_samples", audit.error_samples},
            {"error_backend", backend_name(audit.error_backend)},
            {"secrecy_queries", audit.secrecy_queries},
            {"ensemble_limit", audit.ensemble_limit},
            {"exact_user", audit.exact_user},
            {"enumeration_limit", audit.enumeration_limit},
            {"user_samples", audit.user_samples}}},
          {"out", out}};
}

// ----------------------------------------------------------------- commands

TowerPtr build_tower(const FieldConfig& f) { return FieldTower::build(f.base_order, f.chain_length); }

BasisSet build_basis(const RunConfig& cfg, const TowerPtr& tower) {
  const int t = native_collusion(cfg.N, cfg.T);
  if (cfg.basis.source == "tower")
    return build_basis_tower(cfg.N, t, tower, parse_variant(cfg.basis.variant));
  if (cfg.basis.source == "search")
    return search_basis(cfg.N, t, tower, cfg.basis.seed, cfg.basis.max_attempts);
  const auto j = read_json_file(cfg.basis.path);
  const auto& block = j.contains("basis") ? j["basis"] : j;
  auto b = basis_from_json(tower, block);
  if (b.N() != cfg.N || b.T() != t) throw PreconditionError("basis file does not match N and T");
  return b;
}

Json cmd_setup(const RunConfig& cfg) {
  cfg.validate();
  const auto tower = build_tower(cfg.field);
  const auto inst = ProtocolInstance::create(build_basis(cfg, tower), cfg.F, cfg.backend, cfg.T);
  return {{"format", kBundleFormat}, {"config", cfg.to_json()}, {"instance", instance_header(inst)}};
}

ProtocolInstance load_bundle(const Json& bundle, bool require_verified) {
  if (bundle.value("format", std::string()) != kBundleFormat)
    throw VerificationError("not a qpir instance bundle");
  try {
    const auto& h = bundle.at("instance");
    const auto tower = FieldTower::from_spec(tower_spec_from_json(h.at("tower")));
    auto basis = basis_from_json(tower, h.at("basis"));
    const int F = h.at("F").get<int>();
    const int rT = h.value("requested_T", basis.T());
    const auto backend =
        parse_backend(bundle.contains("config") ? bundle["config"].value("backend", "phase") : "phase");
    auto inst = require_verified ? ProtocolInstance::create(std::move(basis), F, backend, rT)
                                 : ProtocolInstance::create_unchecked(std::move(basis), F, backend, rT);
    const bool claimed = h.at("verification").at("ok").get<bool>();
    if (claimed && !inst.verified())
      throw VerificationError("bundle claims a verified basis but verification fails");
    return inst;
  } catch (const Json::exception& e) {
    throw VerificationError(std::string("malformed bundle: ") + e.what());
  }
}

RunResult cmd_run(const Json& bundle, int k, const std::optional<std::vector<FieldElem>>& files,
                  std::uint64_t seed, std::optional<Backend> backend, Transport transport) {
  const auto inst = load_bundle(bundle, true);
  std::mt19937_64 rng(seed);
  const auto m = files ? *files : random_files(inst, rng);
  if (m.size() != std::size_t(inst.file_length()) * inst.F())
    throw MismatchError("files must hold F * 2(N - T) field elements");
  const auto R = random_randomness(inst, rng);
  RunOptions opts;
  opts.backend = backend;
  opts.transport = transport;
  RunResult out;
  out.transcript = run_protocol(inst, k, m, R, opts);
  out.target = file_block(m, k, inst.file_length());
  out.correct = out.transcript.decoded == out.target;
  out.json = to_json(out.transcript, inst);
  out.json["seed"] = seed;
  out.json["correct"] = out.correct;
  return out;
}

AuditReport cmd_audit(const Json& bundle, const AuditPlan& plan) {
  return audit_instance(load_bundle(bundle, false), plan);
}

Json cmd_bounds(const BoundsQuery& q) {
  const int t = native_collusion(q.N, q.T);
  const auto cap = quantum_capacity(q.N, q.T);
  const auto costs = rate_and_costs(q.N, t, q.F, q.log2_q);
  Json classical;
  double sym_t = 0;
  for (auto v : {ClassicalVariant::kPir, ClassicalVariant::kSymmetric, ClassicalVariant::kTPrivate,
                 ClassicalVariant::kSymmetricTPrivate}) {
    const double c = q.f_limit ? classical_capacity_limit(q.N, q.T, v) : classical_capacity(q.N, q.T, q.F, v);
    classical[variant_name(v)] = c;
    if (v == ClassicalVariant::kSymmetricTPrivate) sym_t = c;
  }
  const double leak = 2.0 * std::sqrt(2.0 * q.F * q.gamma);
  const double log2_M = q.log2_M.value_or(costs.log2_M);
  Json functions = {{"h2(p_err)", h2(q.p_err)},
                    {"eta0(2sqrt(2F gamma))", eta0(leak)},
                    {"f", leak <= 1 ? Json(bound_f(q.p_err, q.beta, q.gamma, q.F)) : Json("undefined")},
                    {"g", leak <= 1 ? Json(bound_g(log2_M, q.gamma, q.F)) : Json("undefined")}};
  const auto cert = converse_check({log2_M, q.log2_q, q.N, t, q.F, q.p_err, q.beta, q.gamma});
  return {{"N", q.N},
          {"T", q.T},
          {"F", q.F},
          {"F_limit", q.f_limit},
          {"native_T", t},
          {"quantum_capacity", rational_string(cap)},
          {"quantum_capacity_value", boost::rational_cast<double>(cap)},
          {"protocol_rate", rational_string(costs.rate)},
          {"classical", classical},
          {"gap_vs_symmetric_t_private", boost::rational_cast<double>(cap) - sym_t},
          {"functions", functions},
          {"converse",
           {{"hypothesis_ok", cert.hypothesis_ok},
            {"pass", cert.pass},
            {"lhs", cert.lhs},
            {"rhs", cert.rhs},
            {"slack", cert.slack},
            {"note", cert.note}}}};
}

std::string format_bounds(const Json& b) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  os << "N=" << b["N"] << " T=" << b["T"] << " F=" << (b["F_limit"].get<bool>() ? "inf" : b["F"].dump())
     << "\n";
  os << std::left << std::setw(34) << "quantum capacity" << b["quantum_capacity"].get<std::string>() << " ("
     << b["quantum_capacity_value"].get<double>() << ")\n";
  os << std::setw(34) << "protocol rate" << b["protocol_rate"].get<std::string>() << "\n";
  for (const auto& [name, v] : b["classical"].items())
    os << std::setw(34) << ("classical " + name) << v.get<double>() << "\n";
  os << std::setw(34) << "gap vs sym. T-private" << b["gap_vs_symmetric_t_private"].get<double>() << "\n";
  for (const auto& [name, v] : b["functions"].items())
    os << std::setw(34) << name << (v.is_number() ? std::to_string(v.get<double>()) : v.get<std::string>())
       << "\n";
  const auto& c = b["converse"];
  os << std::setw(34) << "converse" << c["note"].get<std::string>();
  if (c["hypothesis_ok"].get<bool>()) os << " (slack " << c["slack"].get<double>() << ")";
  os << "\n";
  return os.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write " + path);
  out << text;
}

}  // namespace qpir
