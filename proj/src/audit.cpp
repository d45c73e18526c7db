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

#include "qpir/audit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "qpir/error.hpp"

namespace qpir {

namespace {

constexpr double kClusterTol = 1e-12;
constexpr std::size_t kPairwiseReps = 64;

// q^e as a double, or +inf once it passes 2^62.
double count_points(const TowerPtr& tower, double exponent) {
  const double bits = tower->log2_order() * exponent;
  return bits > 62 ? HUGE_VAL : std::pow(2.0, bits);
}

// Fills `out` with the digits of x in base |els|.
void digits_to_elems(std::uint64_t x, const std::vector<FieldElem>& els, std::vector<FieldElem>& out) {
  for (auto& e : out) {
    e = els[x % els.size()];
    x /= els.size();
  }
}

std::vector<FieldElem> compose_files(const std::vector<FieldElem>& target, int k,
                                     const std::vector<FieldElem>& others, int L, int F) {
  std::vector<FieldElem> m;
  m.reserve(std::size_t(L) * F);
  std::size_t o = 0;
  for (int f = 1; f <= F; ++f) {
    if (f == k)
      m.insert(m.end(), target.begin(), target.end());
    else
      for (int i = 0; i < L; ++i) m.push_back(others[o++]);
  }
  return m;
}

double entropy_of_counts(const std::unordered_map<std::string, std::uint64_t>& counts,
                         std::uint64_t total) {
  double s = 0;
  for (const auto& [key, c] : counts) s += double(c) * std::log2(double(c));
  return std::log2(double(total)) - s / double(total);
}

}  // namespace

Decoder drop_first_coefficient_decoder() {
  return [](const CosetLabel& l, const ProtocolInstance& inst) {
    auto c = user_decode(l, inst);
    if (!c.empty()) c.front() = inst.tower()->zero();
    return c;
  };
}

// ------------------------------------------------------------------- errors

double retrieval_error(const ProtocolInstance& inst, int k, const std::vector<FieldElem>& m,
                       const FqMatrix& R, Backend backend, const Decoder& decoder) {
  const auto decode = [&](const CosetLabel& l) {
    return decoder ? decoder(l, inst) : user_decode(l, inst);
  };
  const auto target = file_block(m, k, inst.file_length());
  const auto query = user_query(k, inst, R);
  std::vector<WeylLabel> answers;
  for (int s = 0; s < inst.N(); ++s) answers.push_back(server_encode(query.x_row(s), query.z_row(s), m));
  const auto joint = assemble_answers(inst.tower(), answers);

  double phase_err = 0;
  CosetLabel phase_label;
  if (backend != Backend::kDense) {
    phase_label = phase_space_measure(phase_space_apply(initial_coset_state(inst.stabilizer()), joint));
    phase_err = decode(phase_label) == target ? 0.0 : 1.0;
    if (backend == Backend::kPhaseSpace) return phase_err;
  }
  const auto& fam = inst.dense_family();
  const auto rho = apply_weyl(fam.context(), inst.dense_initial_state(), joint);
  const auto dist = measure_pvm(rho, fam);
  const auto& cs = inst.stabilizer()->cosets();
  double ok = 0;
  for (std::uint64_t l = 0; l < dist.size(); ++l)
    if (dist[l] > 1e-15 && decode(cs.label_at(l)) == target) ok += dist[l];
  const double dense_err = std::clamp(1.0 - ok, 0.0, 1.0);
  if (backend == Backend::kBoth) {
    if (std::abs(dense_err - phase_err) > 1e-9 || dist[cs.label_index(phase_label)] < 1 - 1e-9)
      throw BackendDisagreement("phase-space and dense error probabilities differ");
  }
  return dense_err < 1e-12 ? 0.0 : dense_err;
}

ErrorAudit error_probability(const ProtocolInstance& inst, const AuditPlan& plan,
                             const Decoder& decoder) {
  ErrorAudit out;
  out.backend = backend_name(plan.error_backend);
  const int L = inst.file_length(), F = inst.F();
  const int mlen = L * F, rlen = 2 * inst.T() * L * F;
  const double total = F * count_points(inst.tower(), mlen + rlen);
  const auto els = inst.tower()->elements();
  std::vector<FieldElem> m(mlen);
  FqMatrix R(inst.tower(), 2 * inst.T(), L * F);
  std::vector<FieldElem> rflat(rlen);
  double sum = 0;
  auto visit = [&](int k) {
    for (int i = 0; i < R.rows(); ++i)
      for (int j = 0; j < R.cols(); ++j) R(i, j) = rflat[std::size_t(i) * R.cols() + j];
    const double e = retrieval_error(inst, k, m, R, plan.error_backend, decoder);
    out.worst = std::max(out.worst, e);
    out.failures += e > 0;
    sum += e;
    ++out.points;
  };
  if (total <= double(plan.exhaustive_limit)) {
    out.exhaustive = true;
    const auto per_m = static_cast<std::uint64_t>(count_points(inst.tower(), mlen));
    const auto per_r = static_cast<std::uint64_t>(count_points(inst.tower(), rlen));
    for (int k = 1; k <= F; ++k)
      for (std::uint64_t a = 0; a < per_m; ++a) {
        digits_to_elems(a, els, m);
        for (std::uint64_t b = 0; b < per_r; ++b) {
          digits_to_elems(b, els, rflat);
          visit(k);
        }
      }
  } else {
    std::mt19937_64 rng(plan.seed);
    std::uniform_int_distribution<int> pick_k(1, F);
    for (std::uint64_t i = 0; i < plan.error_samples; ++i) {
      const int k = pick_k(rng);
      for (auto& x : m) x = inst.tower()->random(rng);
      for (auto& x : rflat) x = inst.tower()->random(rng);
      visit(k);
    }
  }
  out.average = out.points ? sum / double(out.points) : 0.0;
  return out;
}

// ----------------------------------------------------------- server secrecy

ServerSecrecyAudit server_secrecy(const ProtocolInstance& inst, const AuditPlan& plan,
                                  Ancilla ancilla) {
  ServerSecrecyAudit out;
  if (!inst.dense_available()) {
    out.skipped = true;
    out.reason = "q^N exceeds the dense limit";
    return out;
  }
  const auto& fam = inst.dense_family();
  DensityMatrix rho0;
  try {
    rho0 = ancilla == Ancilla::kMixed ? inst.dense_initial_state() : pure_ancilla_initial_state(fam);
  } catch (const PreconditionError& e) {
    out.skipped = true;
    out.reason = e.what();
    return out;
  }
  const auto& ctx = fam.context();
  const auto& tower = inst.tower();
  const auto els = tower->elements();
  const int L = inst.file_length(), F = inst.F();
  const int others_len = L * (F - 1);
  const double alphabet = count_points(tower, others_len);
  const bool full = alphabet <= double(plan.ensemble_limit);
  out.full_alphabet = full;
  const std::uint64_t members =
      full ? static_cast<std::uint64_t>(alphabet) : plan.ensemble_limit;
  std::mt19937_64 rng(plan.seed ^ 0x5eedULL);

  for (int k = 1; k <= F; ++k) {
    std::vector<FieldElem> target(L);
    for (auto& x : target) x = tower->random(rng);
    for (int qi = 0; qi < plan.secrecy_queries; ++qi) {
      const auto query = user_query(k, inst, random_randomness(inst, rng));
      SecrecyCase c;
      c.k = k;
      c.query = qi;
      c.members = members;
      std::vector<CMatrix> reps;
      std::vector<std::uint64_t> counts;
      std::vector<FieldElem> others(others_len);
      for (std::uint64_t x = 0; x < members; ++x) {
        if (full)
          digits_to_elems(x, els, others);
        else
          for (auto& e : others) e = tower->random(rng);
        const auto m = compose_files(target, k, others, L, F);
        const SympVector w(tower, query.q * m);
        CMatrix rho = apply_weyl(ctx, rho0, w).matrix();
        std::size_t r = 0;
        for (; r < reps.size(); ++r)
          if ((reps[r] - rho).norm() < kClusterTol) break;
        if (r == reps.size()) {
          reps.push_back(std::move(rho));
          counts.push_back(0);
        }
        ++counts[r];
      }
      std::vector<std::pair<double, const CMatrix*>> ens;
      for (std::size_t r = 0; r < reps.size(); ++r)
        ens.emplace_back(double(counts[r]) / double(members), &reps[r]);
      c.holevo = std::max(0.0, holevo_information(ens));
      c.pairwise_exact = reps.size() <= kPairwiseReps;
      for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i + 1; j < reps.size(); ++j) {
          if (!c.pairwise_exact && i > 0) break;
          c.max_trace_distance = std::max(c.max_trace_distance, trace_distance(reps[i], reps[j]));
        }
      out.max_holevo = std::max(out.max_holevo, c.holevo);
      out.max_trace_distance = std::max(out.max_trace_distance, c.max_trace_distance);
      out.cases.push_back(c);
    }
  }
  return out;
}

// ------------------------------------------------------------- user secrecy

UserSecrecyAudit user_secrecy(const ProtocolInstance& inst, const AuditPlan& plan,
                              Randomness randomness) {
  UserSecrecyAudit out;
  const int N = inst.N(), T = inst.T(), L = inst.file_length(), F = inst.F();
  out.singular_subsets = singular_server_blocks(inst.basis().D1(), N, T);
  out.structural_ok = out.singular_subsets.empty();

  const auto& tower = inst.tower();
  const int rlen = 2 * T * L * F;
  const double space = randomness == Randomness::kZero ? 1.0 : count_points(tower, rlen);
  out.exact = randomness == Randomness::kZero || plan.exact_user;
  if (out.exact && space > double(plan.enumeration_limit)) {
    out.skipped = true;
    out.reason = "R space over limit";
    return out;
  }
  const std::uint64_t per_k =
      out.exact ? static_cast<std::uint64_t>(space) : std::max<std::uint64_t>(1, plan.user_samples / F);

  std::vector<std::vector<int>> subs;
  for (int size = 1; size <= T; ++size)
    for (auto& s : subsets(N, size)) subs.push_back(std::move(s));
  // counts[subset][k] and the marginal over k.
  std::vector<std::vector<std::unordered_map<std::string, std::uint64_t>>> counts(
      subs.size(), std::vector<std::unordered_map<std::string, std::uint64_t>>(F));
  std::vector<std::unordered_map<std::string, std::uint64_t>> marginal(subs.size());

  const auto els = tower->elements();
  const auto D1 = inst.basis().D1(), D2 = inst.basis().D2();
  std::vector<FqMatrix> offsets;
  for (int k = 1; k <= F; ++k) offsets.push_back(D2 * selection_matrix(k, L, F, tower));
  FqMatrix R(tower, 2 * T, L * F);
  std::vector<FieldElem> rflat(rlen, tower->zero());
  std::mt19937_64 rng(plan.seed ^ 0x05e5ULL);
  std::string key;
  for (int k = 1; k <= F; ++k) {
    for (std::uint64_t x = 0; x < per_k; ++x) {
      if (randomness == Randomness::kUniform) {
        if (out.exact)
          digits_to_elems(x, els, rflat);
        else
          for (auto& e : rflat) e = tower->random(rng);
      }
      for (int i = 0; i < R.rows(); ++i)
        for (int j = 0; j < R.cols(); ++j) R(i, j) = rflat[std::size_t(i) * R.cols() + j];
      const FqMatrix Q = D1 * R + offsets[k - 1];
      for (std::size_t si = 0; si < subs.size(); ++si) {
        key.clear();
        for (int s : subs[si])
          for (int row : {s, N + s})
            for (int j = 0; j < Q.cols(); ++j) {
              const auto idx = static_cast<std::uint32_t>(Q(row, j).index());
              key.append(reinterpret_cast<const char*>(&idx), sizeof idx);
            }
        ++counts[si][k - 1][key];
        ++marginal[si][key];
      }
    }
  }
  out.points = per_k * F;
  for (std::size_t si = 0; si < subs.size(); ++si) {
    double cond = 0;
    for (int k = 0; k < F; ++k) cond += entropy_of_counts(counts[si][k], per_k) / F;
    const double mi = entropy_of_counts(marginal[si], per_k * F) - cond;
    out.subsets.push_back({subs[si], std::abs(mi) < 1e-14 ? 0.0 : mi});
    if (static_cast<int>(subs[si].size()) == T) out.max_t_subset = std::max(out.max_t_subset, mi);
  }
  return out;
}

// ------------------------------------------------------------------- report

bool AuditReport::server_ok() const {
  return server.skipped || (server.max_holevo <= 1e-9 && server.max_trace_distance <= 1e-10);
}

bool AuditReport::user_ok() const {
  // A plug-in estimate from samples is biased upward, so only an exact
  // enumeration can fail on its own; the structural certificate always counts.
  return user.structural_ok && (user.skipped || !user.exact || user.max_t_subset <= 1e-9);
}

bool AuditReport::all_pass() const { return error_ok() && server_ok() && user_ok() && converse.pass; }

AuditReport audit_instance(const ProtocolInstance& inst, const AuditPlan& plan) {
  AuditReport r;
  r.instance_id = inst.id();
  r.verified = inst.verified();
  r.plan = plan;
  r.error = error_probability(inst, plan);
  r.server = server_secrecy(inst, plan);
  r.user = user_secrecy(inst, plan);
  r.costs = rate_and_costs(inst.N(), inst.T(), inst.F(), inst.tower()->log2_order());
  r.capacity = quantum_capacity(inst.N(), inst.requested_T());
  // Exact certificates (trace distance 0, invertible D_{1,π}) pin the
  // secrecy leaks to zero, so round-off does not enter the converse.
  const double beta =
      r.server.skipped || r.server.max_trace_distance <= 1e-10 ? 0.0 : r.server.max_holevo;
  const double gamma =
      r.user.structural_ok && (r.user.skipped || !r.user.exact || r.user.max_t_subset <= 1e-12)
          ? 0.0
          : std::max(0.0, r.user.max_t_subset);
  r.converse = converse_check({r.costs.log2_M, r.costs.log2_dim, inst.N(), inst.T(), inst.F(),
                               r.error.worst, beta, gamma});
  return r;
}

Json to_json(const AuditReport& r) {
  Json server_cases = Json::array();
  for (const auto& c : r.server.cases)
    server_cases.push_back({{"k", c.k},
                            {"query", c.query},
                            {"members", c.members},
                            {"holevo", c.holevo},
                            {"max_trace_distance", c.max_trace_distance},
                            {"pairwise_exact", c.pairwise_exact}});
  Json user_subsets = Json::array();
  for (const auto& s : r.user.subsets) {
    std::vector<int> one_based;
    for (int x : s.servers) one_based.push_back(x + 1);
    user_subsets.push_back({{"servers", one_based}, {"mutual_information", s.mutual_information}});
  }
  Json singular = Json::array();
  for (const auto& s : r.user.singular_subsets) singular.push_back(s);
  auto rational = [](const Rational& x) {
    return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
  };
  return {
      {"instance", r.instance_id},
      {"verified", r.verified},
      {"plan",
       {{"seed", r.plan.seed},
        {"exhaustive_limit", r.plan.exhaustive_limit},
        {"error_samples", r.plan.error_samples},
        {"error_backend", backend_name(r.plan.error_backend)},
        {"secrecy_queries", r.plan.secrecy_queries},
        {"ensemble_limit", r.plan.ensemble_limit},
        {"exact_user", r.plan.exact_user},
        {"enumeration_limit", r.plan.enumeration_limit},
        {"user_samples", r.plan.user_samples}}},
      {"error",
       {{"worst", r.error.worst},
        {"average", r.error.average},
        {"points", r.error.points},
        {"failures", r.error.failures},
        {"exhaustive", r.error.exhaustive},
        {"backend", r.error.backend},
        {"pass", r.error_ok()}}},
      {"server_secrecy",
       {{"skipped", r.server.skipped},
        {"reason", r.server.reason},
        {"full_alphabet", r.server.full_alphabet},
        {"max_holevo", r.server.max_holevo},
        {"max_trace_distance", r.server.max_trace_distance},
        {"cases", server_cases},
        {"pass", r.server_ok()}}},
      {"user_secrecy",
       {{"skipped", r.user.skipped},
        {"reason", r.user.reason},
        {"exact", r.user.exact},
        {"points", r.user.points},
        {"subsets", user_subsets},
        {"max_t_subset", r.user.max_t_subset},
        {"structural_certificate", r.user.structural_ok},
        {"singular_subsets", singular},
        {"pass", r.user_ok()}}},
      {"costs",
       {{"rate", rational(r.costs.rate)},
        {"log2_M", r.costs.log2_M},
        {"log2_U", r.costs.log2_U},
        {"log2_D", r.costs.log2_D},
        {"capacity", rational(r.capacity)}}},
      {"converse",
       {{"hypothesis_ok", r.converse.hypothesis_ok},
        {"pass", r.converse.pass},
        {"lhs", r.converse.lhs},
        {"rhs", r.converse.rhs},
        {"slack", r.converse.slack},
        {"note", r.converse.note}}},
      {"pass", r.all_pass()},
  };
}

std::string format_report(const AuditReport& r) {
  std::ostringstream os;
  auto row = [&](const std::string& name, const std::string& value, bool ok) {
    os << std::left << std::setw(22) << name << std::setw(40) << value << " " << (ok ? "ok" : "FAIL") << "\n";
  };
  auto num = [](double x) {
    std::ostringstream s;
    s << std::setprecision(6) << x;
    return s.str();
  };
  os << "instance " << r.instance_id << (r.verified ? "" : " (UNVERIFIED BASIS)") << "\n";
  row("P_err worst/avg", num(r.error.worst) + " / " + num(r.error.average) + " over " +
                             std::to_string(r.error.points) + (r.error.exhaustive ? " (all)" : " (sampled)"),
      r.error_ok());
  if (r.server.skipped)
    row("S_serv", "skipped: " + r.server.reason, true);
  else
    row("S_serv holevo/tdist", num(r.server.max_holevo) + " / " + num(r.server.max_trace_distance),
        r.server_ok());
  row("D_1,pi certificate", r.user.structural_ok ? "all invertible" : "singular blocks", r.user.structural_ok);
  if (r.user.skipped)
    row("S_user", "skipped: " + r.user.reason, r.user_ok());
  else
    row("S_user max", num(r.user.max_t_subset) + (r.user.exact ? " (exact)" : " (sampled, biased)"), r.user_ok());
  row("rate", std::to_string(r.costs.rate.numerator()) + "/" + std::to_string(r.costs.rate.denominator()),
      true);
  row("converse", "slack " + num(r.converse.slack) + ", " + r.converse.note, r.converse.pass);
  os << (r.all_pass() ? "ALL PASS" : "FAILED") << "\n";
  return os.str();
}

}  // namespace qpir
