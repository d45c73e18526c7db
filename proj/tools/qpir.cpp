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

// qpir: setup | run | audit | bounds | verify
//
// Exit codes: 0 success, 1 a certificate or retrieval failed, 2 bad input.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "qpir/error.hpp"
#include "qpir/harness.hpp"

using namespace qpir;

namespace {

void emit(const std::string& text, const std::string& out) {
  if (out.empty())
    std::cout << text;
  else
    write_text_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric T-private quantum PIR simulator"};
  app.require_subcommand(1);

  // setup
  auto* setup = app.add_subcommand("setup", "build and verify an instance bundle");
  std::string config_path, out;
  std::optional<int> oN, oT, oF, o_chain;
  std::optional<std::uint64_t> o_base, o_seed;
  std::optional<std::string> o_source, o_backend, o_variant;
  setup->add_option("--config", config_path, "JSON run configuration");
  setup->add_option("-N", oN, "servers");
  setup->add_option("-T", oT, "colluding servers");
  setup->add_option("-F", oF, "files");
  setup->add_option("--base-order", o_base, "order of the base field");
  setup->add_option("--chain", o_chain, "number of quadratic extensions");
  setup->add_option("--source", o_source, "tower | search | file");
  setup->add_option("--variant", o_variant, "repaired | unmodified");
  setup->add_option("--seed", o_seed, "seed for the basis search and runs");
  setup->add_option("--backend", o_backend, "phase | dense | both");
  setup->add_option("--out", out, "write the bundle here instead of stdout");

  // run
  auto* run = app.add_subcommand("run", "retrieve one file");
  std::string bundle_path, files_path, transport = "inproc";
  int k = 1;
  std::uint64_t run_seed = 1;
  run->add_option("--bundle", bundle_path, "instance bundle")->required();
  run->add_option("-k", k, "file index, 1-based")->required();
  auto* files_opt = run->add_option("--files", files_path, "JSON {\"files\": [...]} with F*L elements");
  run->add_flag("--random", "draw files from the seed (default)")->excludes(files_opt);
  run->add_option("--seed", run_seed, "seed for files and randomness");
  run->add_option("--backend", o_backend, "phase | dense | both");
  run->add_option("--transport", transport, "inproc | serialized")
      ->check(CLI::IsMember({"inproc", "serialized"}));
  run->add_option("--out", out, "write the transcript here instead of stdout");

  // audit
  auto* audit = app.add_subcommand("audit", "error, secrecy and cost certificates");
  std::optional<std::uint64_t> samples;
  bool exact = false, as_json = false;
  audit->add_option("--bundle", bundle_path, "instance bundle")->required();
  audit->add_option("--seed", o_seed, "audit seed");
  audit->add_option("--backend", o_backend, "backend for the error audit");
  auto* exact_flag = audit->add_flag("--exact", exact, "force exact user-secrecy enumeration");
  audit->add_option("--samples", samples, "sample user secrecy with this many draws")->excludes(exact_flag);
  audit->add_flag("--json", as_json, "print JSON instead of a table");
  audit->add_option("--out", out, "write the report here instead of stdout");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "capacities, rates and converse functions");
  BoundsQuery bq;
  std::optional<double> log2_M;
  bounds->add_option("-N", bq.N)->required();
  bounds->add_option("-T", bq.T)->required();
  bounds->add_option("-F", bq.F);
  bounds->add_flag("--f-limit", bq.f_limit, "classical capacities for F -> infinity");
  bounds->add_option("--log2-q", bq.log2_q);
  bounds->add_option("--p-err", bq.p_err);
  bounds->add_option("--beta", bq.beta);
  bounds->add_option("--gamma", bq.gamma);
  bounds->add_option("--log2-M", log2_M, "message size in bits for the converse");
  bounds->add_flag("--json", as_json, "print JSON instead of a table");

  // verify
  auto* verify = app.add_subcommand("verify", "re-check the conditions stored in a bundle");
  verify->add_option("--bundle", bundle_path, "instance bundle")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (setup->parsed()) {
      RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::from_json(read_json_file(config_path));
      if (oN) cfg.N = *oN;
      if (oT) cfg.T = *oT;
      if (oF) cfg.F = *oF;
      if (o_base) cfg.field.base_order = *o_base;
      if (o_chain) cfg.field.chain_length = *o_chain;
      if (o_source) cfg.basis.source = *o_source;
      if (o_variant) cfg.basis.variant = *o_variant;
      if (o_seed) cfg.basis.seed = cfg.seed = *o_seed;
      if (o_backend) cfg.backend = parse_backend(*o_backend);
      if (out.empty()) out = cfg.out;
      emit(dump(cmd_setup(cfg)), out);
      return 0;
    }
    if (run->parsed()) {
      const auto bundle = read_json_file(bundle_path);
      std::optional<std::vector<FieldElem>> files;
      if (!files_path.empty()) {
        const auto tower = FieldTower::from_spec(tower_spec_from_json(bundle.at("instance").at("tower")));
        const auto j = read_json_file(files_path);
        files = elems_from_json(tower, j.contains("files") ? j["files"] : j);
      }
      std::optional<Backend> be;
      if (o_backend) be = parse_backend(*o_backend);
      const auto r = cmd_run(bundle, k, files, run_seed, be,
                             transport == "serialized" ? Transport::kSerialized : Transport::kInProcess);
      emit(dump(r.json), out);
      if (!r.correct) std::cerr << "retrieval returned the wrong block\n";
      return r.correct ? 0 : 1;
    }
    if (audit->parsed()) {
      const auto bundle = read_json_file(bundle_path);
      AuditPlan plan = bundle.contains("config") ? RunConfig::from_json(bundle["config"]).audit : AuditPlan{};
      if (o_seed) plan.seed = *o_seed;
      if (o_backend) plan.error_backend = parse_backend(*o_backend);
      if (exact) plan.exact_user = true;
      if (samples) {
        plan.exact_user = false;
        plan.user_samples = *samples;
      }
      const auto report = cmd_audit(bundle, plan);
      emit(as_json ? dump(to_json(report)) : format_report(report), out);
      if (exact && report.user.skipped) {
        std::cerr << "error: exact user secrecy over the guard: " << report.user.reason << "\n";
        return 2;
      }
      return report.all_pass() ? 0 : 1;
    }
    if (bounds->parsed()) {
      bq.log2_M = log2_M;
      const auto j = cmd_bounds(bq);
      std::cout << (as_json ? dump(j) : format_bounds(j));
      return 0;
    }
    if (verify->parsed()) {
      const auto inst = load_bundle(read_json_file(bundle_path), false);
      std::cout << dump(to_json(inst.report()));
      std::cout << (inst.verified() ? "verified\n" : "NOT verified\n");
      return inst.verified() ? 0 : 1;
    }
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
