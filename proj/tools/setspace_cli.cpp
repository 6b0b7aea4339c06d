/*
 * Copyright 2026 The setspace authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: run simulations, print register bounds, and drive
// the refutation, gluing, and witness-search pipelines.
//
// Exit codes: 0 success, 1 safety violation in a simulation, 2 bad
// configuration, 3 construction did not reach the expected outcome.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "setspace/bounds.hpp"
#include "setspace/checks.hpp"
#include "setspace/covering.hpp"
#include "setspace/json_io.hpp"

namespace fs = std::filesystem;
using namespace setspace;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitUnexpected = 3;

std::optional<fs::path> resolve_out(const std::string& flag) {
  if (!flag.empty()) return fs::path(flag);
  if (const char* env = std::getenv("SETSPACE_OUT"); env && *env)
    return fs::path(env);
  return std::nullopt;
}

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void dump_trace(const std::optional<fs::path>& out, const std::string& name,
                const Trace& trace) {
  if (!out) return;
  fs::create_directories(*out);
  std::ofstream f(*out / name);
  write_trace_jsonl(f, trace);
}

int cmd_run(const std::string& config_path, const std::string& out_flag,
            bool with_trace, std::uint64_t seed_override, bool have_seed) {
  RunConfig cfg = parse_run_config(load_config(config_path));
  if (have_seed) cfg.seed = seed_override;
  const auto out = resolve_out(out_flag);
  std::string summary = csv_row({"run", "schedule", "seed", "steps",
                                 "decisions", "truncated", "validity",
                                 "k_agreement"});
  bool violated = false;
  for (int i = 0; i < cfg.runs; ++i) {
    Schedule schedule = cfg.schedule;
    schedule.seed = cfg.schedule.seed + static_cast<std::uint64_t>(i);
    const auto inputs = cfg.inputs.empty()
                            ? seeded_inputs(cfg.params, cfg.seed + i)
                            : cfg.inputs;
    Trace trace = run(cfg.params, inputs, schedule);
    PropertyReport validity = check_validity(trace);
    PropertyReport agreement = check_k_agreement(trace, cfg.params.k);
    if (!validity.passed() || !agreement.passed()) violated = true;
    summary += csv_row({std::to_string(i), schedule_kind_name(schedule.kind),
                        std::to_string(schedule.seed),
                        std::to_string(trace.steps.size()),
                        std::to_string(trace.decisions.size()),
                        trace.truncated ? "1" : "0",
                        verdict_name(validity.verdict),
                        verdict_name(agreement.verdict)});
    if (with_trace)
      dump_trace(out, "run_" + std::to_string(i) + ".jsonl", trace);
  }
  std::cout << summary;
  if (out) {
    fs::create_directories(*out);
    std::ofstream f(*out / "summary.csv");
    f << summary;
  }
  return violated ? kExitViolation : kExitOk;
}

int cmd_bounds(int n, int k, int m, bool as_json) {
  BoundSet b = bounds(n, k, m);
  if (as_json) {
    std::cout << to_json(b).dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "n=" << n << " k=" << k << " m=" << m << "\n"
            << "repeated lower bound:        " << b.repeated_lower << "\n"
            << "repeated upper bound:        " << b.repeated_upper << "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", b.anon_oneshot_lower);
  std::cout << "anonymous one-shot lower:    " << buf << " (more than, so >= "
            << b.anon_oneshot_lower_strict << ")\n"
            << "anonymous repeated upper:    " << b.anon_repeated_upper
            << "\n";
  return kExitOk;
}

int cmd_refute(const std::string& config_path, const std::string& out_flag,
               std::size_t depth_cap, bool expect_stuck) {
  RunConfig cfg = parse_run_config(load_config(config_path));
  CoveringResult covering = build_covering(cfg.params, depth_cap);
  if (!covering.built) {
    std::cout << "stuck at stage " << covering.stuck_stage << ": "
              << covering.reason << "\n";
    return expect_stuck ? kExitOk : kExitUnexpected;
  }
  RefutationResult ref = splice_and_refute(cfg.params, covering, depth_cap);
  if (!ref.found) {
    std::cout << "stuck: " << ref.reason << "\n";
    return expect_stuck ? kExitOk : kExitUnexpected;
  }
  std::cout << "refuted: " << ref.outputs_at_violation.size()
            << " distinct outputs at instance " << ref.violation_instance
            << " (bound " << cfg.params.k << ")\n";
  dump_trace(resolve_out(out_flag), "refutation.jsonl", ref.trace);
  return expect_stuck ? kExitUnexpected : kExitOk;
}

int cmd_glue(const std::string& config_path, const std::string& out_flag,
             const std::vector<std::string>& sets, std::size_t depth_cap,
             bool expect_blocked) {
  RunConfig cfg = parse_run_config(load_config(config_path));
  std::vector<std::vector<Val>> value_sets;
  for (const std::string& s : sets) {
    std::vector<Val> vals;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');)
      vals.push_back(std::stoi(tok));
    value_sets.push_back(std::move(vals));
  }
  GluedResult glued = build_glued(cfg.params, value_sets, depth_cap);
  if (!glued.built) {
    std::cout << "blocked (";
    if (glued.blocked_stage < 0)
      std::cout << "pre-stage";
    else
      std::cout << "stage " << glued.blocked_stage;
    std::cout << "): " << glued.reason << "\n";
    return expect_blocked ? kExitOk : kExitUnexpected;
  }
  PropertyReport agreement = check_k_agreement(glued.final_trace,
                                               cfg.params.k);
  std::cout << "glued " << glued.groups.size() << " groups over "
            << glued.register_seq.size() << " cells with "
            << glued.clones_used << " clones; k-agreement "
            << verdict_name(agreement.verdict) << "\n";
  dump_trace(resolve_out(out_flag), "glued.jsonl", glued.final_trace);
  return expect_blocked ? kExitUnexpected : kExitOk;
}

int cmd_lemma1(const std::string& config_path, const std::string& out_flag,
               const std::vector<int>& q, const std::vector<int>& v,
               std::size_t depth_cap) {
  RunConfig cfg = parse_run_config(load_config(config_path));
  Lemma1Outcome outcome =
      lemma1_oracle(cfg.params, q, std::vector<Val>(v.begin(), v.end()),
                    depth_cap);
  if (!outcome.found) {
    std::cout << "not found (" << outcome.explored
              << " configurations explored)\n";
    return kExitUnexpected;
  }
  std::cout << "witness with " << outcome.witness.steps.size() << " steps ("
            << outcome.explored << " configurations explored)\n";
  dump_trace(resolve_out(out_flag), "lemma1.jsonl", outcome.witness);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic simulator and verification harness for "
               "m-obstruction-free k-set agreement over registers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag;
  bool with_trace = false;
  std::uint64_t seed = 0;
  bool have_seed = false;
  std::size_t depth_cap = 100000;

  auto* run_cmd = app.add_subcommand("run", "simulate and check a protocol");
  run_cmd->add_option("--config", config_path, "JSON run config")->required();
  run_cmd->add_option("--out", out_flag, "output directory (or SETSPACE_OUT)");
  run_cmd->add_flag("--trace,!--no-trace", with_trace, "write JSONL traces");
  run_cmd->add_option("--seed", seed, "override the input seed")
      ->each([&](const std::string&) { have_seed = true; });

  int bn = 0, bk = 0, bm = 0;
  bool as_json = false;
  auto* bounds_cmd = app.add_subcommand("bounds", "print register bounds");
  bounds_cmd->add_option("--n", bn, "processes")->required();
  bounds_cmd->add_option("--k", bk, "agreement bound")->required();
  bounds_cmd->add_option("--m", bm, "obstruction parameter")->required();
  bounds_cmd->add_flag("--json", as_json, "JSON output");

  bool expect_stuck = false;
  auto* refute_cmd =
      app.add_subcommand("refute", "covering-based agreement refutation");
  refute_cmd->add_option("--config", config_path, "JSON run config")
      ->required();
  refute_cmd->add_option("--out", out_flag, "output directory");
  refute_cmd->add_option("--depth-cap", depth_cap, "search depth cap");
  refute_cmd->add_flag("--expect-stuck", expect_stuck,
                       "succeed when the construction gets stuck");

  bool expect_blocked = false;
  std::vector<std::string> glue_sets;
  auto* glue_cmd =
      app.add_subcommand("glue", "glue isolated runs via clone block writes");
  glue_cmd->add_option("--config", config_path, "JSON run config")
      ->required();
  glue_cmd->add_option("--out", out_flag, "output directory");
  glue_cmd->add_option("--set", glue_sets, "comma-separated value set "
                       "(repeatable)")
      ->required();
  glue_cmd->add_option("--depth-cap", depth_cap, "search depth cap");
  glue_cmd->add_flag("--expect-blocked", expect_blocked,
                     "succeed when the construction blocks");

  std::vector<int> oracle_q, oracle_v;
  auto* lemma_cmd = app.add_subcommand(
      "lemma1", "search for a group execution outputting a value set");
  lemma_cmd->add_option("--config", config_path, "JSON run config")
      ->required();
  lemma_cmd->add_option("--out", out_flag, "output directory");
  lemma_cmd->add_option("--q", oracle_q, "group pids")->required();
  lemma_cmd->add_option("--v", oracle_v, "target values")->required();
  lemma_cmd->add_option("--depth-cap", depth_cap, "search depth cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return cmd_run(config_path, out_flag, with_trace, seed, have_seed);
    if (bounds_cmd->parsed()) return cmd_bounds(bn, bk, bm, as_json);
    if (refute_cmd->parsed())
      return cmd_refute(config_path, out_flag, depth_cap, expect_stuck);
    if (glue_cmd->parsed())
      return cmd_glue(config_path, out_flag, glue_sets, depth_cap,
                      expect_blocked);
    if (lemma_cmd->parsed())
      return cmd_lemma1(config_path, out_flag, oracle_q, oracle_v, depth_cap);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
