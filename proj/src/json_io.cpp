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

#include "setspace/json_io.hpp"

#include <ostream>
#include <sstream>

namespace setspace {

using nlohmann::json;

json to_json(const RegisterValue& v) {
  json j;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Bot>) {
          j["t"] = "bot";
        } else if constexpr (std::is_same_v<T, Val>) {
          j["t"] = "val";
          j["v"] = x;
        } else if constexpr (std::is_same_v<T, IdPair>) {
          j["t"] = "pair";
          j["v"] = x.value;
          j["id"] = x.id;
        } else if constexpr (std::is_same_v<T, RepTuple>) {
          j["t"] = "rep";
          j["v"] = x.value;
          j["id"] = x.id;
          j["inst"] = x.instance;
          j["h"] = x.history;
        } else if constexpr (std::is_same_v<T, AnonTuple>) {
          j["t"] = "anon";
          j["v"] = x.value;
          j["inst"] = x.instance;
          j["h"] = x.history;
        } else {
          j["t"] = "seq";
          j["h"] = x;
        }
      },
      v);
  return j;
}

RegisterValue register_value_from_json(const json& j) {
  const std::string t = j.at("t").get<std::string>();
  if (t == "bot") return Bot{};
  if (t == "val") return j.at("v").get<Val>();
  if (t == "pair") return IdPair{j.at("v").get<Val>(), j.at("id").get<int>()};
  if (t == "rep")
    return RepTuple{j.at("v").get<Val>(), j.at("id").get<int>(),
                    j.at("inst").get<int>(),
                    j.at("h").get<std::vector<Val>>()};
  if (t == "anon")
    return AnonTuple{j.at("v").get<Val>(), j.at("inst").get<int>(),
                     j.at("h").get<std::vector<Val>>()};
  if (t == "seq") return j.at("h").get<ValueSeq>();
  throw ConfigError("unknown register value tag: " + t);
}

json to_json(const DecisionEvent& e) {
  return json{{"pid", e.pid},
              {"instance", e.instance},
              {"value", e.value},
              {"step", e.step_index},
              {"kind", decision_kind_name(e.kind)}};
}

json to_json(const Step& s) {
  json j{{"i", s.step_index},
         {"pid", s.pid},
         {"thread", s.thread == Thread::T1 ? 1 : 2},
         {"op", primitive_name(s.primitive)}};
  if (!s.object.empty()) j["obj"] = s.object;
  if (s.component != Cell::kPlainRegister) j["comp"] = s.component;
  if (s.value_written) j["w"] = to_json(*s.value_written);
  if (s.value_read) j["r"] = to_json(*s.value_read);
  if (s.scan_result) {
    json arr = json::array();
    for (const RegisterValue& v : *s.scan_result) arr.push_back(to_json(v));
    j["scan"] = arr;
  }
  if (!s.events.empty()) {
    json arr = json::array();
    for (const DecisionEvent& e : s.events) arr.push_back(to_json(e));
    j["events"] = arr;
  }
  return j;
}

json to_json(const PropertyReport& r) {
  json j{{"property", r.property},
         {"verdict", verdict_name(r.verdict)},
         {"explanation", r.explanation}};
  if (r.fail_step) j["fail_step"] = *r.fail_step;
  json in = json::object();
  for (const auto& [t, vals] : r.inputs_per_instance)
    in[std::to_string(t)] = vals;
  json out = json::object();
  for (const auto& [t, vals] : r.outputs_per_instance)
    out[std::to_string(t)] = vals;
  j["inputs"] = in;
  j["outputs"] = out;
  return j;
}

json to_json(const BoundSet& b) {
  return json{{"n", b.n},
              {"k", b.k},
              {"m", b.m},
              {"repeated_lower", b.repeated_lower},
              {"repeated_upper", b.repeated_upper},
              {"anon_oneshot_lower", b.anon_oneshot_lower},
              {"anon_oneshot_lower_strict", b.anon_oneshot_lower_strict},
              {"anon_repeated_upper", b.anon_repeated_upper}};
}

json to_json(const ProtocolParams& p) {
  return json{{"protocol", protocol_name(p.protocol)},
              {"n", p.n},
              {"k", p.k},
              {"m", p.m},
              {"s_instances", p.s_instances},
              {"domain_size", p.domain_size},
              {"snapshot_mode", p.snapshot_mode == SnapshotMode::Atomic
                                    ? "atomic"
                                    : "double_collect"}};
}

json to_json(const Schedule& s) {
  json j{{"kind", schedule_kind_name(s.kind)},
         {"seed", s.seed},
         {"step_cap", s.step_cap},
         {"t2_period", s.t2_period}};
  if (s.kind == Schedule::Kind::EventuallyMBounded) {
    j["prefix_len"] = s.prefix_len;
    j["survivors"] = s.survivors;
  }
  if (s.kind == Schedule::Kind::Scripted) {
    json arr = json::array();
    for (const Activation& a : s.script)
      arr.push_back(json{{"pid", a.pid},
                         {"thread", a.thread == Thread::T1 ? 1 : 2}});
    j["script"] = arr;
  }
  return j;
}

void write_trace_jsonl(std::ostream& out, const Trace& trace) {
  json header{{"schema_version", kSchemaVersion},
              {"params", to_json(trace.params)},
              {"steps", trace.steps.size()},
              {"decisions", trace.decisions.size()},
              {"truncated", trace.truncated}};
  out << header.dump() << '\n';
  for (const Step& s : trace.steps) out << to_json(s).dump() << '\n';
}

ProtocolParams params_from_json(const json& j) {
  ProtocolParams p;
  const std::string name = j.at("protocol").get<std::string>();
  const auto proto = protocol_from_name(name);
  if (!proto) throw ConfigError("unknown protocol: " + name);
  p.protocol = *proto;
  p.n = j.at("n").get<int>();
  p.k = j.at("k").get<int>();
  p.m = j.at("m").get<int>();
  if (j.contains("s_instances")) p.s_instances = j["s_instances"].get<int>();
  if (j.contains("domain_size")) p.domain_size = j["domain_size"].get<int>();
  if (j.contains("snapshot_mode")) {
    const std::string mode = j["snapshot_mode"].get<std::string>();
    if (mode == "atomic") {
      p.snapshot_mode = SnapshotMode::Atomic;
    } else if (mode == "double_collect") {
      p.snapshot_mode = SnapshotMode::DoubleCollect;
    } else {
      throw ConfigError("unknown snapshot mode: " + mode);
    }
  }
  p.validate();
  return p;
}

Schedule schedule_from_json(const json& j) {
  Schedule s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "scripted") {
    s.kind = Schedule::Kind::Scripted;
    for (const json& a : j.at("script"))
      s.script.push_back(Activation{
          a.at("pid").get<int>(),
          a.value("thread", 1) == 2 ? Thread::T2 : Thread::T1});
  } else if (kind == "round_robin") {
    s.kind = Schedule::Kind::RoundRobin;
  } else if (kind == "seeded_random") {
    s.kind = Schedule::Kind::SeededRandom;
  } else if (kind == "eventually_m_bounded") {
    s.kind = Schedule::Kind::EventuallyMBounded;
    s.prefix_len = j.value("prefix_len", std::size_t{0});
    s.survivors = j.at("survivors").get<std::vector<int>>();
  } else {
    throw ConfigError("unknown schedule kind: " + kind);
  }
  s.seed = j.value("seed", std::uint64_t{0});
  s.step_cap = j.value("step_cap", std::size_t{100000});
  s.t2_period = j.value("t2_period", 8);
  if (s.t2_period < 2) throw ConfigError("t2_period must be at least 2");
  return s;
}

RunConfig parse_run_config(const json& j) {
  if (!j.contains("schema_version"))
    throw ConfigError("config is missing schema_version");
  if (j["schema_version"].get<int>() != kSchemaVersion)
    throw ConfigError("unsupported schema_version");
  RunConfig c;
  if (!j.contains("params")) throw ConfigError("config is missing params");
  c.params = params_from_json(j["params"]);
  c.schedule = j.contains("schedule") ? schedule_from_json(j["schedule"])
                                      : Schedule{};
  c.seed = j.value("seed", std::uint64_t{0});
  c.runs = j.value("runs", 1);
  if (c.runs < 1) throw ConfigError("runs must be positive");
  if (j.contains("inputs")) {
    c.inputs = j["inputs"].get<std::vector<std::vector<Val>>>();
    if (static_cast<int>(c.inputs.size()) != c.params.n)
      throw ConfigError("inputs must list one sequence per process");
    for (const auto& seq : c.inputs) {
      if (static_cast<int>(seq.size()) < c.params.s_instances)
        throw ConfigError("input sequence shorter than s_instances");
      for (Val v : seq)
        if (v < 0 || v >= c.params.domain_size)
          throw ConfigError("input value outside the domain");
    }
  }
  return c;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::ostringstream out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") != std::string::npos) {
      out << '"';
      for (char ch : f) {
        if (ch == '"') out << '"';
        out << ch;
      }
      out << '"';
    } else {
      out << f;
    }
  }
  out << '\n';
  return out.str();
}

}  // namespace setspace
