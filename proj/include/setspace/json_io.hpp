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

#ifndef SETSPACE_JSON_IO_HPP_
#define SETSPACE_JSON_IO_HPP_

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "setspace/bounds.hpp"
#include "setspace/checks.hpp"
#include "setspace/engine.hpp"

namespace setspace {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const RegisterValue& v);
RegisterValue register_value_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DecisionEvent& e);
nlohmann::json to_json(const Step& s);
nlohmann::json to_json(const PropertyReport& r);
nlohmann::json to_json(const BoundSet& b);
nlohmann::json to_json(const ProtocolParams& p);
nlohmann::json to_json(const Schedule& s);

/// One step per line; the first line is a header object carrying the
/// parameters and schema version.
void write_trace_jsonl(std::ostream& out, const Trace& trace);

/// A full run request: parameters, schedule, and optional explicit inputs.
struct RunConfig {
  ProtocolParams params;
  Schedule schedule;
  std::vector<std::vector<Val>> inputs;  // empty: derive from seed
  std::uint64_t seed = 0;
  int runs = 1;
};

/// Throws ConfigError on unknown fields of interest, wrong schema version,
/// or out-of-range values.
RunConfig parse_run_config(const nlohmann::json& j);

ProtocolParams params_from_json(const nlohmann::json& j);
Schedule schedule_from_json(const nlohmann::json& j);

/// RFC-4180 style row; fields with commas or quotes are quoted.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace setspace

#endif  // SETSPACE_JSON_IO_HPP_
