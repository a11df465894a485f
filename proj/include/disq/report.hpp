// Copyright 2026 The disq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Machine-readable outputs: run manifests, scan CSV, JSON views of the
// module results, and readers for all of them.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "disq/commchan.hpp"
#include "disq/repeater.hpp"
#include "disq/scheme1.hpp"

namespace disq::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "disq 1.0.0";

/// Malformed input to one of the readers.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunManifest {
  std::string command;
  Json parameters = Json::object();
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string timestamp;  // UTC ISO 8601

  bool operator==(const RunManifest&) const = default;
};

/// Manifest stamped from SOURCE_DATE_EPOCH (the epoch itself when unset), so
/// reruns produce identical bytes.
RunManifest make_manifest(std::string command, Json parameters, std::uint64_t seed);
std::string format_timestamp(std::int64_t unix_seconds);

Json to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j);

// Scheme-I parameters and scans.
Json to_json(const scheme1::Params& p);
scheme1::Params params_from_json(const Json& j);

/// A base point plus a one-parameter sweep, as stored in scan files.
struct ScanConfig {
  std::string name;
  std::string description;
  scheme1::Params base;
  std::string parameter;
  std::vector<double> values;

  std::vector<scheme1::Params> grid() const;
};
Json to_json(const ScanConfig& c);
ScanConfig scan_config_from_json(const Json& j);
ScanConfig read_scan_config(const std::string& path);

struct ScanTable {
  RunManifest manifest;
  std::vector<scheme1::ScanRow> rows;
};

/// Manifest as leading "# key: value" lines, then a header and one row per
/// grid point. Rows without a unique steady state carry empty observables.
void write_scan_csv(std::ostream& os, const ScanTable& table);
ScanTable read_scan_csv(std::istream& is);
Json to_json(const ScanTable& table);
ScanTable scan_table_from_json(const Json& j);

// Commchan.
Json to_json(const commchan::BoundsReport& r);
commchan::BoundsReport bounds_from_json(const Json& j);
Json to_json(const commchan::ErrorReport& r);
commchan::ErrorReport error_report_from_json(const Json& j);

// Repeater.
Json to_json(const repeater::RepeaterConfig& c);
repeater::RepeaterConfig repeater_config_from_json(const Json& j);
Json to_json(const repeater::LevelReport& r);
repeater::LevelReport level_report_from_json(const Json& j);

/// Full plan: config, per-level reports, exponent against the reference
/// value, total pairs and whether the recursion sustains f_i.
Json plan_json(const repeater::RepeaterConfig& cfg, const repeater::Recursion& rec);

/// Document written by every command: {"manifest": ..., "result": ...}.
Json document(const RunManifest& m, Json result);

}  // namespace disq::report
