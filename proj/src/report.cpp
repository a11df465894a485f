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

#include "disq/report.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace disq::report {

namespace {

const std::vector<std::string> kScanColumns{
    "variant", "twirled", "asymmetric_dephasing", "r",         "gamma",          "delta_F",    "eps_c",
    "eps_h",   "eps_d",   "eof_target", "eof_s1",        "entropy_s1", "logneg_source",
    "ss_residual", "target_rising", "error"};

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw ParseError("trailing characters in number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <class T>
T get(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what());
  }
}

std::string variant_name(scheme1::Variant v) { return v == scheme1::Variant::kNoComm ? "no_comm" : "locc"; }

scheme1::Variant parse_variant(const std::string& s) {
  if (s == "no_comm") return scheme1::Variant::kNoComm;
  if (s == "locc") return scheme1::Variant::kLocc;
  throw ParseError("unknown variant '" + s + "'");
}

}  // namespace

std::string format_timestamp(std::int64_t unix_seconds) {
  std::time_t t = static_cast<std::time_t>(unix_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest make_manifest(std::string command, Json parameters, std::uint64_t seed) {
  std::int64_t epoch = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      epoch = std::stoll(env);
    } catch (const std::exception&) {
      throw ParseError("SOURCE_DATE_EPOCH is not an integer");
    }
  }
  RunManifest m;
  m.command = std::move(command);
  m.parameters = std::move(parameters);
  m.seed = seed;
  m.timestamp = format_timestamp(epoch);
  return m;
}

Json to_json(const RunManifest& m) {
  return Json{{"command", m.command},
              {"parameters", m.parameters},
              {"seed", m.seed},
              {"tool_version", m.tool_version},
              {"timestamp", m.timestamp}};
}

RunManifest manifest_from_json(const Json& j) {
  RunManifest m;
  m.command = get<std::string>(j, "command");
  m.parameters = get<Json>(j, "parameters");
  m.seed = get<std::uint64_t>(j, "seed");
  m.tool_version = get<std::string>(j, "tool_version");
  m.timestamp = get<std::string>(j, "timestamp");
  return m;
}

Json to_json(const scheme1::Params& p) {
  return Json{{"variant", variant_name(p.variant)},
              {"twirled", p.twirled},
              {"asymmetric_dephasing", p.asymmetric_dephasing},
              {"r", p.r},
              {"gamma", p.gamma},
              {"delta_F", p.delta_f},
              {"eps_c", p.eps_c},
              {"eps_h", p.eps_h},
              {"eps_d", p.eps_d}};
}

scheme1::Params params_from_json(const Json& j) {
  scheme1::Params p;
  if (j.contains("variant")) p.variant = parse_variant(get<std::string>(j, "variant"));
  if (j.contains("twirled")) p.twirled = get<bool>(j, "twirled");
  if (j.contains("asymmetric_dephasing")) p.asymmetric_dephasing = get<bool>(j, "asymmetric_dephasing");
  if (j.contains("r")) p.r = get<double>(j, "r");
  if (j.contains("gamma")) p.gamma = get<double>(j, "gamma");
  if (j.contains("delta_F")) p.delta_f = get<double>(j, "delta_F");
  if (j.contains("eps_c")) p.eps_c = get<double>(j, "eps_c");
  if (j.contains("eps_h")) p.eps_h = get<double>(j, "eps_h");
  if (j.contains("eps_d")) p.eps_d = get<double>(j, "eps_d");
  if (j.contains("eps_n")) p.eps_c = p.eps_h = p.eps_d = get<double>(j, "eps_n");
  return p;
}

std::vector<scheme1::Params> ScanConfig::grid() const {
  if (parameter.empty()) return {base};
  return scheme1::sweep(base, parameter, values);
}

Json to_json(const ScanConfig& c) {
  Json j{{"name", c.name}, {"description", c.description}, {"base", to_json(c.base)}};
  if (!c.parameter.empty()) j["sweep"] = Json{{"parameter", c.parameter}, {"values", c.values}};
  return j;
}

ScanConfig scan_config_from_json(const Json& j) {
  ScanConfig c;
  c.name = get<std::string>(j, "name");
  if (j.contains("description")) c.description = get<std::string>(j, "description");
  c.base = params_from_json(get<Json>(j, "base"));
  if (j.contains("sweep")) {
    const Json& s = j.at("sweep");
    c.parameter = get<std::string>(s, "parameter");
    c.values = get<std::vector<double>>(s, "values");
    if (c.values.empty()) throw ParseError("sweep has no values");
  }
  c.grid();  // rejects unknown parameter names
  return c;
}

ScanConfig read_scan_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scan config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return scan_config_from_json(j);
}

void write_scan_csv(std::ostream& os, const ScanTable& table) {
  const Json m = to_json(table.manifest);
  for (const auto& [key, value] : m.items()) os << "# " << key << ": " << value.dump() << '\n';
  for (std::size_t i = 0; i < kScanColumns.size(); ++i) os << (i ? "," : "") << kScanColumns[i];
  os << '\n';
  bool have_previous = false;
  double previous = 0.0;
  for (const auto& row : table.rows) {
    const auto& p = row.params;
    os << variant_name(p.variant) << ',' << (p.twirled ? 1 : 0) << ',' << (p.asymmetric_dephasing ? 1 : 0)
       << ',' << format_double(p.r) << ','
       << format_double(p.gamma) << ',' << format_double(p.delta_f) << ',' << format_double(p.eps_c) << ','
       << format_double(p.eps_h) << ',' << format_double(p.eps_d);
    if (row.obs) {
      const auto& o = *row.obs;
      const bool rising = have_previous && o.eof_target > previous;
      os << ',' << format_double(o.eof_target) << ',' << format_double(o.eof_s1) << ','
         << format_double(o.entropy_s1) << ',' << format_double(o.logneg_source) << ','
         << format_double(o.ss_residual) << ',' << (rising ? 1 : 0) << ',';
      previous = o.eof_target;
      have_previous = true;
    } else {
      os << ",,,,,,0,";
      have_previous = false;
    }
    // Errors never contain commas or newlines once sanitized.
    std::string err = row.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    os << err << '\n';
  }
}

ScanTable read_scan_csv(std::istream& is) {
  ScanTable t;
  Json manifest = Json::object();
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(": ");
      if (line.size() < 3 || colon == std::string::npos) throw ParseError("bad manifest line: " + line);
      try {
        manifest[line.substr(2, colon - 2)] = Json::parse(line.substr(colon + 2));
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("bad manifest value: " + line);
      }
      continue;
    }
    auto cells = split(line, ',');
    if (!header_seen) {
      if (cells != kScanColumns) throw ParseError("unexpected CSV header: " + line);
      header_seen = true;
      continue;
    }
    if (cells.size() != kScanColumns.size()) throw ParseError("wrong number of cells: " + line);
    scheme1::ScanRow row;
    row.params.variant = parse_variant(cells[0]);
    row.params.twirled = cells[1] == "1";
    row.params.asymmetric_dephasing = cells[2] == "1";
    row.params.r = parse_double(cells[3]);
    row.params.gamma = parse_double(cells[4]);
    row.params.delta_f = parse_double(cells[5]);
    row.params.eps_c = parse_double(cells[6]);
    row.params.eps_h = parse_double(cells[7]);
    row.params.eps_d = parse_double(cells[8]);
    if (!cells[9].empty()) {
      scheme1::Observables o;
      o.eof_target = parse_double(cells[9]);
      o.eof_s1 = parse_double(cells[10]);
      o.entropy_s1 = parse_double(cells[11]);
      o.logneg_source = parse_double(cells[12]);
      o.ss_residual = parse_double(cells[13]);
      row.obs = o;
    }
    row.error = cells[15];
    t.rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError("CSV has no header");
  t.manifest = manifest_from_json(manifest);
  return t;
}

Json to_json(const ScanTable& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r{{"params", to_json(row.params)}};
    if (row.obs) {
      const auto& o = *row.obs;
      r["observables"] = Json{{"eof_target", o.eof_target},
                              {"eof_s1", o.eof_s1},
                              {"entropy_s1", o.entropy_s1},
                              {"logneg_source", o.logneg_source},
                              {"ss_residual", o.ss_residual}};
    } else {
      r["observables"] = nullptr;
    }
    r["error"] = row.error;
    rows.push_back(std::move(r));
  }
  return document(table.manifest, Json{{"rows", rows}});
}

ScanTable scan_table_from_json(const Json& j) {
  ScanTable t;
  t.manifest = manifest_from_json(get<Json>(j, "manifest"));
  for (const auto& r : get<Json>(get<Json>(j, "result"), "rows")) {
    scheme1::ScanRow row;
    row.params = params_from_json(get<Json>(r, "params"));
    const Json& o = r.at("observables");
    if (!o.is_null())
      row.obs = scheme1::Observables{get<double>(o, "eof_target"), get<double>(o, "eof_s1"),
                                     get<double>(o, "entropy_s1"), get<double>(o, "logneg_source"),
                                     get<double>(o, "ss_residual")};
    row.error = get<std::string>(r, "error");
    t.rows.push_back(std::move(row));
  }
  return t;
}

Json to_json(const commchan::BoundsReport& r) {
  return Json{{"delta", r.delta},   {"Gamma", r.Gamma},   {"t_wait", r.t_wait}, {"p_X000", r.pX000},
              {"p_0X00", r.p0X00},  {"p_00X0", r.p00X0},  {"p_000X", r.p000X},  {"p_0000", r.p0000},
              {"lower", r.lower},   {"upper", r.upper},   {"all_hold", r.all_hold}};
}

commchan::BoundsReport bounds_from_json(const Json& j) {
  commchan::BoundsReport r{};
  r.delta = get<double>(j, "delta");
  r.Gamma = get<double>(j, "Gamma");
  r.t_wait = get<double>(j, "t_wait");
  r.pX000 = get<double>(j, "p_X000");
  r.p0X00 = get<double>(j, "p_0X00");
  r.p00X0 = get<double>(j, "p_00X0");
  r.p000X = get<double>(j, "p_000X");
  r.p0000 = get<double>(j, "p_0000");
  r.lower = get<double>(j, "lower");
  r.upper = get<double>(j, "upper");
  r.all_hold = get<bool>(j, "all_hold");
  return r;
}

Json to_json(const commchan::ErrorReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points)
    points.push_back(Json{{"gamma", r.gamma},
                          {"delta", r.delta},
                          {"Gamma", p.Gamma},
                          {"alpha", p.alpha},
                          {"error_trace_norm", p.error_trace_norm}});
  return Json{{"map", r.map_name}, {"gamma", r.gamma},       {"delta", r.delta},
              {"points", points},  {"slope", r.slope},       {"monotone", r.monotone}};
}

commchan::ErrorReport error_report_from_json(const Json& j) {
  commchan::ErrorReport r;
  r.map_name = get<std::string>(j, "map");
  r.gamma = get<double>(j, "gamma");
  r.delta = get<double>(j, "delta");
  for (const auto& p : get<Json>(j, "points"))
    r.points.push_back({get<double>(p, "Gamma"), get<double>(p, "alpha"), get<double>(p, "error_trace_norm")});
  r.slope = get<double>(j, "slope");
  r.monotone = get<bool>(j, "monotone");
  return r;
}

Json to_json(const repeater::RepeaterConfig& c) {
  return Json{{"f_I", c.f_i},       {"eps", c.eps}, {"gamma", c.gamma}, {"delta_D", c.delta_d},
              {"delta_sw", c.delta_sw}, {"m", c.m}, {"n", c.n},         {"k", c.k},
              {"L0", c.l0},         {"tied_rates", c.tied_rates}};
}

repeater::RepeaterConfig repeater_config_from_json(const Json& j) {
  repeater::RepeaterConfig c;
  c.f_i = get<double>(j, "f_I");
  c.eps = get<double>(j, "eps");
  c.gamma = get<double>(j, "gamma");
  c.delta_d = get<double>(j, "delta_D");
  c.delta_sw = get<double>(j, "delta_sw");
  c.m = get<int>(j, "m");
  c.n = get<int>(j, "n");
  c.k = get<int>(j, "k");
  c.l0 = get<double>(j, "L0");
  c.tied_rates = get<bool>(j, "tied_rates");
  c.validate();
  return c;
}

Json to_json(const repeater::LevelReport& r) {
  return Json{{"f_in", r.f_in},
              {"f_after_swap", r.f_after_swap},
              {"f_after_swap_boost", r.f_after_swap_boost},
              {"f_after_distill", r.f_after_distill},
              {"f_after_distill_boost", r.f_after_distill_boost},
              {"success_probability", r.success_probability},
              {"effective_success_rate", r.effective_success_rate},
              {"pairs_consumed", r.pairs_consumed}};
}

repeater::LevelReport level_report_from_json(const Json& j) {
  repeater::LevelReport r{};
  r.f_in = get<double>(j, "f_in");
  r.f_after_swap = get<double>(j, "f_after_swap");
  r.f_after_swap_boost = get<double>(j, "f_after_swap_boost");
  r.f_after_distill = get<double>(j, "f_after_distill");
  r.f_after_distill_boost = get<double>(j, "f_after_distill_boost");
  r.success_probability = get<double>(j, "success_probability");
  r.effective_success_rate = get<double>(j, "effective_success_rate");
  r.pairs_consumed = get<double>(j, "pairs_consumed");
  return r;
}

Json plan_json(const repeater::RepeaterConfig& cfg, const repeater::Recursion& rec) {
  Json levels = Json::array();
  bool sustained = true;
  for (const auto& l : rec.levels) {
    levels.push_back(to_json(l));
    if (l.f_after_distill_boost < cfg.f_i) sustained = false;
  }
  const double e = repeater::scaling_exponent(cfg.m, cfg.n);
  return Json{{"config", to_json(cfg)},
              {"levels", levels},
              {"final_fidelity", rec.final_fidelity},
              {"sustains_f_I", sustained},
              {"exponent", e},
              {"reference_exponent", repeater::kReferenceExponent},
              {"exponent_delta", repeater::kReferenceExponent - e},
              {"total_pairs", rec.total_pairs},
              {"length", cfg.length()}};
}

Json document(const RunManifest& m, Json result) {
  return Json{{"manifest", to_json(m)}, {"result", std::move(result)}};
}

}  // namespace disq::report
