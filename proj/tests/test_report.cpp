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

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "disq/report.hpp"

namespace disq::report {
namespace {

scheme1::ScanRow sample_row(double x, bool ok) {
  scheme1::ScanRow row;
  row.params.variant = scheme1::Variant::kLocc;
  row.params.twirled = true;
  row.params.r = 0.1 + x;
  row.params.eps_c = x / 3.0;
  if (ok) {
    row.obs = scheme1::Observables{x, x / 7.0, 1.0 / 3.0, 0.1 * x, 1e-13};
  } else {
    row.error = "steady state is not unique (kernel dimension 2)";
  }
  return row;
}

TEST(Manifest, TimestampFollowsSourceDateEpoch) {
  EXPECT_EQ(format_timestamp(0), "1970-01-01T00:00:00Z");
  EXPECT_EQ(format_timestamp(1700000000), "2023-11-14T22:13:20Z");
  ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
  EXPECT_EQ(make_manifest("x", Json::object(), 3).timestamp, "1970-01-02T00:00:00Z");
  ::setenv("SOURCE_DATE_EPOCH", "soon", 1);
  EXPECT_THROW(make_manifest("x", Json::object(), 3), ParseError);
  ::unsetenv("SOURCE_DATE_EPOCH");
  auto m = make_manifest("scheme1-scan", Json{{"r", 0.4}}, 9);
  EXPECT_EQ(m.timestamp, "1970-01-01T00:00:00Z");
  EXPECT_EQ(m.tool_version, kToolVersion);
  EXPECT_EQ(manifest_from_json(to_json(m)), m);
}

TEST(Params, JsonRoundTripAndNoiseShorthand) {
  scheme1::Params p;
  p.variant = scheme1::Variant::kLocc;
  p.twirled = true;
  p.asymmetric_dephasing = true;
  p.r = 1.1;
  p.eps_c = 0.2;
  p.eps_h = 0.1 / 3.0;
  auto q = params_from_json(to_json(p));
  EXPECT_EQ(to_json(q).dump(), to_json(p).dump());
  auto n = params_from_json(Json::parse(R"({"variant": "no_comm", "eps_n": 0.05})"));
  EXPECT_EQ(n.eps_c, 0.05);
  EXPECT_EQ(n.eps_h, 0.05);
  EXPECT_EQ(n.eps_d, 0.05);
  EXPECT_THROW(params_from_json(Json::parse(R"({"variant": "telepathy"})")), ParseError);
  EXPECT_THROW(params_from_json(Json::parse(R"({"variant": "locc", "r": "big"})")), ParseError);
}

TEST(ScanTable, CsvRoundTripIsExact) {
  ScanTable t{make_manifest("scheme1-scan", Json{{"config", "inline"}}, 1), {}};
  for (int i = 0; i < 4; ++i) t.rows.push_back(sample_row(0.1 * i + 1.0 / 7.0, i != 2));
  std::stringstream ss;
  write_scan_csv(ss, t);
  const std::string first = ss.str();
  ScanTable back = read_scan_csv(ss);
  EXPECT_EQ(back.manifest, t.manifest);
  ASSERT_EQ(back.rows.size(), 4u);
  EXPECT_FALSE(back.rows[2].obs.has_value());
  EXPECT_EQ(back.rows[2].error, t.rows[2].error);
  EXPECT_EQ(back.rows[1].obs->eof_s1, t.rows[1].obs->eof_s1);
  std::stringstream again;
  write_scan_csv(again, back);
  EXPECT_EQ(again.str(), first);
  EXPECT_EQ(to_json(scan_table_from_json(to_json(t))).dump(), to_json(t).dump());
}

TEST(ScanTable, MalformedCsvIsRejected) {
  ScanTable t{make_manifest("scheme1-scan", Json::object(), 1), {sample_row(0.5, true)}};
  std::stringstream ss;
  write_scan_csv(ss, t);
  std::string text = ss.str();
  const auto pos = text.find(",0.5");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 4, ",zz1");
  std::stringstream bad_number(text);
  EXPECT_THROW(read_scan_csv(bad_number), ParseError);
  std::stringstream bad_header("variant,twirled\n");
  EXPECT_THROW(read_scan_csv(bad_header), ParseError);
  std::stringstream bad_manifest("#nocolon\n");
  EXPECT_THROW(read_scan_csv(bad_manifest), ParseError);
}

TEST(ScanConfig, CommittedConfigsParse) {
  const std::string dir = DISQ_SCANS_DIR;
  auto a = read_scan_config(dir + "/noise_degrades_target.json");
  EXPECT_EQ(a.parameter, "eps_n");
  EXPECT_EQ(a.grid().size(), 6u);
  EXPECT_EQ(a.base.variant, scheme1::Variant::kNoComm);
  auto b = read_scan_config(dir + "/cooling_helps_target.json");
  EXPECT_EQ(b.grid().size(), 10u);
  EXPECT_EQ(b.base.eps_h, 0.15);
  auto c = read_scan_config(dir + "/separable_source_entangled_target.json");
  EXPECT_EQ(c.grid().size(), 1u);
  EXPECT_EQ(c.base.r, 1.2);
  EXPECT_EQ(to_json(scan_config_from_json(to_json(b))).dump(), to_json(b).dump());
  EXPECT_THROW(read_scan_config(dir + "/missing.json"), ParseError);
  EXPECT_THROW(scan_config_from_json(Json::parse(R"({"name": "x", "base": {"variant": "locc"},
                                                     "sweep": {"parameter": "r", "values": []}})")),
               ParseError);
}

TEST(Reports, CommchanAndRepeaterRoundTrips) {
  commchan::BoundsReport b{0.5, 500.0, 20.0, 1e-3, 9e-4, 8e-4, 7e-4, 0.996, 9.93e-4, 1e-3, false};
  EXPECT_EQ(to_json(bounds_from_json(to_json(b))).dump(), to_json(b).dump());
  commchan::ErrorReport e{"conditional_pauli", 0.5, 0.5, {{100.0, 0.01, 1e-4}, {1000.0, 0.001, 1e-5}}, 1.0, true};
  EXPECT_EQ(to_json(error_report_from_json(to_json(e))).dump(), to_json(e).dump());
  auto cfg = repeater::RepeaterConfig::tied(0.96, 0.05, 70.0, 50, 16, 2);
  EXPECT_EQ(to_json(repeater_config_from_json(to_json(cfg))).dump(), to_json(cfg).dump());
  repeater::LevelReport l{0.96, 0.9, 0.89, 0.97, 0.971, 0.29, 0.406, 80000.0};
  EXPECT_EQ(to_json(level_report_from_json(to_json(l))).dump(), to_json(l).dump());
  auto plan = plan_json(cfg, repeater::run(cfg));
  EXPECT_EQ(plan["levels"].size(), 2u);
  EXPECT_DOUBLE_EQ(plan["reference_exponent"].get<double>(), repeater::kReferenceExponent);
  auto doc = document(make_manifest("repeater-plan", to_json(cfg), 1), plan);
  EXPECT_TRUE(doc.contains("manifest"));
  EXPECT_TRUE(doc.contains("result"));
}

}  // namespace
}  // namespace disq::report
