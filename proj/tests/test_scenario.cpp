// Copyright 2026 The FSM Authors
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

#include "fsm/analysis.hpp"
#include "fsm/config.hpp"
#include "fsm/render.hpp"
#include "fsm/scenario.hpp"
#include "fsm/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

namespace fsm
{
namespace
{

using Json = nlohmann::ordered_json;

Json tailgate_doc() { return scenario_to_json(synth_tailgate(TailgateParams{})); }

std::string error_of(const Json & doc)
{
  try {
    parse_scenario(doc);
  } catch (const std::exception & e) {
    return e.what();
  }
  return "";
}

Json minimal_doc()
{
  return Json::parse(R"({
    "schema_version": 1, "name": "minimal", "cadence": 0.1,
    "roadgraph": {
      "road_polygon": [[0, -2], [50, -2], [50, 2], [0, 2]],
      "lanes": [{"id": "E", "centerline": [[0, 0, 0, 0], [50, 0, 0, 0]],
                 "left_boundary": [[0, 1.75], [50, 1.75]],
                 "right_boundary": [[0, -1.75], [50, -1.75]], "successors": []}]},
    "agents": [{"id": "ego", "role": "ego", "type": "vehicle", "length": 4.8, "width": 2.0,
                "wheelbase": 2.8, "model": "bicycle", "max_yaw_rate": 6.283185307179586}],
    "timeline": [{"t": 0.0, "states": [{"agent": "ego", "x": 10, "y": 0, "yaw": 0, "speed": 10,
                  "accel_long": 0, "accel_lat": 0, "z": 0}]}]})");
}

TEST(Scenario, MinimalFileParses)
{
  const Scenario sc = parse_scenario(minimal_doc());
  EXPECT_EQ(sc.name, "minimal");
  EXPECT_EQ(sc.ego_index(), 0u);
  ASSERT_EQ(sc.timeline.size(), 1u);
  EXPECT_DOUBLE_EQ(sc.timeline[0].states[0].state.speed, 10.0);
}

TEST(Scenario, MissingEgoIsRejected)
{
  Json doc = minimal_doc();
  doc["agents"][0]["role"] = "oru";
  EXPECT_EQ(error_of(doc), "no ego agent");
}

TEST(Scenario, RoundTripIsBitIdentical)
{
  for (const Scenario & sc : {synth_tailgate(TailgateParams{}), synth_sdli(SdliParams{}), synth_scp(ScpTraffic{})}) {
    const std::string text = dump_scenario(sc);
    EXPECT_EQ(dump_scenario(parse_scenario(Json::parse(text))), text) << sc.name;
  }
}

TEST(Scenario, ErrorsNameTheRecord)
{
  Json doc = tailgate_doc();
  ASSERT_GE(doc["agents"].size(), 3u);
  doc["agents"][2].erase("length");
  EXPECT_EQ(error_of(doc), "agents[2].length: missing field");

  Json renamed = tailgate_doc();
  renamed["agents"][1]["id"] = "ego";
  EXPECT_EQ(error_of(renamed), "timeline[0].states[1].agent: unknown agent id 'lead'");

  Scenario dup = synth_tailgate(TailgateParams{});
  dup.agents[1].id = "ego";
  try {
    dup.validate();
    ADD_FAILURE() << "duplicate id accepted";
  } catch (const ScenarioError & e) {
    EXPECT_EQ(std::string(e.what()), "agents[1].id: duplicate agent id 'ego'");
  }

  Json bad_cadence = tailgate_doc();
  bad_cadence["cadence"] = 0.0;
  EXPECT_EQ(error_of(bad_cadence), "cadence: must be positive");
}

TEST(Scenario, DanglingSuccessorIsRejected)
{
  Json doc = minimal_doc();
  doc["roadgraph"]["lanes"][0]["successors"] = Json::array({"nowhere"});
  EXPECT_NE(error_of(doc).find("nowhere"), std::string::npos);
}

TEST(Synth, OutputsValidate)
{
  EXPECT_NO_THROW(synth_tailgate(0.5, 30.0, 3).validate());
  EXPECT_NO_THROW(synth_sdli(2.0, 1.0).validate());
  EXPECT_NO_THROW(synth_scp(ScpTraffic{}).validate());
}

TEST(Synth, TailgateSpacingMatchesGap)
{
  for (const double gap : {0.5, 1.5}) {
    TailgateParams p;
    p.gap_s = gap;
    p.spacing_wobble = 0.0;
    const Scenario sc = synth_tailgate(p);
    const auto & s = sc.timeline.front().states;
    // bumper-to-bumper spacing between ego (index 0) and lead (index 1)
    const double spacing = s[1].state.x - s[0].state.x - sc.agents[0].body.length;
    EXPECT_NEAR(spacing, gap * p.speed, 1e-6) << gap;
  }
}

TEST(Synth, SdliBrakingShape)
{
  const SdliParams p;
  double lowest = 0.0, t_low = 0.0;
  for (double t = 0.0; t <= p.duration; t += 0.01) {
    const double a = sdli_ego_accel(p, t);
    EXPECT_GE(a, p.brake_accel - 1e-12);
    if (a < lowest) {
      lowest = a;
      t_low = t;
    }
  }
  EXPECT_DOUBLE_EQ(lowest, p.brake_accel);
  EXPECT_GT(t_low, p.cut_in_time);
  EXPECT_DOUBLE_EQ(sdli_ego_accel(p, p.cut_in_time), 0.0);
  EXPECT_NEAR(sdli_ego_accel(p, p.duration), 0.0, 1e-12);
}

TEST(Config, DefaultsAndParsing)
{
  const RunConfig d = parse_run_config(nlohmann::json::object());
  EXPECT_EQ(d.workers, 1);
  EXPECT_DOUBLE_EQ(d.fsm_violation_min_s, 1.0);
  EXPECT_EQ(d.ego_lane_restriction, EgoLaneRestriction::unrestricted);
  EXPECT_DOUBLE_EQ(d.assumptions.horizon, 4.0);

  const RunConfig c = parse_run_config(nlohmann::json::parse(
    R"({"ego_lane_restriction": "in_lane", "seed": 9, "workers": 3,
        "assumptions": {"horizon": 2.0, "raster_resolution": 0.5}})"));
  EXPECT_EQ(c.ego_lane_restriction, EgoLaneRestriction::in_lane);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.workers, 3);
  EXPECT_DOUBLE_EQ(c.assumptions.horizon, 2.0);
  EXPECT_DOUBLE_EQ(c.assumptions.raster_resolution, 0.5);

  const RunConfig back = parse_run_config(nlohmann::json::parse(run_config_to_json(c).dump()));
  EXPECT_EQ(run_config_to_json(back), run_config_to_json(c));
}

TEST(Config, RejectsBadInput)
{
  EXPECT_THROW(parse_run_config(nlohmann::json::parse(R"({"wrokers": 2})")), ConfigError);
  EXPECT_THROW(parse_run_config(nlohmann::json::parse(R"({"workers": 0})")), ConfigError);
  EXPECT_THROW(parse_run_config(nlohmann::json::parse(R"({"assumptions": {"bogus": 1}})")), ConfigError);
  EXPECT_THROW(parse_run_config(nlohmann::json::parse(R"({"seed": "x"})")), ConfigError);
}

TEST(Sweep, ParamsAndValues)
{
  EXPECT_EQ(parse_sweep_param("replanning_delay"), SweepParam::replanning_delay);
  EXPECT_EQ(parse_sweep_param("a_min"), SweepParam::accel_min);
  EXPECT_EQ(parse_sweep_param("roadgraph"), SweepParam::roadgraph);
  EXPECT_THROW(parse_sweep_param("speed"), ConfigError);

  const RunConfig base;
  const RunConfig r = apply_sweep_value(base, SweepParam::replanning_delay, "1.5");
  EXPECT_DOUBLE_EQ(r.ego_profile_pair("vehicle").normal.replanning_delay, 1.5);
  const RunConfig a = apply_sweep_value(base, SweepParam::accel_min, "-4");
  EXPECT_DOUBLE_EQ(a.ego_profile_pair("vehicle").surprising.accel_min, -4.0);
  EXPECT_DOUBLE_EQ(a.assumptions.profiles_for("vehicle").surprising.accel_min, -7.3);
  EXPECT_EQ(
    apply_sweep_value(base, SweepParam::roadgraph, "in_lane").ego_lane_restriction, EgoLaneRestriction::in_lane);
  EXPECT_THROW(apply_sweep_value(base, SweepParam::roadgraph, "sometimes"), ConfigError);
  EXPECT_THROW(apply_sweep_value(base, SweepParam::accel_min, "abc"), ConfigError);
}

TEST(Analysis, EmptyRoadCruiseHasNoViolation)
{
  Json doc = minimal_doc();
  doc["roadgraph"]["road_polygon"] = Json::parse("[[0, -2], [300, -2], [300, 2], [0, 2]]");
  doc["roadgraph"]["lanes"][0]["centerline"] = Json::parse("[[0, 0, 0, 0], [300, 0, 0, 0]]");
  doc["roadgraph"]["lanes"][0]["left_boundary"] = Json::parse("[[0, 1.75], [300, 1.75]]");
  doc["roadgraph"]["lanes"][0]["right_boundary"] = Json::parse("[[0, -1.75], [300, -1.75]]");
  for (int i = 1; i < 5; ++i) {
    Json e = doc["timeline"][0];
    e["t"] = 0.1 * i;
    e["states"][0]["x"] = 10.0 + i;
    doc["timeline"].push_back(e);
  }
  const Scenario sc = parse_scenario(doc);
  const RunConfig cfg;
  const AnalysisResult r = analyze(sc, cfg);
  ASSERT_EQ(r.frames.size(), 5u);
  EXPECT_DOUBLE_EQ(r.metrics.frame_violation_rate, 0.0);
  for (const auto & f : r.frames) EXPECT_FALSE(f.frame_violation);

  const Json report = metrics_report(r, cfg);
  for (const char * key : {"scenario", "config", "frame_count", "frame_violation_rate", "fsm_violations", "frames"}) {
    EXPECT_TRUE(report.contains(key)) << key;
  }
  EXPECT_EQ(report["frame_count"], 5);
}

TEST(Render, DeterministicAndHonest)
{
  const Scenario sc = synth_tailgate(TailgateParams{0.5});
  RunConfig cfg;
  cfg.assumptions.horizon = 4.0;
  const RasterSpec spec = scenario_raster_spec(sc, cfg.assumptions);
  std::size_t last = 0;
  const auto frames = analyze(sc, cfg).frames;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].frame_violation) last = i;
  }
  const FrameArtifacts violating = analyze_frame(sc, last, cfg, spec);
  ASSERT_TRUE(violating.result.frame_violation);
  const std::string svg = render_frame_svg(violating, sc.roadgraph);
  EXPECT_EQ(svg, render_frame_svg(analyze_frame(sc, last, cfg, spec), sc.roadgraph));
  EXPECT_EQ(svg.find("drivable-at-horizon"), std::string::npos);

  const FrameArtifacts free = analyze_frame(synth_tailgate(TailgateParams{1.5}), 0, cfg, spec);
  ASSERT_FALSE(free.result.frame_violation);
  EXPECT_NE(render_frame_svg(free, sc.roadgraph).find("drivable-at-horizon"), std::string::npos);
}

}  // namespace
}  // namespace fsm
