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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace
{

constexpr int kExitValidation = 2;
constexpr int kExitConfig = 3;

fsm::RunConfig base_config(const std::string & path)
{
  return path.empty() ? fsm::RunConfig{} : fsm::load_run_config(path);
}

void write_text(const std::filesystem::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out << text;
}

std::string format_rate(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Field of safe motion analysis"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string config_path;
  std::string out_path;
  std::string render_dir;
  bool ego_in_lane = false;
  std::uint64_t seed = 0;
  int workers = 0;
  auto * analyze = app.add_subcommand("analyze", "Analyse a scenario and write a metrics report");
  analyze->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  analyze->add_option("--config", config_path, "Run configuration JSON");
  analyze->add_flag("--ego-in-lane", ego_in_lane, "Confine the ego to its lanes");
  auto * seed_opt = analyze->add_option("--seed", seed, "Sampling seed");
  analyze->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  analyze->add_option("--render", render_dir, "Directory for per-frame SVG renders");
  analyze->add_option("--out", out_path, "Metrics report JSON")->required();

  auto * synth = app.add_subcommand("synth", "Write a synthetic scenario");
  synth->require_subcommand(1);
  fsm::TailgateParams tailgate;
  auto * tg = synth->add_subcommand("tailgate", "Car following on a multi-lane freeway");
  tg->add_option("--gap", tailgate.gap_s, "Time gap to the lead [s]")->check(CLI::PositiveNumber);
  tg->add_option("--speed", tailgate.speed, "Speed [m/s]")->check(CLI::PositiveNumber);
  tg->add_option("--lanes", tailgate.lanes, "Lane count")->check(CLI::PositiveNumber);
  tg->add_option("--duration", tailgate.duration, "Duration [s]")->check(CLI::PositiveNumber);
  tg->add_option("--out", out_path, "Scenario JSON")->required();
  fsm::SdliParams sdli;
  auto * sd = synth->add_subcommand("sdli", "Same-direction lateral incursion");
  sd->add_option("--cut-in-time", sdli.cut_in_time, "Cut-in start [s]")->check(CLI::PositiveNumber);
  sd->add_option("--lateral-rate", sdli.lateral_rate, "Lateral speed [m/s]")
    ->check(CLI::PositiveNumber);
  sd->add_option("--out", out_path, "Scenario JSON")->required();
  fsm::ScpTraffic scp;
  bool no_cross = false;
  auto * sc = synth->add_subcommand("scp", "Straight crossing paths at a stop sign");
  sc->add_flag("--no-cross-traffic", no_cross, "Drop both crossing vehicles");
  sc->add_option("--duration", scp.duration, "Duration [s]")->check(CLI::NonNegativeNumber);
  sc->add_option("--out", out_path, "Scenario JSON")->required();

  std::string param;
  std::vector<std::string> values;
  std::vector<std::string> scenarios;
  auto * sweep = app.add_subcommand("sweep", "Frame violation rate over a parameter sweep");
  sweep->add_option("--param", param, "replanning_delay | a_min | roadgraph")->required();
  sweep->add_option("--values", values, "Values to sweep")->required()->delimiter(',');
  sweep->add_option("--scenario", scenarios, "Scenario JSON files")->required();
  sweep->add_option("--config", config_path, "Run configuration JSON");
  sweep->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_path, "CSV table")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      auto scenario = fsm::load_scenario(scenario_path);
      auto config = base_config(config_path);
      if (ego_in_lane) {
        config.ego_lane_restriction = fsm::EgoLaneRestriction::in_lane;
      }
      if (*seed_opt) {
        config.seed = seed;
      }
      if (workers > 0) {
        config.workers = workers;
      }
      fsm::FrameCallback on_frame;
      if (!render_dir.empty()) {
        config.render = true;
        std::filesystem::create_directories(render_dir);
        on_frame = [&](const fsm::FrameArtifacts & frame) {
          char name[32];
          std::snprintf(name, sizeof(name), "frame_%04zu.svg", frame.frame_index);
          fsm::write_frame_svg(frame, scenario.roadgraph, std::filesystem::path(render_dir) / name);
        };
      }
      const auto result = fsm::analyze(scenario, config, on_frame);
      write_text(out_path, fsm::metrics_report(result, config).dump(2) + "\n");
      std::cout << scenario.name << ": frame violation rate "
                << format_rate(result.metrics.frame_violation_rate) << ", "
                << result.metrics.fsm_violations.size() << " FSM violation(s)\n";
    } else if (synth->parsed()) {
      fsm::Scenario scenario;
      if (tg->parsed()) {
        scenario = fsm::synth_tailgate(tailgate);
      } else if (sd->parsed()) {
        scenario = fsm::synth_sdli(sdli);
      } else {
        scp.eastbound = !no_cross;
        scp.westbound = !no_cross;
        scenario = fsm::synth_scp(scp);
      }
      fsm::save_scenario(scenario, out_path);
    } else if (sweep->parsed()) {
      auto config = base_config(config_path);
      if (workers > 0) {
        config.workers = workers;
      }
      const auto which = fsm::parse_sweep_param(param);
      std::vector<fsm::Scenario> loaded;
      for (const auto & path : scenarios) {
        loaded.push_back(fsm::load_scenario(path));
      }
      std::string csv = "param,value,agent,frame_violation_rate\n";
      for (const auto & value : values) {
        const auto cfg = fsm::apply_sweep_value(config, which, value);
        for (const auto & s : loaded) {
          const auto result = fsm::analyze(s, cfg);
          csv += param + "," + value + "," + s.name + "," +
                 format_rate(result.metrics.frame_violation_rate) + "\n";
        }
      }
      write_text(out_path, csv);
    }
  } catch (const fsm::ConfigError & e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fsm::ScenarioError & e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fsm::RoadgraphError & e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
