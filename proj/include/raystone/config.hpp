// Scenario configuration: JSON ingestion with full schema validation.
//
// A ScenarioConfig bundles everything a batch run needs: the wave mode, the
// material model (one side or an interface pair), the boundary metric, and the
// per-command parameter blocks.  Parsing is strict: unknown keys, wrong types,
// and out-of-domain values are rejected with a ConfigError whose message names
// the offending key, so a bad file never half-runs.
#pragma once

#include "raystone/material.hpp"
#include "raystone/speed_jets.hpp"
#include "raystone/synthesis.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace raystone {

struct ScenarioConfig {
  std::uint64_t seed = 1729;
  WaveKind mode = WaveKind::kRayleigh;

  // Model: `material` is the free-surface side (and the plus side of `pair`
  // when the interface mode is selected).
  MaterialField<double> material;
  MaterialPair<double> pair;
  BoundaryMetric<double> metric;
  Vec2<double> eval_point = Vec2<double>::Zero();

  // `scan`: number of slowness samples over the admissible interval.
  int scan_samples = 512;

  // `symbol` / `diag`: the boundary phase-space evaluation point.
  EllipticPoint<double> symbol_point{0.0, Vec2<double>::Zero(), 0.5, Vec2<double>(1.0, 0.0)};

  // `trace`: one characteristic.
  Vec2<double> ray_x0 = Vec2<double>(0.3, -0.2);
  Vec2<double> ray_xi0 = Vec2<double>(0.8, 0.6);
  double ray_time = 1.0;
  double ray_dt = 1e-3;
  bool ray_transport = true;

  // Spectral window shared by the synthesis drivers.
  Vec2<double> packet_center = Vec2<double>(4.0, 0.0);
  double packet_width = 0.5;
  int packet_n1 = 64;
  int packet_n2 = 64;

  // `synth`: snapshot times, spatial grid, and evaluation path.
  std::string synth_driver = "cauchy";  // "cauchy" | "source"
  std::vector<double> synth_times{0.8, 1.6, 2.4};
  XYGrid<double> synth_grid;
  SynthesisPath synth_path = SynthesisPath::kAuto;
  ChartPolicy<double> chart;

  // Source driver: vertical harmonic forcing through the spectral window.
  double source_frequency = 6.0;
  double source_amplitude = 1.0;
  double source_duration = 0.6;
  int source_samples = 241;

  // `ellipse`: orbit sampling point.
  Vec2<double> ellipse_x = Vec2<double>::Zero();
  Vec2<double> ellipse_xi = Vec2<double>(1.0, 0.0);
  double ellipse_amplitude = 1.0;
  int ellipse_samples = 64;

  // Speed model over this config's members; keep the config alive while the
  // returned view is in use.
  SpeedField<double> speed_field() const {
    return mode == WaveKind::kRayleigh ? SpeedField<double>::rayleigh(material, metric)
                                       : SpeedField<double>::stoneley(pair, metric);
  }
};

// Built-in defaults (free surface, unit material, identity metric) and the
// canonical JSON text that parses back to them.
ScenarioConfig default_config();
std::string default_config_text();

// Parse from JSON text; `origin` labels error messages (file name or "<builtin>").
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin);

// Read and parse a config file.  Throws ConfigError for unreadable files,
// malformed JSON, schema violations, and non-constructible models.
ScenarioConfig load_config(const std::string& path);

}  // namespace raystone
