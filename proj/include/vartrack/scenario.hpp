#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vartrack/models.hpp"
#include "vartrack/rng.hpp"

namespace vartrack {

struct GraphConfig {
  double radius = 0.55;  // geometric connection radius, sensor positions in the unit square
  double p_drop = 0.0;   // per-round i.i.d. edge deletion probability
  int rounds = 1;        // pre-generated rounds when p_drop > 0 (reused cyclically)
  int max_retries = 1000;
};

struct ScenarioConfig {
  int targets = 8;
  int sensors = 6;
  int steps = 30;
  double tau = 1.0;
  double sigma = 5.0;
  double clutter_rate = 100.0;
  double target_rate = 1.0;
  double noise_var = 100.0;  // R = noise_var * I
  std::vector<double> clutter_rate_per_sensor;  // optional overrides, size N_s
  std::vector<double> noise_var_per_sensor;
  Rect region{{0.0, 0.0}, {1000.0, 1000.0}};
  double speed_min = 5.0;
  double speed_max = 15.0;
  double prior_pos_std = 10.0;
  double prior_vel_std = 5.0;
  GraphConfig graph;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const ScenarioConfig& cfg);

struct MeasurementBatch {
  int sensor_id = 0;
  int time_step = 0;
  std::vector<Vec2> points;
  // Origin of each point (0 = clutter, k = target k). Diagnostics only;
  // trackers never read this.
  std::vector<int> origins;

  int count() const { return static_cast<int>(points.size()); }
};

// Undirected sensor network; one edge set per consensus round. A single
// stored round means a static topology. Round indices wrap modulo the
// stored count (a cyclic schedule for time-varying graphs).
struct SensorGraph {
  int n_sensors = 0;
  std::vector<std::vector<std::pair<int, int>>> rounds;  // edges with i < j

  const std::vector<std::pair<int, int>>& edges(int round) const {
    return rounds[static_cast<std::size_t>(round) % rounds.size()];
  }
  std::vector<int> degrees(int round) const;
  std::vector<std::vector<int>> adjacency(int round) const;
};

bool is_connected(int n, const std::vector<std::pair<int, int>>& edges);

GroundTruthState generate_ground_truth(const ScenarioConfig& cfg, Rng& rng);

/// Sensor models from the config defaults plus any per-sensor overrides.
std::vector<SensorModel> build_sensors(const ScenarioConfig& cfg);

/// Batches indexed [step][sensor]. One RNG stream per sensor, derived from seed.
std::vector<std::vector<MeasurementBatch>> generate_measurements(
    const GroundTruthState& truth, const std::vector<SensorModel>& sensors,
    std::uint64_t seed);

/// Connected random geometric graph; every round is re-checked for
/// connectivity and resampled within the retry budget. Throws when the
/// budget is exhausted.
SensorGraph generate_sensor_graph(const ScenarioConfig& cfg, int rounds, Rng& rng);

struct Scenario {
  ScenarioConfig config;
  GroundTruthState truth;
  std::vector<std::vector<MeasurementBatch>> batches;  // [step][sensor]
  SensorGraph graph;
};

/// Full dataset from (config, seed): truth, per-sensor batches, graph.
Scenario generate_scenario(const ScenarioConfig& cfg);

/// Shared initial prior p(X_0): centered on the true initial state with the
/// configured position/velocity standard deviations.
std::vector<GaussianBelief> initial_prior(const ScenarioConfig& cfg,
                                          const GroundTruthState& truth);

}  // namespace vartrack
