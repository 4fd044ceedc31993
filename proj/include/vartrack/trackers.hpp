#pragma once

#include <string>
#include <vector>

#include "vartrack/vb_core.hpp"

namespace vartrack {

enum class TrackerMode { centralised, distributed, aa_fusion };

std::string to_string(TrackerMode mode);
TrackerMode tracker_mode_from_string(const std::string& name);

struct TrackerConfig {
  TrackerMode mode = TrackerMode::centralised;
  int i_max = 5;
  int consensus_iters = 20;  // rounds per coordinate-ascent iteration
  MotionModel motion;
  std::vector<GaussianBelief> prior;  // shared p(X_0), one belief per target
};

// Per-sensor filtering state. Centralised mode keeps exactly one belief set
// (the hub); distributed modes keep one per sensor. The first processed step
// updates the prior in place (no prediction); later steps predict first.
struct TrackState {
  std::vector<std::vector<GaussianBelief>> beliefs;  // [sensor][target]
  std::vector<AssociationWeights> assoc;             // per sensor
  int time_index = 0;
  int consensus_round_cursor = 0;  // graph rounds consumed so far
};

TrackState make_initial_state(const TrackerConfig& cfg, int n_sensors);

/// Hub fusion: sum the per-sensor statistics directly.
TrackState centralised_step(TrackState state, const std::vector<MeasurementBatch>& batches,
                            const std::vector<SensorModel>& sensors, const TrackerConfig& cfg);

/// Consensus fusion: every sensor reconstructs the global statistics via
/// Metropolis averaging and updates locally.
TrackState distributed_step(TrackState state, const std::vector<MeasurementBatch>& batches,
                            const std::vector<SensorModel>& sensors, const SensorGraph& graph,
                            const TrackerConfig& cfg);

/// Arithmetic-average baseline: each sensor tracks on its own measurements,
/// then the per-sensor posterior moments are consensus-averaged and
/// moment-matched into the shared posterior for the next step.
TrackState aa_fusion_step(TrackState state, const std::vector<MeasurementBatch>& batches,
                          const std::vector<SensorModel>& sensors, const SensorGraph& graph,
                          const TrackerConfig& cfg);

struct StepSnapshot {
  std::vector<std::vector<GaussianBelief>> beliefs;  // [sensor][target]
};

// snapshots[0] is the shared prior; snapshots[n+1] the posterior after
// processing time step n.
struct TrackHistory {
  std::vector<StepSnapshot> snapshots;

  int steps() const { return static_cast<int>(snapshots.size()) - 1; }
};

/// Folds the configured step function over the scenario.
TrackHistory run_sequence(const Scenario& scenario, const TrackerConfig& cfg);

}  // namespace vartrack
