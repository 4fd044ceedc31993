#include "vartrack/trackers.hpp"

#include <stdexcept>

namespace vartrack {

std::string to_string(TrackerMode mode) {
  switch (mode) {
    case TrackerMode::centralised: return "centralised";
    case TrackerMode::distributed: return "distributed";
    case TrackerMode::aa_fusion: return "aa_fusion";
  }
  return "unknown";
}

TrackerMode tracker_mode_from_string(const std::string& name) {
  if (name == "centralised") return TrackerMode::centralised;
  if (name == "distributed") return TrackerMode::distributed;
  if (name == "aa_fusion") return TrackerMode::aa_fusion;
  throw std::invalid_argument("unknown tracker mode: " + name);
}

TrackState make_initial_state(const TrackerConfig& cfg, int n_sensors) {
  if (cfg.prior.empty()) throw std::invalid_argument("TrackerConfig: prior must not be empty");
  if (cfg.mode != TrackerMode::centralised && cfg.consensus_iters < 0)
    throw std::invalid_argument("TrackerConfig: consensus_iters must be >= 0");
  TrackState state;
  const int copies = cfg.mode == TrackerMode::centralised ? 1 : n_sensors;
  state.beliefs.assign(copies, cfg.prior);
  state.assoc.resize(cfg.mode == TrackerMode::centralised ? n_sensors : copies);
  return state;
}

namespace {

std::vector<GaussianBelief> predict_all(const std::vector<GaussianBelief>& beliefs,
                                        const MotionModel& motion, bool first_step) {
  if (first_step) return beliefs;  // the prior already describes the first scan's state
  std::vector<GaussianBelief> out(beliefs.size());
  for (std::size_t k = 0; k < beliefs.size(); ++k) out[k] = predict(beliefs[k], motion);
  return out;
}

void check_step_inputs(const TrackState& state, const std::vector<MeasurementBatch>& batches,
                       const std::vector<SensorModel>& sensors) {
  if (batches.size() != sensors.size())
    throw std::invalid_argument("tracker step: one batch per sensor required");
  if (state.beliefs.empty()) throw std::invalid_argument("tracker step: uninitialized state");
}

// Moment packing for the AA baseline: mean (4) plus the upper triangle of
// the second moment Sigma + mu mu^T (10) per target.
constexpr int kMomentScalars = 14;

VecX pack_moments(const std::vector<GaussianBelief>& beliefs) {
  VecX flat(kMomentScalars * static_cast<int>(beliefs.size()));
  for (std::size_t k = 0; k < beliefs.size(); ++k) {
    const Mat4 second = beliefs[k].cov + beliefs[k].mean * beliefs[k].mean.transpose();
    int idx = kMomentScalars * static_cast<int>(k);
    for (int i = 0; i < 4; ++i) flat(idx++) = beliefs[k].mean(i);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) flat(idx++) = second(i, j);
  }
  return flat;
}

std::vector<GaussianBelief> unpack_moments(const VecX& flat) {
  std::vector<GaussianBelief> out(flat.size() / kMomentScalars);
  for (std::size_t k = 0; k < out.size(); ++k) {
    int idx = kMomentScalars * static_cast<int>(k);
    Vec4 mean;
    for (int i = 0; i < 4; ++i) mean(i) = flat(idx++);
    Mat4 second;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) second(i, j) = second(j, i) = flat(idx++);
    out[k].mean = mean;
    out[k].cov = symmetrize(second - mean * mean.transpose());
  }
  return out;
}

}  // namespace

TrackState centralised_step(TrackState state, const std::vector<MeasurementBatch>& batches,
                            const std::vector<SensorModel>& sensors, const TrackerConfig& cfg) {
  check_step_inputs(state, batches, sensors);
  const auto predicted = predict_all(state.beliefs[0], cfg.motion, state.time_index == 0);

  CaviOptions opts;
  opts.i_max = cfg.i_max;
  CaviResult res = run_cavi(batches, sensors, predicted, opts);

  state.beliefs[0] = std::move(res.beliefs);
  state.assoc = std::move(res.assoc);
  ++state.time_index;
  return state;
}

TrackState distributed_step(TrackState state, const std::vector<MeasurementBatch>& batches,
                            const std::vector<SensorModel>& sensors, const SensorGraph& graph,
                            const TrackerConfig& cfg) {
  check_step_inputs(state, batches, sensors);
  const std::size_t n_sensors = sensors.size();
  if (state.beliefs.size() != n_sensors)
    throw std::invalid_argument("distributed_step: state must hold one belief set per sensor");

  std::vector<std::vector<GaussianBelief>> predicted(n_sensors);
  for (std::size_t s = 0; s < n_sensors; ++s)
    predicted[s] = predict_all(state.beliefs[s], cfg.motion, state.time_index == 0);

  for (std::size_t s = 0; s < n_sensors; ++s)
    state.assoc[s] = init_associations(batches[s], sensors[s], predicted[s]);

  for (int i = 0; i < cfg.i_max; ++i) {
    std::vector<VecX> flat(n_sensors);
    for (std::size_t s = 0; s < n_sensors; ++s)
      flat[s] = pack_stats(local_stats(batches[s], sensors[s], state.assoc[s]));

    flat = run_consensus(std::move(flat), graph, cfg.consensus_iters,
                         state.consensus_round_cursor);
    state.consensus_round_cursor += cfg.consensus_iters;

    for (std::size_t s = 0; s < n_sensors; ++s) {
      const auto pms =
          fuse_stats_distributed(unpack_stats(flat[s]), static_cast<int>(n_sensors));
      std::vector<GaussianBelief>& beliefs = state.beliefs[s];
      for (std::size_t k = 0; k < beliefs.size(); ++k)
        beliefs[k] = update_state(predicted[s][k], pms[k], sensors[s].H);
      state.assoc[s] = update_associations(batches[s], sensors[s], beliefs);
    }
  }
  ++state.time_index;
  return state;
}

TrackState aa_fusion_step(TrackState state, const std::vector<MeasurementBatch>& batches,
                          const std::vector<SensorModel>& sensors, const SensorGraph& graph,
                          const TrackerConfig& cfg) {
  check_step_inputs(state, batches, sensors);
  const std::size_t n_sensors = sensors.size();
  if (state.beliefs.size() != n_sensors)
    throw std::invalid_argument("aa_fusion_step: state must hold one belief set per sensor");

  CaviOptions opts;
  opts.i_max = cfg.i_max;

  // Stage 1: purely local tracking per sensor.
  std::vector<VecX> flat(n_sensors);
  for (std::size_t s = 0; s < n_sensors; ++s) {
    const auto predicted = predict_all(state.beliefs[s], cfg.motion, state.time_index == 0);
    CaviResult res = run_cavi({batches[s]}, {sensors[s]}, predicted, opts);
    state.assoc[s] = std::move(res.assoc[0]);
    flat[s] = pack_moments(res.beliefs);
  }

  // Stage 2: consensus on the posterior moments, then moment-matched refit.
  flat = run_consensus(std::move(flat), graph, cfg.consensus_iters,
                       state.consensus_round_cursor);
  state.consensus_round_cursor += cfg.consensus_iters;

  for (std::size_t s = 0; s < n_sensors; ++s) state.beliefs[s] = unpack_moments(flat[s]);
  ++state.time_index;
  return state;
}

TrackHistory run_sequence(const Scenario& scenario, const TrackerConfig& cfg) {
  const auto& sc = scenario.config;
  if (static_cast<int>(cfg.prior.size()) != sc.targets)
    throw std::invalid_argument("run_sequence: prior size does not match scenario targets");
  if (static_cast<int>(scenario.batches.size()) != sc.steps)
    throw std::invalid_argument("run_sequence: scenario batches do not cover all steps");
  const auto sensors = build_sensors(sc);

  TrackState state = make_initial_state(cfg, sc.sensors);
  TrackHistory history;
  history.snapshots.push_back(StepSnapshot{state.beliefs});
  for (int n = 0; n < sc.steps; ++n) {
    switch (cfg.mode) {
      case TrackerMode::centralised:
        state = centralised_step(std::move(state), scenario.batches[n], sensors, cfg);
        break;
      case TrackerMode::distributed:
        state = distributed_step(std::move(state), scenario.batches[n], sensors, scenario.graph,
                                 cfg);
        break;
      case TrackerMode::aa_fusion:
        state = aa_fusion_step(std::move(state), scenario.batches[n], sensors, scenario.graph,
                               cfg);
        break;
    }
    history.snapshots.push_back(StepSnapshot{state.beliefs});
  }
  return history;
}

}  // namespace vartrack
