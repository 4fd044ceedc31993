#pragma once

#include <vector>

#include "vartrack/consensus.hpp"
#include "vartrack/models.hpp"
#include "vartrack/scenario.hpp"

namespace vartrack {

// Per-sensor association posteriors: q(j, k) = q(theta_j = k), rows are
// measurements, column 0 is the clutter hypothesis. Every row sums to 1.
struct AssociationWeights {
  MatX q;

  int measurements() const { return static_cast<int>(q.rows()); }
  int hypotheses() const { return static_cast<int>(q.cols()); }
};

// Synthetic Gaussian observation summarizing the association-weighted
// evidence for one target across sensors. has_update is false when the
// fused precision is numerically zero (no association mass anywhere); the
// state update then leaves the prediction untouched.
struct PseudoMeasurement {
  bool has_update = false;
  Vec2 y_bar = Vec2::Zero();
  Mat2 r_bar = Mat2::Zero();
};

// Fused precision below this trace is treated as "no evidence". Detection
// works from the omega sums alone so the centralised and distributed paths
// apply the identical rule.
inline constexpr double kNoUpdateTraceEps = 1e-12;

/// Initial q(theta): clutter weight Lambda_0/V against per-target
/// Lambda_k * N(y; H mu, H Sigma H^T + R_k), normalized per row in log domain.
AssociationWeights init_associations(const MeasurementBatch& batch, const SensorModel& sensor,
                                     const std::vector<GaussianBelief>& predicted);

/// Association-weighted information statistics for every target.
ConsensusStat local_stats(const MeasurementBatch& batch, const SensorModel& sensor,
                          const AssociationWeights& assoc);

/// R_bar = (sum_s omega1_s)^-1, Y_bar = R_bar * sum_s omega2_s.
std::vector<PseudoMeasurement> fuse_stats_centralised(
    const std::vector<ConsensusStat>& per_sensor);

/// Same fusion from a consensus average: the sum is N_s * average.
std::vector<PseudoMeasurement> fuse_stats_distributed(const ConsensusStat& average,
                                                      int n_sensors);

/// Kalman measurement update of the prediction with (Y_bar, R_bar) through H,
/// Joseph-form covariance. No-update marker returns the prediction unchanged.
GaussianBelief update_state(const GaussianBelief& predicted, const PseudoMeasurement& pm,
                            const Mat24& H);

/// Re-update q(theta) against the current posteriors: per-target weight
/// Lambda_k * N(y; H mu, R_k) * exp(-0.5 tr(R_k^-1 H Sigma H^T)).
AssociationWeights update_associations(const MeasurementBatch& batch, const SensorModel& sensor,
                                       const std::vector<GaussianBelief>& posterior);

struct CaviOptions {
  int i_max = 5;
  // Convergence-detection mode; i_max still bounds the iteration count.
  bool use_convergence = false;
  double mean_tol = 1e-6;
  double assoc_tol = 1e-8;
};

struct CaviTraceEntry {
  double max_mean_change = 0.0;
  double max_assoc_change = 0.0;  // max row L1 change
};

struct CaviResult {
  std::vector<GaussianBelief> beliefs;        // after the last state update
  std::vector<AssociationWeights> assoc;      // per sensor, after the last re-update
  std::vector<CaviTraceEntry> trace;          // one entry per iteration
  int iterations = 0;
};

/// The full coordinate-ascent alternation over any number of sensors with
/// summed statistics; every iteration re-updates the predictive prior with
/// the current pseudo-measurements. One batch per sensor; all sensors share H.
CaviResult run_cavi(const std::vector<MeasurementBatch>& batches,
                    const std::vector<SensorModel>& sensors,
                    const std::vector<GaussianBelief>& predicted, const CaviOptions& opts);

}  // namespace vartrack
