#include "vartrack/vb_core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vartrack {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Rows of exp(lw) normalized with max-subtraction.
void normalize_rows_log(MatX& lw) {
  for (Eigen::Index j = 0; j < lw.rows(); ++j) {
    const double m = lw.row(j).maxCoeff();
    lw.row(j) = (lw.row(j).array() - m).exp();
    lw.row(j) /= lw.row(j).sum();
  }
}

void check_batch(const MeasurementBatch& batch, const SensorModel& sensor,
                 std::size_t beliefs) {
  if (static_cast<int>(beliefs) != sensor.num_targets())
    throw std::invalid_argument("associations: belief count does not match sensor targets");
  (void)batch;
}

}  // namespace

AssociationWeights init_associations(const MeasurementBatch& batch, const SensorModel& sensor,
                                     const std::vector<GaussianBelief>& predicted) {
  check_batch(batch, sensor, predicted.size());
  const int m = batch.count();
  const int k_total = sensor.num_targets();
  MatX lw(m, k_total + 1);

  const double clutter = sensor.clutter_rate() > 0.0
                             ? std::log(sensor.clutter_rate()) - std::log(sensor.volume())
                             : kNegInf;
  lw.col(0).setConstant(clutter);

  for (int k = 1; k <= k_total; ++k) {
    if (sensor.rates(k) <= 0.0) {
      lw.col(k).setConstant(kNegInf);
      continue;
    }
    const double log_rate = std::log(sensor.rates(k));
    const GaussianBelief& b = predicted[k - 1];
    const Vec2 mean = sensor.H * b.mean;
    // Predicted-evidence covariance H Sigma H^T + R_k.
    const Mat2 cov = symmetrize(sensor.H * b.cov * sensor.H.transpose()) + sensor.noise[k - 1];
    for (int j = 0; j < m; ++j)
      lw(j, k) = log_rate + gaussian_log_density(batch.points[j], mean, cov);
  }
  normalize_rows_log(lw);
  return AssociationWeights{std::move(lw)};
}

ConsensusStat local_stats(const MeasurementBatch& batch, const SensorModel& sensor,
                          const AssociationWeights& assoc) {
  if (assoc.measurements() != batch.count() || assoc.hypotheses() != sensor.num_targets() + 1)
    throw std::invalid_argument("local_stats: association shape does not match batch/sensor");
  ConsensusStat stats(sensor.num_targets());
  for (int k = 1; k <= sensor.num_targets(); ++k) {
    double mass = 0.0;
    Vec2 weighted_sum = Vec2::Zero();
    for (int j = 0; j < batch.count(); ++j) {
      mass += assoc.q(j, k);
      weighted_sum += assoc.q(j, k) * batch.points[j];
    }
    const Mat2 precision = symmetrize(sensor.noise[k - 1].inverse());
    stats[k - 1].omega1 = precision * mass;
    stats[k - 1].omega2 = precision * weighted_sum;
  }
  return stats;
}

namespace {

PseudoMeasurement fuse_single(const Mat2& omega1_sum, const Vec2& omega2_sum) {
  PseudoMeasurement pm;
  if (omega1_sum.trace() < kNoUpdateTraceEps) return pm;  // no evidence anywhere
  pm.has_update = true;
  pm.r_bar = symmetrize(omega1_sum.inverse());
  pm.y_bar = pm.r_bar * omega2_sum;
  return pm;
}

}  // namespace

std::vector<PseudoMeasurement> fuse_stats_centralised(
    const std::vector<ConsensusStat>& per_sensor) {
  if (per_sensor.empty())
    throw std::invalid_argument("fuse_stats_centralised: need at least one sensor");
  const std::size_t k_total = per_sensor[0].size();
  std::vector<PseudoMeasurement> out(k_total);
  for (std::size_t k = 0; k < k_total; ++k) {
    Mat2 omega1 = Mat2::Zero();
    Vec2 omega2 = Vec2::Zero();
    for (const ConsensusStat& s : per_sensor) {
      if (s.size() != k_total)
        throw std::invalid_argument("fuse_stats_centralised: sensors disagree on target count");
      omega1 += s[k].omega1;
      omega2 += s[k].omega2;
    }
    out[k] = fuse_single(omega1, omega2);
  }
  return out;
}

std::vector<PseudoMeasurement> fuse_stats_distributed(const ConsensusStat& average,
                                                      int n_sensors) {
  std::vector<PseudoMeasurement> out(average.size());
  for (std::size_t k = 0; k < average.size(); ++k)
    out[k] = fuse_single(n_sensors * average[k].omega1, n_sensors * average[k].omega2);
  return out;
}

GaussianBelief update_state(const GaussianBelief& predicted, const PseudoMeasurement& pm,
                            const Mat24& H) {
  if (!pm.has_update) return predicted;
  const Mat2 innovation_cov = symmetrize(H * predicted.cov * H.transpose()) + pm.r_bar;
  Eigen::LLT<Mat2> llt(innovation_cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("update_state: innovation covariance not invertible");
  const Mat42 gain = predicted.cov * H.transpose() * llt.solve(Mat2::Identity());
  GaussianBelief out;
  out.mean = predicted.mean + gain * (pm.y_bar - H * predicted.mean);
  const Mat4 ikh = Mat4::Identity() - gain * H;
  out.cov = symmetrize(ikh * predicted.cov * ikh.transpose() +
                       gain * pm.r_bar * gain.transpose());
  return out;
}

AssociationWeights update_associations(const MeasurementBatch& batch, const SensorModel& sensor,
                                       const std::vector<GaussianBelief>& posterior) {
  check_batch(batch, sensor, posterior.size());
  const int m = batch.count();
  const int k_total = sensor.num_targets();
  MatX lw(m, k_total + 1);

  const double clutter = sensor.clutter_rate() > 0.0
                             ? std::log(sensor.clutter_rate()) - std::log(sensor.volume())
                             : kNegInf;
  lw.col(0).setConstant(clutter);

  for (int k = 1; k <= k_total; ++k) {
    if (sensor.rates(k) <= 0.0) {
      lw.col(k).setConstant(kNegInf);
      continue;
    }
    const GaussianBelief& b = posterior[k - 1];
    const Vec2 mean = sensor.H * b.mean;
    const Mat2 r = sensor.noise[k - 1];
    // exp(-0.5 tr(R^-1 H Sigma H^T)) folded into the log weight; it does not
    // depend on the measurement.
    const Mat2 h_cov = symmetrize(sensor.H * b.cov * sensor.H.transpose());
    const double trace_term = -0.5 * (r.inverse() * h_cov).trace();
    const double log_rate = std::log(sensor.rates(k));
    for (int j = 0; j < m; ++j)
      lw(j, k) = log_rate + gaussian_log_density(batch.points[j], mean, r) + trace_term;
  }
  normalize_rows_log(lw);
  return AssociationWeights{std::move(lw)};
}

CaviResult run_cavi(const std::vector<MeasurementBatch>& batches,
                    const std::vector<SensorModel>& sensors,
                    const std::vector<GaussianBelief>& predicted, const CaviOptions& opts) {
  if (batches.size() != sensors.size())
    throw std::invalid_argument("run_cavi: one batch per sensor required");
  if (sensors.empty()) throw std::invalid_argument("run_cavi: need at least one sensor");
  const std::size_t n_sensors = sensors.size();
  const Mat24 H = sensors[0].H;

  CaviResult res;
  res.beliefs = predicted;
  res.assoc.resize(n_sensors);
  for (std::size_t s = 0; s < n_sensors; ++s)
    res.assoc[s] = init_associations(batches[s], sensors[s], predicted);

  for (int i = 0; i < opts.i_max; ++i) {
    std::vector<ConsensusStat> stats(n_sensors);
    for (std::size_t s = 0; s < n_sensors; ++s)
      stats[s] = local_stats(batches[s], sensors[s], res.assoc[s]);
    const auto pms = fuse_stats_centralised(stats);

    // Every iteration re-updates the predictive prior, not the previous
    // iterate, per the variational state update.
    std::vector<GaussianBelief> beliefs(predicted.size());
    CaviTraceEntry entry;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
      beliefs[k] = update_state(predicted[k], pms[k], H);
      entry.max_mean_change = std::max(
          entry.max_mean_change, (beliefs[k].mean - res.beliefs[k].mean).cwiseAbs().maxCoeff());
    }

    for (std::size_t s = 0; s < n_sensors; ++s) {
      AssociationWeights next = update_associations(batches[s], sensors[s], beliefs);
      if (next.q.size() > 0) {
        const double change = (next.q - res.assoc[s].q).cwiseAbs().rowwise().sum().maxCoeff();
        entry.max_assoc_change = std::max(entry.max_assoc_change, change);
      }
      res.assoc[s] = std::move(next);
    }

    res.beliefs = std::move(beliefs);
    res.trace.push_back(entry);
    res.iterations = i + 1;
    if (opts.use_convergence && entry.max_mean_change < opts.mean_tol &&
        entry.max_assoc_change < opts.assoc_tol)
      break;
  }
  return res;
}

}  // namespace vartrack
