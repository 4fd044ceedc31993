#include "vartrack/consensus.hpp"

#include <algorithm>
#include <stdexcept>

namespace vartrack {

VecX pack_stats(const ConsensusStat& stats) {
  VecX flat(5 * static_cast<int>(stats.size()));
  for (std::size_t k = 0; k < stats.size(); ++k) {
    const auto& s = stats[k];
    flat(5 * k + 0) = s.omega1(0, 0);
    flat(5 * k + 1) = s.omega1(0, 1);
    flat(5 * k + 2) = s.omega1(1, 1);
    flat(5 * k + 3) = s.omega2(0);
    flat(5 * k + 4) = s.omega2(1);
  }
  return flat;
}

ConsensusStat unpack_stats(const VecX& flat) {
  if (flat.size() % 5 != 0)
    throw std::invalid_argument("unpack_stats: flat size must be a multiple of 5");
  ConsensusStat stats(flat.size() / 5);
  for (std::size_t k = 0; k < stats.size(); ++k) {
    auto& s = stats[k];
    s.omega1(0, 0) = flat(5 * k + 0);
    s.omega1(0, 1) = s.omega1(1, 0) = flat(5 * k + 1);
    s.omega1(1, 1) = flat(5 * k + 2);
    s.omega2(0) = flat(5 * k + 3);
    s.omega2(1) = flat(5 * k + 4);
  }
  return stats;
}

MatX metropolis_weights(const SensorGraph& graph, int round) {
  const int n = graph.n_sensors;
  const auto deg = graph.degrees(round);
  MatX w = MatX::Zero(n, n);
  for (const auto& [i, j] : graph.edges(round)) {
    const double v = 1.0 / (1.0 + std::max(deg[i], deg[j]));
    w(i, j) = v;
    w(j, i) = v;
  }
  for (int i = 0; i < n; ++i) w(i, i) = 1.0 - w.row(i).sum();
  return w;
}

std::vector<VecX> consensus_round(const std::vector<VecX>& values, const MatX& weights) {
  const int n = static_cast<int>(values.size());
  if (weights.rows() != n || weights.cols() != n)
    throw std::invalid_argument("consensus_round: weight matrix does not match node count");
  for (const VecX& v : values)
    if (v.size() != values[0].size())
      throw std::invalid_argument("consensus_round: node vectors differ in size");

  std::vector<VecX> out(values.size());
  for (int s = 0; s < n; ++s) {
    VecX acc = VecX::Zero(values[0].size());
    for (int j = 0; j < n; ++j) {
      if (weights(s, j) != 0.0) acc += weights(s, j) * values[j];
    }
    out[s] = std::move(acc);
  }
  return out;
}

std::vector<VecX> run_consensus(std::vector<VecX> values, const SensorGraph& graph,
                                int iterations, int first_round) {
  for (int m = 0; m < iterations; ++m)
    values = consensus_round(values, metropolis_weights(graph, first_round + m));
  return values;
}

double consensus_disagreement(const std::vector<VecX>& values) {
  if (values.empty() || values[0].size() == 0) return 0.0;
  double spread = 0.0;
  double scale = 1.0;
  for (Eigen::Index i = 0; i < values[0].size(); ++i) {
    double lo = values[0](i), hi = values[0](i);
    for (const VecX& v : values) {
      lo = std::min(lo, v(i));
      hi = std::max(hi, v(i));
      scale = std::max(scale, std::abs(v(i)));
    }
    spread = std::max(spread, hi - lo);
  }
  return spread / scale;
}

ConsensusOutcome run_consensus_adaptive(std::vector<VecX> values, const SensorGraph& graph,
                                        double rel_tol, int max_iterations, int first_round) {
  ConsensusOutcome out;
  int m = 0;
  while (m < max_iterations && consensus_disagreement(values) >= rel_tol) {
    values = consensus_round(values, metropolis_weights(graph, first_round + m));
    ++m;
  }
  out.values = std::move(values);
  out.iterations = m;
  return out;
}

}  // namespace vartrack
