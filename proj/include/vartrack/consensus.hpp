#pragma once

#include <vector>

#include "vartrack/linalg.hpp"
#include "vartrack/scenario.hpp"

namespace vartrack {

// Association-weighted information statistics for one target at one sensor:
// omega1 = R^-1 * (total association mass), omega2 = R^-1 * (weighted
// measurement sum).
struct TargetStat {
  Mat2 omega1 = Mat2::Zero();
  Vec2 omega2 = Vec2::Zero();
};

// One sensor's statistics over all K targets.
using ConsensusStat = std::vector<TargetStat>;

// Flat wire layout: 5 scalars per target (3 unique entries of the symmetric
// omega1, 2 of omega2). Keeps post-consensus matrices exactly symmetric and
// halves the per-round traffic.
VecX pack_stats(const ConsensusStat& stats);
ConsensusStat unpack_stats(const VecX& flat);

/// Metropolis weight matrix for one round: W(s,j) = 1/(1+max(d_s,d_j)) on
/// edges, diagonal fills each row to 1. Symmetric, doubly stochastic.
MatX metropolis_weights(const SensorGraph& graph, int round);

/// One synchronous round: out_s = sum_j W(s,j) values_j.
std::vector<VecX> consensus_round(const std::vector<VecX>& values, const MatX& weights);

/// Fixed number of Metropolis rounds starting at graph round `first_round`.
std::vector<VecX> run_consensus(std::vector<VecX> values, const SensorGraph& graph,
                                int iterations, int first_round = 0);

/// Largest per-scalar spread max_s - min_s, relative to max(1, |values|).
double consensus_disagreement(const std::vector<VecX>& values);

struct ConsensusOutcome {
  std::vector<VecX> values;
  int iterations = 0;
};

/// Convergence-detection mode: stop once disagreement < rel_tol, bounded by
/// max_iterations.
ConsensusOutcome run_consensus_adaptive(std::vector<VecX> values, const SensorGraph& graph,
                                        double rel_tol, int max_iterations,
                                        int first_round = 0);

}  // namespace vartrack
