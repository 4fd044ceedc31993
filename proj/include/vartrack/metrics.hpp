#pragma once

#include <vector>

#include "vartrack/linalg.hpp"
#include "vartrack/models.hpp"
#include "vartrack/trackers.hpp"

namespace vartrack {

struct OspaParams {
  double p = 1.0;  // order
  double c = 50.0; // cut-off distance
};

void validate(const OspaParams& params);

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian,
/// O(n^3)). Returns the total cost; `assignment`, when given, receives the
/// column matched to each row.
double solve_assignment(const MatX& cost, std::vector<int>* assignment = nullptr);

/// OSPA distance between two 2-D point sets. Symmetric, bounded by c;
/// both sets empty gives 0.
double ospa(const std::vector<Vec2>& a, const std::vector<Vec2>& b, const OspaParams& params);

/// Mean OSPA over sensors for each time step (position means vs truth).
std::vector<double> per_step_mean_ospa(const TrackHistory& history,
                                       const GroundTruthState& truth,
                                       const OspaParams& params);

/// Additional mean over time steps, as plotted against consensus iterations.
double grand_mean(const std::vector<double>& per_step);

}  // namespace vartrack
