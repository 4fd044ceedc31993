#include "vartrack/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vartrack {

void validate(const OspaParams& params) {
  if (!(params.p >= 1.0)) throw std::invalid_argument("OspaParams: p must be >= 1");
  if (!(params.c > 0.0)) throw std::invalid_argument("OspaParams: c must be positive");
}

double solve_assignment(const MatX& cost, std::vector<int>* assignment) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("solve_assignment: matrix not square");
  const int n = static_cast<int>(cost.rows());
  if (n == 0) return 0.0;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  if (assignment) {
    assignment->assign(n, -1);
    for (int j = 1; j <= n; ++j) (*assignment)[p[j] - 1] = j - 1;
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += cost(p[j] - 1, j - 1);
  return total;
}

double ospa(const std::vector<Vec2>& a, const std::vector<Vec2>& b, const OspaParams& params) {
  validate(params);
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  const int m = static_cast<int>(small.size());
  const int n = static_cast<int>(large.size());
  if (n == 0) return 0.0;
  if (m == 0) return params.c;

  // Dummy rows pad to square at zero cost, so the assignment minimum equals
  // the best injection of the smaller set into the larger.
  MatX cost = MatX::Zero(n, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      cost(i, j) = std::pow(std::min((small[i] - large[j]).norm(), params.c), params.p);

  const double localisation = solve_assignment(cost);
  const double cardinality = std::pow(params.c, params.p) * (n - m);
  return std::pow((localisation + cardinality) / n, 1.0 / params.p);
}

std::vector<double> per_step_mean_ospa(const TrackHistory& history,
                                       const GroundTruthState& truth,
                                       const OspaParams& params) {
  if (history.steps() != truth.steps)
    throw std::invalid_argument("per_step_mean_ospa: history does not match truth length");
  std::vector<double> out(truth.steps, 0.0);
  for (int n = 0; n < truth.steps; ++n) {
    std::vector<Vec2> truth_pos(truth.targets);
    for (int k = 0; k < truth.targets; ++k)
      truth_pos[k] = Vec2(truth.at(n, k)(0), truth.at(n, k)(2));

    const auto& beliefs = history.snapshots[n + 1].beliefs;
    double acc = 0.0;
    for (const auto& sensor_beliefs : beliefs) {
      std::vector<Vec2> est(sensor_beliefs.size());
      for (std::size_t k = 0; k < sensor_beliefs.size(); ++k)
        est[k] = Vec2(sensor_beliefs[k].mean(0), sensor_beliefs[k].mean(2));
      acc += ospa(est, truth_pos, params);
    }
    out[n] = acc / static_cast<double>(beliefs.size());
  }
  return out;
}

double grand_mean(const std::vector<double>& per_step) {
  if (per_step.empty()) return 0.0;
  double acc = 0.0;
  for (double v : per_step) acc += v;
  return acc / static_cast<double>(per_step.size());
}

}  // namespace vartrack
