#include "vartrack/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vartrack {

void validate(const ScenarioConfig& cfg) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("ScenarioConfig: " + field + " " + why);
  };
  if (cfg.targets < 1) fail("targets", "must be >= 1");
  if (cfg.sensors < 1) fail("sensors", "must be >= 1");
  if (cfg.steps < 0) fail("steps", "must be >= 0");
  if (!(cfg.tau > 0.0)) fail("tau", "must be positive");
  if (cfg.sigma < 0.0) fail("sigma", "must be non-negative");
  if (cfg.clutter_rate < 0.0) fail("clutter_rate", "must be non-negative");
  if (cfg.target_rate < 0.0) fail("target_rate", "must be non-negative");
  if (!(cfg.noise_var > 0.0)) fail("noise_var", "must be positive");
  if (!cfg.clutter_rate_per_sensor.empty() &&
      cfg.clutter_rate_per_sensor.size() != static_cast<std::size_t>(cfg.sensors))
    fail("clutter_rate_per_sensor", "must have one entry per sensor");
  if (!cfg.noise_var_per_sensor.empty() &&
      cfg.noise_var_per_sensor.size() != static_cast<std::size_t>(cfg.sensors))
    fail("noise_var_per_sensor", "must have one entry per sensor");
  if (!(cfg.region.volume() > 0.0)) fail("region", "must have positive volume");
  if (cfg.speed_min < 0.0 || cfg.speed_max < cfg.speed_min)
    fail("speed_min/speed_max", "must satisfy 0 <= speed_min <= speed_max");
  if (!(cfg.prior_pos_std > 0.0)) fail("prior_pos_std", "must be positive");
  if (!(cfg.prior_vel_std > 0.0)) fail("prior_vel_std", "must be positive");
  if (!(cfg.graph.radius > 0.0)) fail("graph.radius", "must be positive");
  if (cfg.graph.p_drop < 0.0 || cfg.graph.p_drop > 1.0) fail("graph.p_drop", "must be in [0,1]");
  if (cfg.graph.rounds < 1) fail("graph.rounds", "must be >= 1");
  if (cfg.graph.max_retries < 1) fail("graph.max_retries", "must be >= 1");
}

std::vector<int> SensorGraph::degrees(int round) const {
  std::vector<int> d(n_sensors, 0);
  for (const auto& [i, j] : edges(round)) {
    ++d[i];
    ++d[j];
  }
  return d;
}

std::vector<std::vector<int>> SensorGraph::adjacency(int round) const {
  std::vector<std::vector<int>> adj(n_sensors);
  for (const auto& [i, j] : edges(round)) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  return adj;
}

bool is_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (const auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  return visited == n;
}

GroundTruthState generate_ground_truth(const ScenarioConfig& cfg, Rng& rng) {
  validate(cfg);
  GroundTruthState truth;
  truth.steps = cfg.steps;
  truth.targets = cfg.targets;
  truth.states.resize(static_cast<std::size_t>(cfg.steps) * cfg.targets);
  if (cfg.steps == 0) return truth;

  // Spawn uniformly over the central 80% of the region; speed magnitude
  // uniform with a uniform heading.
  const Vec2 extent = cfg.region.hi - cfg.region.lo;
  const Vec2 lo = cfg.region.lo + 0.1 * extent;
  const Vec2 hi = cfg.region.hi - 0.1 * extent;
  for (int k = 0; k < cfg.targets; ++k) {
    const double x = rng.uniform(lo.x(), hi.x());
    const double y = rng.uniform(lo.y(), hi.y());
    const double speed = rng.uniform(cfg.speed_min, cfg.speed_max);
    const double heading = rng.uniform(0.0, kTwoPi);
    truth.at(0, k) = Vec4(x, speed * std::cos(heading), y, speed * std::sin(heading));
  }

  const MotionModel model = build_cv_model(cfg.tau, cfg.sigma);
  // Cholesky factor of the per-dimension 2x2 process noise block.
  Mat2 lq = Mat2::Zero();
  if (cfg.sigma > 0.0) {
    Eigen::LLT<Mat2> llt(model.Q.block<2, 2>(0, 0));
    lq = llt.matrixL();
  }
  for (int n = 1; n < cfg.steps; ++n) {
    for (int k = 0; k < cfg.targets; ++k) {
      Vec4 next = model.F * truth.at(n - 1, k);
      if (cfg.sigma > 0.0) {
        const Vec2 w1 = lq * Vec2(rng.normal(), rng.normal());
        const Vec2 w2 = lq * Vec2(rng.normal(), rng.normal());
        next += Vec4(w1.x(), w1.y(), w2.x(), w2.y());
      }
      truth.at(n, k) = next;
    }
  }
  return truth;
}

std::vector<SensorModel> build_sensors(const ScenarioConfig& cfg) {
  validate(cfg);
  std::vector<SensorModel> sensors(cfg.sensors);
  for (int s = 0; s < cfg.sensors; ++s) {
    SensorModel& m = sensors[s];
    m.sensor_id = s;
    const double clutter = cfg.clutter_rate_per_sensor.empty() ? cfg.clutter_rate
                                                               : cfg.clutter_rate_per_sensor[s];
    const double var =
        cfg.noise_var_per_sensor.empty() ? cfg.noise_var : cfg.noise_var_per_sensor[s];
    m.rates = VecX::Constant(cfg.targets + 1, cfg.target_rate);
    m.rates(0) = clutter;
    m.noise.assign(cfg.targets, var * Mat2::Identity());
    m.region = cfg.region;
    validate(m);
  }
  return sensors;
}

namespace {

MeasurementBatch generate_batch(const GroundTruthState& truth, const SensorModel& sensor,
                                int step, Rng& rng) {
  MeasurementBatch batch;
  batch.sensor_id = sensor.sensor_id;
  batch.time_step = step;
  for (int k = 1; k <= truth.targets; ++k) {
    const int m = rng.poisson(sensor.rates(k));
    const Mat2 r = sensor.noise[k - 1];
    Eigen::LLT<Mat2> llt(r);
    const Mat2 l = llt.matrixL();
    const Vec2 center = sensor.H * truth.at(step, k - 1);
    for (int i = 0; i < m; ++i) {
      const Vec2 z(rng.normal(), rng.normal());
      batch.points.push_back(center + l * z);  // returns outside the region are kept
      batch.origins.push_back(k);
    }
  }
  const int clutter_count = rng.poisson(sensor.clutter_rate());
  for (int i = 0; i < clutter_count; ++i) {
    batch.points.emplace_back(rng.uniform(sensor.region.lo.x(), sensor.region.hi.x()),
                              rng.uniform(sensor.region.lo.y(), sensor.region.hi.y()));
    batch.origins.push_back(0);
  }
  // Fisher-Yates so the tracker sees no ordering hint.
  for (std::size_t i = batch.points.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(batch.points[i - 1], batch.points[j]);
    std::swap(batch.origins[i - 1], batch.origins[j]);
  }
  return batch;
}

}  // namespace

std::vector<std::vector<MeasurementBatch>> generate_measurements(
    const GroundTruthState& truth, const std::vector<SensorModel>& sensors,
    std::uint64_t seed) {
  std::vector<Rng> streams;
  streams.reserve(sensors.size());
  for (std::size_t s = 0; s < sensors.size(); ++s)
    streams.push_back(Rng::stream(seed, "measurements", s));

  std::vector<std::vector<MeasurementBatch>> batches(truth.steps);
  for (int n = 0; n < truth.steps; ++n) {
    batches[n].reserve(sensors.size());
    for (std::size_t s = 0; s < sensors.size(); ++s)
      batches[n].push_back(generate_batch(truth, sensors[s], n, streams[s]));
  }
  return batches;
}

namespace {

std::vector<std::pair<int, int>> geometric_edges(int n, double radius, Rng& rng) {
  std::vector<Vec2> pos(n);
  for (int i = 0; i < n; ++i) pos[i] = Vec2(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((pos[i] - pos[j]).norm() <= radius) edges.emplace_back(i, j);
  return edges;
}

}  // namespace

SensorGraph generate_sensor_graph(const ScenarioConfig& cfg, int rounds, Rng& rng) {
  if (cfg.sensors < 1) throw std::invalid_argument("generate_sensor_graph: sensors must be >= 1");
  if (rounds < 1) throw std::invalid_argument("generate_sensor_graph: rounds must be >= 1");

  SensorGraph graph;
  graph.n_sensors = cfg.sensors;

  std::vector<std::pair<int, int>> base;
  bool ok = false;
  for (int attempt = 0; attempt < cfg.graph.max_retries; ++attempt) {
    base = geometric_edges(cfg.sensors, cfg.graph.radius, rng);
    if (is_connected(cfg.sensors, base)) {
      ok = true;
      break;
    }
  }
  if (!ok)
    throw std::runtime_error(
        "generate_sensor_graph: no connected base graph within the retry budget; "
        "increase graph.radius or graph.max_retries");

  if (cfg.graph.p_drop <= 0.0) {
    graph.rounds.push_back(std::move(base));  // static topology
    return graph;
  }

  graph.rounds.reserve(rounds);
  for (int t = 0; t < rounds; ++t) {
    bool round_ok = false;
    for (int attempt = 0; attempt < cfg.graph.max_retries; ++attempt) {
      std::vector<std::pair<int, int>> kept;
      kept.reserve(base.size());
      for (const auto& e : base)
        if (rng.uniform(0.0, 1.0) >= cfg.graph.p_drop) kept.push_back(e);
      if (is_connected(cfg.sensors, kept)) {
        graph.rounds.push_back(std::move(kept));
        round_ok = true;
        break;
      }
    }
    if (!round_ok)
      throw std::runtime_error(
          "generate_sensor_graph: round stayed disconnected within the retry budget; "
          "p_drop is too aggressive for this base graph");
  }
  return graph;
}

Scenario generate_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  Scenario sc;
  sc.config = cfg;
  Rng truth_rng = Rng::stream(cfg.seed, "truth");
  sc.truth = generate_ground_truth(cfg, truth_rng);
  sc.batches = generate_measurements(sc.truth, build_sensors(cfg), cfg.seed);
  Rng graph_rng = Rng::stream(cfg.seed, "graph");
  sc.graph = generate_sensor_graph(cfg, cfg.graph.rounds, graph_rng);
  return sc;
}

std::vector<GaussianBelief> initial_prior(const ScenarioConfig& cfg,
                                          const GroundTruthState& truth) {
  std::vector<GaussianBelief> prior(cfg.targets);
  Mat4 cov = Mat4::Zero();
  cov(0, 0) = cov(2, 2) = cfg.prior_pos_std * cfg.prior_pos_std;
  cov(1, 1) = cov(3, 3) = cfg.prior_vel_std * cfg.prior_vel_std;
  for (int k = 0; k < cfg.targets; ++k) {
    prior[k].mean = truth.steps > 0 ? truth.at(0, k) : Vec4::Zero();
    prior[k].cov = cov;
  }
  return prior;
}

}  // namespace vartrack
