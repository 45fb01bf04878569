#include "exogait/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

namespace exo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Path heights are bounded relative to the stance ankle: middle points clear
// the end points by this much and never go above the ceiling.
constexpr double kClearance = 0.3;  // 300 mm
constexpr double kCeiling = 0.6;    // 600 mm

using Flat = std::array<double, GaitControlPoints::kParameters>;

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Box {
  Flat lower{};
  Flat upper{};
  std::vector<std::size_t> free;  // indices with lower < upper

  explicit Box(const BoundsPair& b) {
    for (std::size_t k = 0; k < GaitControlPoints::kRows; ++k) {
      lower[2 * k] = b.lower[k].x();
      lower[2 * k + 1] = b.lower[k].y();
      upper[2 * k] = b.upper[k].x();
      upper[2 * k + 1] = b.upper[k].y();
    }
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (lower[i] < upper[i]) free.push_back(i);
  }

  std::size_t dim() const { return free.size(); }
  double lo(std::size_t j) const { return lower[free[j]]; }
  double hi(std::size_t j) const { return upper[free[j]]; }
  double width(std::size_t j) const { return hi(j) - lo(j); }

  void clip(std::vector<double>& x) const {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], lo(j), hi(j));
  }

  std::vector<double> project(const GaitControlPoints& p) const {
    const Flat flat = p.flatten();
    std::vector<double> x(dim());
    for (std::size_t j = 0; j < dim(); ++j) x[j] = flat[free[j]];
    clip(x);
    return x;
  }

  GaitControlPoints expand(const std::vector<double>& x) const {
    Flat flat = lower;  // pinned coordinates sit at their (equal) bounds
    for (std::size_t j = 0; j < dim(); ++j) flat[free[j]] = x[j];
    return GaitControlPoints::unflatten(flat);
  }
};

// Counts evaluations and watches every candidate against the box.
class Objective {
 public:
  Objective(const Box& box, const BoundsPair& bounds, const GaitTask& task, const BodyModel& model)
      : box_(box), bounds_(bounds), task_(task), model_(model) {}

  double operator()(const std::vector<double>& x) {
    const GaitControlPoints p = box_.expand(x);
    max_violation_ = std::max(max_violation_, bounds_.max_violation(p));
    ++evaluations_;
    return cost(p, task_, model_);
  }

  std::size_t evaluations() const { return evaluations_; }
  double max_violation() const { return max_violation_; }

 private:
  const Box& box_;
  const BoundsPair& bounds_;
  const GaitTask& task_;
  const BodyModel& model_;
  std::size_t evaluations_ = 0;
  double max_violation_ = 0.0;
};

struct Vertex {
  std::vector<double> x;
  double f = kInf;
};

// One Nelder-Mead descent with dimension-adapted coefficients. Every trial
// point is clipped to the box before it is evaluated. Returns the best vertex.
Vertex nelder_mead(Objective& objective, const Box& box, const Vertex& start, double step,
                   double tolerance, std::size_t budget) {
  const std::size_t n = box.dim();
  const double dn = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dn;
  const double contract = 0.75 - 1.0 / (2.0 * dn);
  const double shrink = 1.0 - 1.0 / dn;

  const std::size_t stop_at = objective.evaluations() + budget;
  const auto exhausted = [&] { return objective.evaluations() >= stop_at; };
  const auto eval = [&](std::vector<double> x) {
    box.clip(x);
    Vertex v{std::move(x), 0.0};
    v.f = objective(v.x);
    return v;
  };

  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back(start);
  for (std::size_t j = 0; j < n && !exhausted(); ++j) {
    std::vector<double> x = start.x;
    const double h = step * box.width(j);
    x[j] = (x[j] + h <= box.hi(j)) ? x[j] + h : x[j] - h;
    simplex.push_back(eval(std::move(x)));
  }
  if (simplex.size() < n + 1) return start;

  const auto by_cost = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  const auto along = [&](const std::vector<double>& from, const std::vector<double>& to,
                         double t) {
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = from[j] + t * (to[j] - from[j]);
    return x;
  };

  while (!exhausted()) {
    std::stable_sort(simplex.begin(), simplex.end(), by_cost);
    const Vertex& best = simplex.front();
    const Vertex& worst = simplex.back();
    if (std::isfinite(worst.f) &&
        worst.f - best.f <= tolerance * (std::abs(best.f) + 1e-12))
      break;
    double extent = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        extent = std::max(extent, std::abs(simplex[i].x[j] - best.x[j]) / box.width(j));
    if (extent < 1e-12) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i].x[j];
    for (double& c : centroid) c /= dn;

    Vertex r = eval(along(centroid, worst.x, -reflect));
    if (r.f < best.f) {
      if (exhausted()) {
        simplex.back() = std::move(r);
        break;
      }
      Vertex e = eval(along(centroid, r.x, expand));
      simplex.back() = (e.f < r.f) ? std::move(e) : std::move(r);
      continue;
    }
    if (r.f < simplex[n - 1].f) {
      simplex.back() = std::move(r);
      continue;
    }
    if (exhausted()) break;
    const bool outside = r.f < worst.f;
    Vertex c = outside ? eval(along(centroid, r.x, contract)) : eval(along(centroid, worst.x, contract));
    if (outside ? (c.f <= r.f) : (c.f < worst.f)) {
      simplex.back() = std::move(c);
      continue;
    }
    for (std::size_t i = 1; i <= n && !exhausted(); ++i)
      simplex[i] = eval(along(simplex.front().x, simplex[i].x, shrink));
  }
  return *std::min_element(simplex.begin(), simplex.end(), by_cost);
}

struct StartOutcome {
  Vertex best;
  StartSummary summary;
  double max_violation = 0.0;
};

// Repeated descents from the incumbent until the budget is spent or a fresh
// simplex stops improving it.
StartOutcome run_start(const Box& box, const BoundsPair& bounds, const GaitTask& task,
                       const BodyModel& model, const Vertex& start, std::size_t budget,
                       const OptimizerOptions& options) {
  Objective objective(box, bounds, task, model);
  Vertex best = start;
  while (objective.evaluations() < budget) {
    const Vertex next = nelder_mead(objective, box, best, options.initial_step, options.tolerance,
                                    budget - objective.evaluations());
    const bool improved = next.f < best.f * (1.0 - 1e-12) - 1e-300;
    if (next.f < best.f) best = next;
    if (!improved) break;
  }
  return {best, {start.f, best.f, objective.evaluations()}, objective.max_violation()};
}

}  // namespace

double BoundsPair::max_violation(const GaitControlPoints& points) const {
  double worst = 0.0;
  for (std::size_t k = 0; k < GaitControlPoints::kRows; ++k) {
    const Vec2& p = points.row(k);
    for (int c = 0; c < 2; ++c) {
      worst = std::max(worst, lower[k][c] - p[c]);
      worst = std::max(worst, p[c] - upper[k][c]);
    }
  }
  return worst;
}

std::size_t BoundsPair::pinned_rows() const {
  std::size_t count = 0;
  for (std::size_t k = 0; k < GaitControlPoints::kRows; ++k)
    if (lower[k] == upper[k]) ++count;
  return count;
}

BoundsPair build_bounds(const GaitTask& task) {
  task.validate();
  const double ts = task.step_time;
  const double x0 = task.start.x(), y0 = task.start.y();
  const double xs = task.land.x(), ys = task.land.y();
  const double tilt = kPi / 12;

  BoundsPair b;
  const auto set = [&b](std::size_t row, Vec2 lo, Vec2 hi) {
    b.lower[row] = lo;
    b.upper[row] = hi;
  };
  // r2 over time
  set(0, {0.0, task.r2_0}, {0.0, task.r2_0});
  for (std::size_t k = 1; k <= 3; ++k) set(k, {0.0, 0.0}, {ts, 1.0});
  set(4, {ts, 0.0}, {ts, 1.0});
  // torso angle over time
  set(5, {0.0, task.phi3_0}, {0.0, task.phi3_0});
  for (std::size_t k = 6; k <= 8; ++k) set(k, {0.0, -tilt}, {ts, tilt});
  set(9, {ts, -tilt}, {ts, tilt});
  // swing-foot path
  set(10, {x0, y0}, {x0, y0});
  set(11, {x0, y0 + kClearance}, {x0, kCeiling});
  set(12, {x0, std::min(y0, ys)}, {xs, kCeiling});
  set(13, {xs, ys + kClearance}, {xs, kCeiling});
  set(14, {xs, ys}, {xs, ys});
  // pace
  set(15, {0.0, 0.0}, {0.0, 0.0});
  for (std::size_t k = 16; k <= 17; ++k) set(k, {0.0, 0.0}, {ts, 1.0});
  set(18, {ts, 1.0}, {ts, 1.0});

  for (std::size_t k = 0; k < GaitControlPoints::kRows; ++k)
    if (b.lower[k].x() > b.upper[k].x() || b.lower[k].y() > b.upper[k].y())
      throw InfeasibleError("infeasible task: bounds of row " + std::to_string(k + 1) +
                            " are empty");
  return b;
}

int contact_indicator(const Vec2& p5, const Vec2& start, const Vec2& land, double radius) {
  if ((p5 - start).norm() <= radius || (p5 - land).norm() <= radius) return 0;
  return 1;
}

double torque_term(const TrajectoryTable& table, const GaitTask& task) {
  double sum = 0.0;
  for (const auto& row : table.rows) {
    const double tau = row.torque[0];
    sum += contact_indicator(row.p5, task.start, task.land, task.contact_radius) * tau * tau;
  }
  return sum / static_cast<double>(table.rows.size());
}

CostBreakdown trajectory_cost(const TrajectoryTable& table, const GaitTask& task) {
  CostBreakdown c;
  c.torque_term = torque_term(table, task);
  c.max_foot_speed = table.max_foot_speed();
  c.total = c.torque_term + task.penalty_weight * c.max_foot_speed;
  return c;
}

CostBreakdown evaluate_cost(const GaitControlPoints& points, const GaitTask& task,
                            const BodyModel& model) {
  try {
    return trajectory_cost(sample_gait(points, task, model), task);
  } catch (const InfeasibleError&) {
    return {kInf, kInf, kInf};
  }
}

double cost(const GaitControlPoints& points, const GaitTask& task, const BodyModel& model) {
  return evaluate_cost(points, task, model).total;
}

GaitControlPoints initial_control_points(const GaitTask& task) {
  const BoundsPair bounds = build_bounds(task);
  const double ts = task.step_time;
  GaitControlPoints p;
  for (std::size_t i = 0; i < 5; ++i) {
    const double f = static_cast<double>(i) / 4.0;
    p.r2[i] = {ts * f, task.r2_0};
    p.torso[i] = {ts * f, task.phi3_0};
    const Vec2 line = task.start + f * (task.land - task.start);
    p.path[i] = line;
  }
  p.path[1].x() = task.start.x();
  p.path[3].x() = task.land.x();
  for (std::size_t i = 0; i < 4; ++i) {
    const double f = static_cast<double>(i) / 3.0;
    p.pace[i] = {ts * f, f};
  }
  p.r2[4].x() = ts;
  p.torso[4].x() = ts;
  p.pace[3] = {ts, 1.0};
  // Lift onto the height bounds (and clamp the torso into its tilt range).
  for (std::size_t k = 0; k < GaitControlPoints::kRows; ++k) {
    Vec2& r = p.row(k);
    r = r.cwiseMax(bounds.lower[k]).cwiseMin(bounds.upper[k]);
  }
  return p;
}

OptimizationResult optimize(const GaitTask& task, const BodyModel& model,
                            const OptimizerOptions& options) {
  const BoundsPair bounds = build_bounds(task);
  const Box box(bounds);
  const std::size_t n = box.dim();

  // Starting points: P_init (or a feasible draw near it), warm starts, then
  // seeded draws around P_init.
  Objective init_objective(box, bounds, task, model);
  const std::vector<double> x_init = box.project(initial_control_points(task));
  const double f_init = init_objective(x_init);

  std::mt19937_64 rng(options.seed);
  const auto draw_near = [&](const std::vector<double>& center) {
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j)
      x[j] = center[j] + (2.0 * unit_draw(rng) - 1.0) * options.draw_spread * box.width(j);
    box.clip(x);
    return x;
  };
  const auto feasible_draw = [&](const std::vector<double>& center) -> Vertex {
    for (std::size_t attempt = 0; attempt < options.max_init_draws; ++attempt) {
      Vertex v{draw_near(center), 0.0};
      v.f = init_objective(v.x);
      if (std::isfinite(v.f)) return v;
    }
    return {center, kInf};
  };

  std::vector<Vertex> starts;
  starts.push_back({x_init, f_init});
  if (!std::isfinite(f_init)) {
    starts.front() = feasible_draw(x_init);
    if (!std::isfinite(starts.front().f))
      throw InfeasibleError("initialization failed: no finite-cost starting point near P_init");
  }
  for (const GaitControlPoints& warm : options.warm_starts) {
    Vertex v{box.project(warm), 0.0};
    v.f = init_objective(v.x);
    if (std::isfinite(v.f)) starts.push_back(std::move(v));
  }
  for (std::size_t r = 1; r < std::max<std::size_t>(options.restarts, 1); ++r) {
    Vertex v = feasible_draw(x_init);
    if (std::isfinite(v.f)) starts.push_back(std::move(v));
  }

  const std::size_t share =
      std::max<std::size_t>(options.max_evaluations / starts.size(), n + 2);

  std::vector<StartOutcome> outcomes(starts.size());
  unsigned workers = options.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(starts.size()));
  for (std::size_t first = 0; first < starts.size(); first += workers) {
    std::vector<std::future<StartOutcome>> batch;
    const std::size_t last = std::min(starts.size(), first + workers);
    for (std::size_t s = first; s < last; ++s) {
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                 [&, s] {
                                   return run_start(box, bounds, task, model, starts[s], share,
                                                    options);
                                 }));
    }
    for (std::size_t s = first; s < last; ++s) outcomes[s] = batch[s - first].get();
  }

  OptimizationResult result;
  OptimizerReport& report = result.report;
  report.initial_cost = f_init;
  report.evaluations = init_objective.evaluations();
  report.max_bound_violation = init_objective.max_violation();
  std::size_t winner = 0;
  for (std::size_t s = 0; s < outcomes.size(); ++s) {
    report.starts.push_back(outcomes[s].summary);
    report.evaluations += outcomes[s].summary.evaluations;
    report.max_bound_violation = std::max(report.max_bound_violation, outcomes[s].max_violation);
    if (outcomes[s].best.f < outcomes[winner].best.f) winner = s;
  }
  result.points = box.expand(outcomes[winner].best.x);
  result.cost = outcomes[winner].best.f;
  report.trajectory = sample_gait(result.points, task, model);
  report.best = trajectory_cost(report.trajectory, task);
  return result;
}

}  // namespace exo
