#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "exogait/gait.hpp"

namespace exo {

/// Element-wise box on the 19 x 2 control-point matrix.
struct BoundsPair {
  std::array<Vec2, GaitControlPoints::kRows> lower;
  std::array<Vec2, GaitControlPoints::kRows> upper;

  /// Largest amount by which `points` leaves the box (0 when inside).
  double max_violation(const GaitControlPoints& points) const;
  /// Rows whose lower and upper bounds coincide in both coordinates.
  std::size_t pinned_rows() const;
};

/// Box constraints for the swing task. Heights are measured from the stance
/// ankle: the path's middle points must clear start/land by 0.3 m and stay
/// below 0.6 m. Throws InfeasibleError("infeasible task") when a lower bound
/// exceeds its upper bound.
BoundsPair build_bounds(const GaitTask& task);

/// 0 while the swing foot is within `radius` of the start or landing point
/// (inclusive), 1 otherwise.
int contact_indicator(const Vec2& p5, const Vec2& start, const Vec2& land, double radius);

struct CostBreakdown {
  double torque_term = 0.0;     ///< mean of c_k * tau_k^2 over the N + 1 samples [N^2 m^2]
  double max_foot_speed = 0.0;  ///< [m/s]
  double total = 0.0;           ///< torque_term + v_p * max_foot_speed
};

/// Swing-phase mean squared stance-ankle torque of a sampled trajectory.
double torque_term(const TrajectoryTable& table, const GaitTask& task);

/// Cost of a sampled trajectory.
CostBreakdown trajectory_cost(const TrajectoryTable& table, const GaitTask& task);

/// Samples the gait and evaluates it; any sampling failure costs +infinity.
CostBreakdown evaluate_cost(const GaitControlPoints& points, const GaitTask& task,
                            const BodyModel& model);
double cost(const GaitControlPoints& points, const GaitTask& task, const BodyModel& model);

/// Pinned rows at their values, free points on straight lines between the
/// pinned neighbours, lifted onto the lower height bounds.
GaitControlPoints initial_control_points(const GaitTask& task);

struct OptimizerOptions {
  std::size_t max_evaluations = 40000;  ///< total budget over all starts
  std::size_t restarts = 3;            ///< starts besides the warm starts
  std::uint64_t seed = 1;
  double tolerance = 1e-9;     ///< relative spread of simplex costs at convergence
  double initial_step = 0.1;   ///< simplex edge as a fraction of the box width
  double draw_spread = 0.25;   ///< random starts: fraction of box width around P_init
  std::size_t max_init_draws = 200;
  std::vector<GaitControlPoints> warm_starts;  ///< extra starting points, clipped to the box
  unsigned threads = 0;  ///< 0: one per start, capped at the hardware concurrency
};

struct StartSummary {
  double start_cost = 0.0;
  double best_cost = 0.0;
  std::size_t evaluations = 0;
};

struct OptimizerReport {
  std::size_t evaluations = 0;
  double initial_cost = 0.0;               ///< J(P_init)
  std::vector<StartSummary> starts;        ///< in start order
  double max_bound_violation = 0.0;        ///< over every evaluated candidate
  CostBreakdown best;
  TrajectoryTable trajectory;              ///< sampled trajectory of P*
};

struct OptimizationResult {
  GaitControlPoints points;
  double cost = 0.0;
  OptimizerReport report;
};

/// Bounded Nelder-Mead with box projection, multi-start. Deterministic for a
/// given seed regardless of thread count. Throws InfeasibleError
/// ("initialization failed") when no finite-cost starting point is found.
OptimizationResult optimize(const GaitTask& task, const BodyModel& model,
                            const OptimizerOptions& options = {});

}  // namespace exo
