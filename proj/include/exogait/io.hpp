#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "exogait/gait.hpp"
#include "exogait/model.hpp"
#include "exogait/optimizer.hpp"

namespace exo {

using nlohmann::json;

// ---- body model ---------------------------------------------------------
// { "links": [ {"l":, "d":, "m":, "I":} x5 ],
//   "joint_limits_deg": { "hip":   {"flexion":, "extension":},
//                         "knee":  {"flexion":, "extension":},
//                         "ankle": {"dorsiflexion":, "plantarflexion":} },
//   "gravity": 9.81 }                      (limits and gravity optional)

BodyModel body_model_from_json(const json& j);
json body_model_to_json(const BodyModel& model);
BodyModel load_body_model(const std::filesystem::path& path);

// ---- task ---------------------------------------------------------------
// { "start": [x, y], "land": [x, y], "step_time":, "r2_0":, "phi3_0":,
//   "ankle": {"phi1_start":, "phi1_end":, "steepness":, "midpoint":},
//   "samples":, "resolution":, "penalty_weight":, "contact_radius":,
//   "description": "..." }                 (SI units, radians)

GaitTask task_from_json(const json& j);
json task_to_json(const GaitTask& task);
GaitTask load_task(const std::filesystem::path& path);

// ---- control points -----------------------------------------------------
// { "r2": [[t, r2] x5], "torso": [[t, phi3] x5], "path": [[x5, y5] x5],
//   "pace": [[t, z] x4] }

GaitControlPoints gait_from_json(const json& j);
json gait_to_json(const GaitControlPoints& points);
GaitControlPoints load_gait(const std::filesystem::path& path);

json report_to_json(const OptimizationResult& result);

// ---- files shared by all commands ----------------------------------------

json load_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// 17 significant digits; parses back to the identical double.
std::string format_double(double value);
/// Strict parse of a whole field; throws ValidationError.
double parse_double(std::string_view field, const std::string& context);

// ---- crutch force logs ----------------------------------------------------

inline constexpr double kDefaultSampleTime = 0.01;  // [s]

struct ForceTrace {
  std::vector<double> samples;  ///< [N], non-negative
  double sample_time = kDefaultSampleTime;
};

/// One column with header `force`, one reading per line.
ForceTrace load_force_trace(const std::filesystem::path& path,
                            double sample_time = kDefaultSampleTime);

/// F = Ts * sum_k (f_l(k) + f_r(k)) [N s], summed in sample order.
double grf_metric(const ForceTrace& left, const ForceTrace& right);

// ---- reference joint angles ----------------------------------------------

struct ReferenceGait {
  std::vector<double> times;  ///< [s], strictly increasing
  std::vector<Vec5> theta;    ///< relative angles [rad]
  std::string provenance;     ///< leading '#' comment lines of the file

  /// Linear interpolation of every angle at the given times, which must lie
  /// inside the recorded range.
  std::vector<Vec5> resample_at(const std::vector<double>& at) const;
  /// Uniform grid with `intervals` + 1 points over the recorded range.
  ReferenceGait resample(std::size_t intervals) const;
};

/// CSV with header `t,theta1,theta2,theta3,theta4,theta5`; '#' lines before
/// the header are kept as provenance.
ReferenceGait load_reference_gait(const std::filesystem::path& path);
std::string reference_gait_csv(const ReferenceGait& gait);

/// Reference angles pushed through the same derivative scheme and dynamics
/// as an optimized gait, on the task's sample grid.
TrajectoryTable replay_reference(const ReferenceGait& gait, const GaitTask& task,
                                 const BodyModel& model);

// ---- trajectory CSV ---------------------------------------------------------

inline constexpr const char* kTrajectoryHeader =
    "t,theta1,theta2,theta3,theta4,theta5,phi1,phi2,phi3,phi4,phi5,x5,y5,vx5,vy5,T1,T2,T3,T4,T5";

std::string trajectory_csv(const TrajectoryTable& table);
void export_trajectory(const TrajectoryTable& table, const std::filesystem::path& path);
/// Reads the exported columns back; derivative columns not in the file stay zero.
TrajectoryTable import_trajectory(const std::filesystem::path& path);

}  // namespace exo
