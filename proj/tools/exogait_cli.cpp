// Command-line front end. Exit codes: 0 success, 1 validation error,
// 2 infeasible task or gait, 3 self-check failed (check-dynamics).

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "exogait/dynamics.hpp"
#include "exogait/io.hpp"
#include "exogait/kinematics.hpp"
#include "exogait/optimizer.hpp"

namespace {

using exo::json;

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kInfeasible = 2;
constexpr int kCheckFailed = 3;

json vec_json(const exo::Vec5& v) { return {v[0], v[1], v[2], v[3], v[4]}; }

struct OptimizeArgs {
  std::string model, task, out, report, reference;
  std::uint64_t seed = 1;
  std::size_t max_evaluations = exo::OptimizerOptions{}.max_evaluations;
  std::size_t restarts = exo::OptimizerOptions{}.restarts;
  unsigned threads = 0;
};

int run_optimize(const OptimizeArgs& a) {
  const exo::BodyModel model = exo::load_body_model(a.model);
  const exo::GaitTask task = exo::load_task(a.task);
  exo::OptimizerOptions options;
  options.seed = a.seed;
  options.max_evaluations = a.max_evaluations;
  options.restarts = a.restarts;
  options.threads = a.threads;
  const exo::OptimizationResult result = exo::optimize(task, model, options);
  exo::write_text(a.out, exo::gait_to_json(result.points).dump(2) + "\n");

  json summary = {{"cost", result.cost},
                  {"initial_cost", result.report.initial_cost},
                  {"torque_term", result.report.best.torque_term},
                  {"max_foot_speed", result.report.best.max_foot_speed},
                  {"evaluations", result.report.evaluations}};
  if (!a.reference.empty()) {
    const exo::ReferenceGait ref = exo::load_reference_gait(a.reference);
    const exo::CostBreakdown base =
        exo::trajectory_cost(exo::replay_reference(ref, task, model), task);
    summary["reference_torque_term"] = base.torque_term;
    summary["reference_max_foot_speed"] = base.max_foot_speed;
    summary["torque_ratio"] = result.report.best.torque_term / base.torque_term;
  }
  if (!a.report.empty()) {
    json report = exo::report_to_json(result);
    for (const auto& [key, value] : summary.items()) report[key] = value;
    exo::write_text(a.report, report.dump(2) + "\n");
  }
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

int run_simulate(const std::string& model_path, const std::string& gait_path,
                 const std::string& task_path, const std::string& out) {
  const exo::BodyModel model = exo::load_body_model(model_path);
  const exo::GaitTask task = exo::load_task(task_path);
  const exo::GaitControlPoints points = exo::load_gait(gait_path);
  const exo::TrajectoryTable table = exo::sample_gait(points, task, model);
  exo::export_trajectory(table, out);
  const exo::CostBreakdown c = exo::trajectory_cost(table, task);
  std::cout << json{{"cost", c.total},
                    {"torque_term", c.torque_term},
                    {"max_foot_speed", c.max_foot_speed},
                    {"rows", table.size()}}
                   .dump(2)
            << '\n';
  return kOk;
}

int run_replay(const std::string& model_path, const std::string& ref_path,
               const std::string& task_path, const std::string& out) {
  const exo::BodyModel model = exo::load_body_model(model_path);
  const exo::GaitTask task = exo::load_task(task_path);
  const exo::ReferenceGait ref = exo::load_reference_gait(ref_path);
  const exo::TrajectoryTable table = exo::replay_reference(ref, task, model);
  exo::export_trajectory(table, out);
  const exo::CostBreakdown c = exo::trajectory_cost(table, task);
  std::cout << json{{"cost", c.total},
                    {"torque_term", c.torque_term},
                    {"max_foot_speed", c.max_foot_speed},
                    {"rows", table.size()}}
                   .dump(2)
            << '\n';
  return kOk;
}

int run_ik(const std::string& model_path, const exo::IkInput& in) {
  const exo::BodyModel model = exo::load_body_model(model_path);
  const exo::Vec5 phi = exo::inverse_kinematics(model, in);
  const exo::Vec5 theta = exo::angle_transform::inverse() * (phi - exo::angle_transform::offset());
  const exo::Phi2Range range = exo::phi2_range(model, in.phi1, in.target);
  std::cout << json{{"phi", vec_json(phi)},
                    {"theta", vec_json(theta)},
                    {"phi2_min", range.min},
                    {"phi2_max", range.max}}
                   .dump(2)
            << '\n';
  return kOk;
}

int run_check_dynamics(const std::string& model_path, std::size_t trials, std::uint64_t seed) {
  const exo::BodyModel model = exo::load_body_model(model_path);
  const exo::OracleCheck check = exo::check_dynamics(model, trials, seed);
  std::cout << json{{"trials", check.trials},
                    {"failures", check.failures},
                    {"max_rel_error", check.max_rel_error},
                    {"max_abs_error", check.max_abs_error}}
                   .dump(2)
            << '\n';
  return check.failures == 0 ? kOk : kCheckFailed;
}

int run_grf(const std::string& left, const std::string& right, double ts) {
  const double f = exo::grf_metric(exo::load_force_trace(left, ts), exo::load_force_trace(right, ts));
  std::cout << exo::format_double(f) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Swing-phase gait optimizer for a planar five-link exoskeleton"};
  app.require_subcommand(1);

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "Optimize the gait control points of a task");
  optimize->add_option("--model", opt.model)->required();
  optimize->add_option("--task", opt.task)->required();
  optimize->add_option("--out", opt.out, "control points JSON")->required();
  optimize->add_option("--seed", opt.seed);
  optimize->add_option("--report", opt.report, "report JSON");
  optimize->add_option("--reference", opt.reference, "reference gait CSV to compare against");
  optimize->add_option("--max-evaluations", opt.max_evaluations)->check(CLI::PositiveNumber);
  optimize->add_option("--restarts", opt.restarts);
  optimize->add_option("--threads", opt.threads, "0: one per start");

  std::string model, task, gait, out, reference;
  auto* simulate = app.add_subcommand("simulate", "Sample a gait and export its trajectory");
  simulate->add_option("--model", model)->required();
  simulate->add_option("--gait", gait)->required();
  simulate->add_option("--task", task)->required();
  simulate->add_option("--out", out, "trajectory CSV")->required();

  auto* replay = app.add_subcommand("replay", "Feed reference joint angles through the dynamics");
  replay->add_option("--model", model)->required();
  replay->add_option("--reference", reference)->required();
  replay->add_option("--task", task)->required();
  replay->add_option("--out", out, "trajectory CSV")->required();

  exo::IkInput ik_in;
  auto* ik = app.add_subcommand("ik", "Inverse kinematics for one swing-foot target");
  ik->add_option("--model", model)->required();
  ik->add_option("--x5", ik_in.target.x())->required();
  ik->add_option("--y5", ik_in.target.y())->required();
  ik->add_option("--phi1", ik_in.phi1)->required();
  ik->add_option("--phi3", ik_in.phi3)->required();
  ik->add_option("--r2", ik_in.r2)->required();

  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  auto* check = app.add_subcommand("check-dynamics", "Compare closed-form torques with the oracle");
  check->add_option("--model", model)->required();
  check->add_option("--trials", trials);
  check->add_option("--seed", seed);

  std::string left, right;
  double ts = exo::kDefaultSampleTime;
  auto* grf = app.add_subcommand("grf", "Crutch force integral of two force logs");
  grf->add_option("--left", left)->required();
  grf->add_option("--right", right)->required();
  grf->add_option("--ts", ts, "sample time [s]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*optimize) return run_optimize(opt);
    if (*simulate) return run_simulate(model, gait, task, out);
    if (*replay) return run_replay(model, reference, task, out);
    if (*ik) return run_ik(model, ik_in);
    if (*check) return run_check_dynamics(model, trials, seed);
    if (*grf) return run_grf(left, right, ts);
  } catch (const exo::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const exo::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const exo::KinematicsError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const json::exception& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}
