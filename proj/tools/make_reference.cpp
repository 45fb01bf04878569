// Generates the synthetic reference gait shipped with the fixtures.
//
// The stance ankle follows the task's ankle profile. Every other joint moves
// from the IK pose at lift-off to the IK pose at landing along a quintic
// blend (zero velocity and acceleration at both ends). The swing knee and hip
// get an extra sinusoidal flexion so the foot clears the ground.

#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "exogait/io.hpp"
#include "exogait/kinematics.hpp"

namespace {

double quintic(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }

exo::Vec5 pose_at(const exo::BodyModel& model, const exo::GaitTask& task, const exo::Vec2& target,
                  double t, double r2) {
  exo::IkInput in;
  in.target = target;
  in.phi1 = exo::ankle_profile_eval(task.ankle, t);
  in.phi3 = task.phi3_0;
  in.r2 = r2;
  const exo::Vec5 phi = exo::inverse_kinematics(model, in);
  return exo::angle_transform::inverse() * (phi - exo::angle_transform::offset());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Write a synthetic reference gait CSV for a task"};
  std::string model_path, task_path, out_path;
  double rate = 100.0;
  double knee_lift = 0.5;
  double hip_lift = 0.2;
  double r2_land = 0.5;
  app.add_option("--model", model_path)->required();
  app.add_option("--task", task_path)->required();
  app.add_option("--out", out_path)->required();
  app.add_option("--rate", rate, "samples per second")->check(CLI::PositiveNumber);
  app.add_option("--knee-lift", knee_lift, "peak extra swing-knee flexion [rad]");
  app.add_option("--hip-lift", hip_lift, "peak extra swing-hip flexion [rad]");
  app.add_option("--r2-land", r2_land, "stance-thigh range position at landing")
      ->check(CLI::Range(0.0, 1.0));
  CLI11_PARSE(app, argc, argv);

  try {
    const exo::BodyModel model = exo::load_body_model(model_path);
    const exo::GaitTask task = exo::load_task(task_path);
    const exo::Vec5 lift_off = pose_at(model, task, task.start, 0.0, task.r2_0);
    const exo::Vec5 landing = pose_at(model, task, task.land, task.step_time, r2_land);

    exo::ReferenceGait gait;
    std::ostringstream note;
    note << " synthetic reference gait (not measured data)\n"
         << " quintic joint-space blend between IK poses at lift-off and landing\n"
         << " knee_lift=" << exo::format_double(knee_lift)
         << " hip_lift=" << exo::format_double(hip_lift) << " r2_land=" << exo::format_double(r2_land)
         << " rate=" << exo::format_double(rate) << "\n";
    gait.provenance = note.str();

    const auto count = static_cast<std::size_t>(std::llround(task.step_time * rate));
    for (std::size_t k = 0; k <= count; ++k) {
      const double t = (k == count) ? task.step_time
                                    : task.step_time * static_cast<double>(k) /
                                          static_cast<double>(count);
      const double s = t / task.step_time;
      const double bump = std::sin(std::numbers::pi * s);
      exo::Vec5 theta = lift_off + quintic(s) * (landing - lift_off);
      theta[0] = std::numbers::pi / 2 - exo::ankle_profile_eval(task.ankle, t);
      theta[3] += hip_lift * bump * bump;
      theta[4] -= knee_lift * bump * bump;
      gait.times.push_back(t);
      gait.theta.push_back(theta);
    }
    exo::write_text(out_path, exo::reference_gait_csv(gait));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
