#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "exogait/io.hpp"
#include "support.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const auto out = test::scratch("cli_stdout.txt");
  const std::string cmd =
      std::string("\"") + EXOGAIT_CLI + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream s;
  s << in.rdbuf();
  r.out = s.str();
  return r;
}

std::string fx(const std::string& name) { return "\"" + test::fixture(name).string() + "\""; }
std::string tmp(const std::string& name) { return "\"" + test::scratch(name).string() + "\""; }

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("grf --left " + fx("grf_left.csv")).code == 1);
  CHECK(run("--help").code == 0);
}

TEST_CASE("grf prints the metric") {
  const Run r = run("grf --left " + fx("grf_left.csv") + " --right " + fx("grf_right.csv"));
  CHECK(r.code == 0);
  CHECK(exo::parse_double(r.out.substr(0, r.out.find('\n')), "stdout") == 0x1.127571f36262fp+8);
  CHECK(run("grf --left " + fx("grf_left.csv") + " --right " + fx("grf_const.csv")).code == 1);
}

TEST_CASE("ik solves and reports infeasible targets") {
  const Run ok = run("ik --model " + fx("model_exoskeleton.json") +
                     " --x5 0.1 --y5 0.05 --phi1 0.1 --phi3 0 --r2 0.5");
  CHECK(ok.code == 0);
  const exo::json j = exo::json::parse(ok.out);
  CHECK(j["phi"].size() == 5);
  CHECK(j["phi"][0] == 0.1);
  CHECK(run("ik --model " + fx("model_exoskeleton.json") +
            " --x5 3 --y5 0 --phi1 0.1 --phi3 0 --r2 0.5")
            .code == 2);
}

TEST_CASE("check-dynamics passes on the shipped model") {
  const Run r = run("check-dynamics --model " + fx("model_exoskeleton.json") + " --trials 50");
  CHECK(r.code == 0);
  CHECK(exo::json::parse(r.out)["failures"] == 0);
}

TEST_CASE("simulate and replay export trajectories") {
  const exo::GaitTask task = exo::load_task(test::fixture("task_ground.json"));
  exo::write_text(test::scratch("cli_gait.json"),
                  exo::gait_to_json(exo::initial_control_points(task)).dump());
  const Run s = run("simulate --model " + fx("model_exoskeleton.json") + " --gait " +
                    tmp("cli_gait.json") + " --task " + fx("task_ground.json") + " --out " +
                    tmp("cli_sim.csv"));
  CHECK(s.code == 0);
  CHECK(exo::import_trajectory(test::scratch("cli_sim.csv")).size() == 101);

  const Run r = run("replay --model " + fx("model_exoskeleton.json") + " --reference " +
                    fx("reference_ground.csv") + " --task " + fx("task_ground.json") + " --out " +
                    tmp("cli_replay.csv"));
  CHECK(r.code == 0);
  CHECK(exo::json::parse(r.out)["rows"] == 101);
}

TEST_CASE("optimize writes control points and a report") {
  const Run r = run("optimize --model " + fx("model_exoskeleton.json") + " --task " +
                    fx("task_ground.json") + " --out " + tmp("cli_opt.json") + " --report " +
                    tmp("cli_report.json") + " --reference " + fx("reference_ground.csv") +
                    " --max-evaluations 2000 --threads 1");
  REQUIRE(r.code == 0);
  const exo::json summary = exo::json::parse(r.out);
  CHECK(summary["cost"].get<double>() <= summary["initial_cost"].get<double>());
  CHECK(summary.contains("torque_ratio"));
  const exo::GaitControlPoints p = exo::load_gait(test::scratch("cli_opt.json"));
  CHECK(exo::build_bounds(exo::load_task(test::fixture("task_ground.json"))).max_violation(p) == 0.0);
  const exo::json report = exo::load_json(test::scratch("cli_report.json"));
  CHECK(report["trajectory"].size() == 101);
}

TEST_CASE("bad inputs map to exit codes") {
  exo::write_text(test::scratch("cli_bad_task.json"), "{\"start\": [0, 0]}");
  CHECK(run("optimize --model " + fx("model_exoskeleton.json") + " --task " +
            tmp("cli_bad_task.json") + " --out " + tmp("cli_x.json"))
            .code == 1);
  exo::json task = exo::load_json(test::fixture("task_ground.json"));
  task["land"] = {0.3, 0.4};
  exo::write_text(test::scratch("cli_high_task.json"), task.dump());
  CHECK(run("optimize --model " + fx("model_exoskeleton.json") + " --task " +
            tmp("cli_high_task.json") + " --out " + tmp("cli_x.json"))
            .code == 2);
}
