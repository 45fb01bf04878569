#include "exogait/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "exogait/error.hpp"

namespace exo {

namespace {

// Strict object reader: every key must be consumed exactly once and typed
// as expected; leftovers are rejected.
class Fields {
 public:
  Fields(const json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) fail("", "expected a JSON object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& get(const std::string& key) {
    if (!j_.contains(key)) fail(key, "missing field");
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::size_t count_or(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  Vec2 pair(const std::string& key) { return read_pair(get(key), key); }

  Vec2 read_pair(const json& v, const std::string& key) const {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      fail(key, "expected [number, number]");
    return {v[0].get<double>(), v[1].get<double>()};
  }

  std::string text_or(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.contains(key)) fail(key, "unknown field");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    std::string where = context_;
    if (!key.empty()) where += where.empty() ? key : "." + key;
    throw ValidationError(where + ": " + what);
  }

 private:
  const json& j_;
  std::string context_;
  std::set<std::string> seen_;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

template <std::size_t N>
json points_json(const std::array<Vec2, N>& pts) {
  json arr = json::array();
  for (const Vec2& p : pts) arr.push_back({p.x(), p.y()});
  return arr;
}

template <std::size_t N>
void read_points(Fields& f, const std::string& key, std::array<Vec2, N>& out) {
  const json& arr = f.get(key);
  if (!arr.is_array() || arr.size() != N)
    f.fail(key, "expected " + std::to_string(N) + " control points");
  for (std::size_t i = 0; i < N; ++i) out[i] = f.read_pair(arr[i], key + "[" + std::to_string(i) + "]");
}

json vec_json(const Vec5& v) { return {v[0], v[1], v[2], v[3], v[4]}; }

}  // namespace

// ---- shared ---------------------------------------------------------------

json load_json(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("failed writing " + path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view field, const std::string& context) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, value);
  if (field.empty() || res.ec != std::errc() || res.ptr != last)
    throw ValidationError(context + ": cannot parse number '" + std::string(field) + "'");
  if (!std::isfinite(value)) throw ValidationError(context + ": non-finite number");
  return value;
}

// ---- body model -----------------------------------------------------------

BodyModel body_model_from_json(const json& j) {
  Fields f(j, "model");
  const json& links = f.get("links");
  if (!links.is_array() || links.size() != kLinkCount)
    f.fail("links", "expected exactly 5 link entries");
  std::array<LinkParams, kLinkCount> params;
  for (std::size_t i = 0; i < kLinkCount; ++i) {
    Fields lf(links[i], "model.links[" + std::to_string(i) + "]");
    params[i] = {lf.number("l"), lf.number("d"), lf.number("m"), lf.number("I")};
    lf.finish();
  }
  JointLimits limits;
  if (f.has("joint_limits_deg")) {
    Fields lim(f.get("joint_limits_deg"), "model.joint_limits_deg");
    Fields hip(lim.get("hip"), "model.joint_limits_deg.hip");
    limits.hip_flexion = hip.number("flexion");
    limits.hip_extension = hip.number("extension");
    hip.finish();
    Fields knee(lim.get("knee"), "model.joint_limits_deg.knee");
    limits.knee_flexion = knee.number("flexion");
    limits.knee_extension = knee.number("extension");
    knee.finish();
    Fields ankle(lim.get("ankle"), "model.joint_limits_deg.ankle");
    limits.ankle_dorsiflexion = ankle.number("dorsiflexion");
    limits.ankle_plantarflexion = ankle.number("plantarflexion");
    ankle.finish();
    lim.finish();
  }
  const double gravity = f.number_or("gravity", 9.81);
  f.text_or("description", "");
  f.finish();
  return BodyModel(params, limits, gravity);
}

json body_model_to_json(const BodyModel& model) {
  json links = json::array();
  for (const LinkParams& p : model.links())
    links.push_back({{"l", p.length}, {"d", p.com_offset}, {"m", p.mass}, {"I", p.inertia}});
  const JointLimits& l = model.limits();
  return {{"links", links},
          {"joint_limits_deg",
           {{"hip", {{"flexion", l.hip_flexion}, {"extension", l.hip_extension}}},
            {"knee", {{"flexion", l.knee_flexion}, {"extension", l.knee_extension}}},
            {"ankle",
             {{"dorsiflexion", l.ankle_dorsiflexion}, {"plantarflexion", l.ankle_plantarflexion}}}}},
          {"gravity", model.gravity()}};
}

BodyModel load_body_model(const std::filesystem::path& path) {
  return body_model_from_json(load_json(path));
}

// ---- task -----------------------------------------------------------------

GaitTask task_from_json(const json& j) {
  Fields f(j, "task");
  GaitTask t;
  t.start = f.pair("start");
  t.land = f.pair("land");
  t.step_time = f.number("step_time");
  t.r2_0 = f.number("r2_0");
  t.phi3_0 = f.number("phi3_0");
  {
    Fields a(f.get("ankle"), "task.ankle");
    const double start = a.number("phi1_start");
    const double end = a.number("phi1_end");
    t.ankle = GaitTask::default_ankle(start, end, t.step_time);
    t.ankle.steepness = a.number_or("steepness", t.ankle.steepness);
    t.ankle.midpoint = a.number_or("midpoint", t.ankle.midpoint);
    a.finish();
  }
  t.samples = f.count_or("samples", t.samples);
  t.resolution = f.count_or("resolution", t.resolution);
  t.penalty_weight = f.number_or("penalty_weight", t.penalty_weight);
  t.contact_radius = f.number_or("contact_radius", t.contact_radius);
  f.text_or("description", "");
  f.finish();
  t.validate();
  return t;
}

json task_to_json(const GaitTask& t) {
  return {{"start", {t.start.x(), t.start.y()}},
          {"land", {t.land.x(), t.land.y()}},
          {"step_time", t.step_time},
          {"r2_0", t.r2_0},
          {"phi3_0", t.phi3_0},
          {"ankle",
           {{"phi1_start", t.ankle.phi1_start},
            {"phi1_end", t.ankle.phi1_end},
            {"steepness", t.ankle.steepness},
            {"midpoint", t.ankle.midpoint}}},
          {"samples", t.samples},
          {"resolution", t.resolution},
          {"penalty_weight", t.penalty_weight},
          {"contact_radius", t.contact_radius}};
}

GaitTask load_task(const std::filesystem::path& path) { return task_from_json(load_json(path)); }

// ---- control points -------------------------------------------------------

GaitControlPoints gait_from_json(const json& j) {
  Fields f(j, "gait");
  GaitControlPoints p;
  read_points(f, "r2", p.r2);
  read_points(f, "torso", p.torso);
  read_points(f, "path", p.path);
  read_points(f, "pace", p.pace);
  f.finish();
  return p;
}

json gait_to_json(const GaitControlPoints& p) {
  return {{"r2", points_json(p.r2)},
          {"torso", points_json(p.torso)},
          {"path", points_json(p.path)},
          {"pace", points_json(p.pace)}};
}

GaitControlPoints load_gait(const std::filesystem::path& path) {
  return gait_from_json(load_json(path));
}

json report_to_json(const OptimizationResult& result) {
  const OptimizerReport& r = result.report;
  json starts = json::array();
  for (const StartSummary& s : r.starts)
    starts.push_back(
        {{"start_cost", s.start_cost}, {"best_cost", s.best_cost}, {"evaluations", s.evaluations}});
  json rows = json::array();
  for (const TrajectoryRow& row : r.trajectory.rows) {
    rows.push_back({{"t", row.t},
                    {"theta", vec_json(row.theta)},
                    {"phi", vec_json(row.phi)},
                    {"p5", {row.p5.x(), row.p5.y()}},
                    {"v5", {row.v5.x(), row.v5.y()}},
                    {"torque", vec_json(row.torque)}});
  }
  const auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"cost", finite_or_null(result.cost)},
          {"initial_cost", finite_or_null(r.initial_cost)},
          {"torque_term", r.best.torque_term},
          {"max_foot_speed", r.best.max_foot_speed},
          {"evaluations", r.evaluations},
          {"max_bound_violation", r.max_bound_violation},
          {"starts", starts},
          {"trajectory", rows}};
}

// ---- force logs -----------------------------------------------------------

ForceTrace load_force_trace(const std::filesystem::path& path, double sample_time) {
  if (!(sample_time > 0.0)) throw ValidationError("sample time must be > 0");
  std::ifstream in = open_input(path);
  const std::string ctx = path.string();
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "force")
    throw ValidationError(ctx + ": expected header 'force'");
  ForceTrace trace;
  trace.sample_time = sample_time;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const double v = parse_double(line, ctx + ":" + std::to_string(lineno));
    if (v < 0.0) throw ValidationError(ctx + ":" + std::to_string(lineno) + ": negative force");
    trace.samples.push_back(v);
  }
  return trace;
}

double grf_metric(const ForceTrace& left, const ForceTrace& right) {
  if (left.samples.size() != right.samples.size())
    throw ValidationError("grf: left and right traces differ in length");
  if (left.sample_time != right.sample_time)
    throw ValidationError("grf: left and right traces differ in sample time");
  if (!(left.sample_time > 0.0)) throw ValidationError("grf: sample time must be > 0");
  double sum = 0.0;
  for (std::size_t k = 0; k < left.samples.size(); ++k)
    sum += left.samples[k] + right.samples[k];
  return left.sample_time * sum;
}

// ---- reference gait ---------------------------------------------------------

std::vector<Vec5> ReferenceGait::resample_at(const std::vector<double>& at) const {
  std::vector<Vec5> out;
  out.reserve(at.size());
  for (double t : at) {
    if (!(t >= times.front() && t <= times.back()))
      throw ValidationError("reference gait does not cover t = " + format_double(t));
    if (t == times.back()) {
      out.push_back(theta.back());
      continue;
    }
    const auto after = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(after - times.begin());
    const std::size_t lo = hi - 1;
    const double frac = (t - times[lo]) / (times[hi] - times[lo]);
    out.push_back(theta[lo] + frac * (theta[hi] - theta[lo]));
  }
  return out;
}

ReferenceGait ReferenceGait::resample(std::size_t intervals) const {
  if (intervals == 0) throw ValidationError("resample: need at least one interval");
  ReferenceGait out;
  out.provenance = provenance;
  const double t0 = times.front();
  const double span = times.back() - t0;
  out.times.resize(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k)
    out.times[k] = t0 + span * static_cast<double>(k) / static_cast<double>(intervals);
  out.times.back() = times.back();
  out.theta = resample_at(out.times);
  return out;
}

ReferenceGait load_reference_gait(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  const std::string ctx = path.string();
  ReferenceGait gait;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (!header) {
      if (!line.empty() && line.front() == '#') {
        gait.provenance += line.substr(1) + "\n";
        continue;
      }
      if (line != "t,theta1,theta2,theta3,theta4,theta5")
        throw ValidationError(ctx + ": expected header t,theta1,theta2,theta3,theta4,theta5");
      header = true;
      continue;
    }
    if (line.empty()) continue;
    const std::string where = ctx + ":" + std::to_string(lineno);
    const std::vector<std::string> cols = split_csv(line);
    if (cols.size() != 6)
      throw ValidationError(where + ": expected 6 columns, got " + std::to_string(cols.size()));
    const double t = parse_double(cols[0], where);
    if (!gait.times.empty() && !(t > gait.times.back()))
      throw ValidationError(where + ": time must be strictly increasing");
    Vec5 th;
    for (int i = 0; i < 5; ++i) th[i] = parse_double(cols[static_cast<std::size_t>(i) + 1], where);
    gait.times.push_back(t);
    gait.theta.push_back(th);
  }
  if (!header) throw ValidationError(ctx + ": missing header");
  if (gait.times.size() < 2) throw ValidationError(ctx + ": need at least 2 samples");
  return gait;
}

std::string reference_gait_csv(const ReferenceGait& gait) {
  std::ostringstream out;
  std::istringstream notes(gait.provenance);
  std::string note;
  while (std::getline(notes, note)) out << '#' << note << '\n';
  out << "t,theta1,theta2,theta3,theta4,theta5\n";
  for (std::size_t k = 0; k < gait.times.size(); ++k) {
    out << format_double(gait.times[k]);
    for (int i = 0; i < 5; ++i) out << ',' << format_double(gait.theta[k][i]);
    out << '\n';
  }
  return out.str();
}

TrajectoryTable replay_reference(const ReferenceGait& gait, const GaitTask& task,
                                 const BodyModel& model) {
  task.validate();
  const std::vector<double> times = sample_times(task.step_time, task.samples);
  // Recorded time axis is taken relative to its first sample.
  std::vector<double> shifted(times);
  for (double& t : shifted) t += gait.times.front();
  const std::vector<Vec5> theta = gait.resample_at(shifted);
  return table_from_angles(times, theta, model);
}

// ---- trajectory CSV ---------------------------------------------------------

std::string trajectory_csv(const TrajectoryTable& table) {
  std::string out = kTrajectoryHeader;
  out += '\n';
  const auto put = [&out](double v) {
    out += ',';
    out += format_double(v);
  };
  for (const TrajectoryRow& row : table.rows) {
    out += format_double(row.t);
    for (int i = 0; i < 5; ++i) put(row.theta[i]);
    for (int i = 0; i < 5; ++i) put(row.phi[i]);
    put(row.p5.x());
    put(row.p5.y());
    put(row.v5.x());
    put(row.v5.y());
    for (int i = 0; i < 5; ++i) put(row.torque[i]);
    out += '\n';
  }
  return out;
}

void export_trajectory(const TrajectoryTable& table, const std::filesystem::path& path) {
  write_text(path, trajectory_csv(table));
}

TrajectoryTable import_trajectory(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  const std::string ctx = path.string();
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kTrajectoryHeader)
    throw ValidationError(ctx + ": unexpected trajectory header");
  TrajectoryTable table;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::string where = ctx + ":" + std::to_string(lineno);
    const std::vector<std::string> cols = split_csv(line);
    if (cols.size() != 20) throw ValidationError(where + ": expected 20 columns");
    std::array<double, 20> v{};
    for (std::size_t i = 0; i < 20; ++i) v[i] = parse_double(cols[i], where);
    TrajectoryRow row;
    row.t = v[0];
    for (int i = 0; i < 5; ++i) {
      row.theta[i] = v[1 + static_cast<std::size_t>(i)];
      row.phi[i] = v[6 + static_cast<std::size_t>(i)];
      row.torque[i] = v[15 + static_cast<std::size_t>(i)];
    }
    row.p5 = {v[11], v[12]};
    row.v5 = {v[13], v[14]};
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace exo
