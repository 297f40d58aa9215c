#include "telephantom/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "telephantom/error.hpp"

namespace telephantom {

Trajectory::Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    if (!(waypoints_[i].t > waypoints_[i - 1].t)) {
      throw Error("trajectory: waypoint times must be strictly increasing");
    }
  }
}

JointConfig Trajectory::sample(double t) const {
  if (waypoints_.empty()) throw Error("trajectory: sampling an empty trajectory");
  if (t <= waypoints_.front().t) return waypoints_.front().q;
  if (t >= waypoints_.back().t) return waypoints_.back().q;
  const auto it = std::upper_bound(waypoints_.begin(), waypoints_.end(), t,
                                   [](double v, const Waypoint& w) { return v < w.t; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  const double s = (t - a.t) / (b.t - a.t);
  return a.q + s * (b.q - a.q);
}

Trajectory plan_trajectory(const KinematicModel& model, const JointConfig& from, const JointConfig& to,
                           double dt) {
  const auto n = static_cast<Eigen::Index>(model.joint_count());
  if (from.size() != n || to.size() != n) {
    throw DimensionError("plan_trajectory: configuration size does not match the model");
  }
  if (!(dt > 0.0)) throw Error("plan_trajectory: dt must be positive");
  if (!model.within_limits(from)) throw LimitError("plan_trajectory: start configuration outside joint limits");
  if (!model.within_limits(to)) throw LimitError("plan_trajectory: target configuration outside joint limits");

  double duration = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    duration = std::max(duration, std::abs(to[j] - from[j]) / model.joint(static_cast<std::size_t>(j)).max_velocity);
  }
  if (in_self_collision(model, from)) throw PlanningError("plan_trajectory: start configuration in collision", 0.0);
  if (duration == 0.0) return Trajectory({{0.0, from}});

  const auto segments = static_cast<std::size_t>(std::ceil(duration / dt - 1e-12));
  std::vector<Waypoint> wps;
  wps.reserve(segments + 1);
  wps.push_back({0.0, from});
  for (std::size_t k = 1; k <= segments; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(segments);
    const double t = k == segments ? duration : s * duration;
    JointConfig q = k == segments ? to : JointConfig(from + s * (to - from));
    if (in_self_collision(model, q)) {
      throw PlanningError("plan_trajectory: collision on the straight-line path at t=" + std::to_string(t), t);
    }
    wps.push_back({t, std::move(q)});
  }
  return Trajectory(std::move(wps));
}

}  // namespace telephantom
