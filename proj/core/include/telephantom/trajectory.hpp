#pragma once

#include <vector>

#include "telephantom/kinematics.hpp"

namespace telephantom {

struct Waypoint {
  double t = 0.0;  // offset from trajectory start, seconds
  JointConfig q;
};

/// Time-parameterized joint path. Offsets are strictly increasing, starting at 0.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<Waypoint> waypoints);

  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  double duration() const { return waypoints_.empty() ? 0.0 : waypoints_.back().t; }
  bool empty() const { return waypoints_.empty(); }
  const JointConfig& start() const { return waypoints_.front().q; }
  const JointConfig& goal() const { return waypoints_.back().q; }

  /// Linear interpolation between waypoints; clamps to the ends.
  JointConfig sample(double t) const;

 private:
  std::vector<Waypoint> waypoints_;
};

inline constexpr double kDefaultPlannerDt = 0.01;

/// Straight line in joint space, timed so the slowest joint moves at its
/// max_velocity, sampled every `dt` (or finer) and collision-checked at every
/// sample with the geometric oracle. Throws LimitError when an endpoint is
/// outside the limits and PlanningError when any sample collides.
Trajectory plan_trajectory(const KinematicModel& model, const JointConfig& from, const JointConfig& to,
                           double dt = kDefaultPlannerDt);

}  // namespace telephantom
