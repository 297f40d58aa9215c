#include "telephantom/calibration.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "telephantom/error.hpp"

namespace telephantom {

std::string to_string(EdgeSource s) {
  switch (s) {
    case EdgeSource::kHandEye: return "hand_eye";
    case EdgeSource::kTagObservation: return "tag_observation";
    case EdgeSource::kDerived: return "derived";
  }
  return "derived";
}

RigidTransform solve_tag_to_base(const RigidTransform& base_to_fixed_cam, const TagObservation& obs) {
  if (obs.observer != frames::kFixedCam) {
    throw FrameMismatchError("solve_tag_to_base: observation from '" + obs.observer + "', expected '" +
                             frames::kFixedCam + "'");
  }
  return base_to_fixed_cam * obs.tag_pose;
}

RigidTransform solve_float_to_base(const RigidTransform& base_to_tag, const TagObservation& obs) {
  if (obs.observer != frames::kFloatCam) {
    throw FrameMismatchError("solve_float_to_base: observation from '" + obs.observer + "', expected '" +
                             frames::kFloatCam + "'");
  }
  return base_to_tag * obs.tag_pose.inverse();
}

Pixel project_point(const CameraIntrinsics& k, const RigidTransform& base_to_cam, const Vec3& point_in_base) {
  const Vec3 p = base_to_cam.inverse() * point_in_base;
  if (!(p.z() > 0.0)) throw BehindCameraError("project_point: point is not in front of the camera");
  return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy};
}

void FrameGraph::set_edge(const std::string& from, const std::string& to, const RigidTransform& from_to,
                          EdgeSource source) {
  if (from == to) throw FrameMismatchError("frame graph: self edge on '" + from + "'");
  const auto key = std::make_pair(from, to);
  const auto rkey = std::make_pair(to, from);
  if (!edges_.contains(key)) insertion_.push_back(key);
  edges_[key] = Edge{from, to, from_to, source};
  edges_[rkey] = Edge{to, from, from_to.inverse(), source};
}

void FrameGraph::erase_edge(const std::string& a, const std::string& b) {
  edges_.erase({a, b});
  edges_.erase({b, a});
  std::erase_if(insertion_, [&](const auto& k) { return (k.first == a && k.second == b) || (k.first == b && k.second == a); });
}

void FrameGraph::set_hand_eye(const RigidTransform& base_to_fixed_cam) {
  set_edge(frames::kBase, frames::kFixedCam, base_to_fixed_cam, EdgeSource::kHandEye);
  erase_edge(frames::kFixedCam, frames::kTag);
  erase_edge(frames::kBase, frames::kTag);
  erase_edge(frames::kFloatCam, frames::kTag);
  erase_edge(frames::kBase, frames::kFloatCam);
  stage_ = 1;
}

RigidTransform FrameGraph::observe(const TagObservation& obs) {
  if (obs.observer == frames::kFixedCam) {
    if (stage_ < 1) {
      throw OrderViolationError("frame graph: tag observed by the fixed camera before hand-eye calibration");
    }
    const RigidTransform base_to_fixed = edges_.at({frames::kBase, frames::kFixedCam}).transform;
    const RigidTransform base_to_tag = solve_tag_to_base(base_to_fixed, obs);
    set_edge(frames::kFixedCam, frames::kTag, obs.tag_pose, EdgeSource::kTagObservation);
    set_edge(frames::kBase, frames::kTag, base_to_tag, EdgeSource::kDerived);
    erase_edge(frames::kFloatCam, frames::kTag);
    erase_edge(frames::kBase, frames::kFloatCam);
    stage_ = 2;
    return base_to_tag;
  }
  if (obs.observer == frames::kFloatCam) {
    if (stage_ < 2) {
      throw OrderViolationError("frame graph: floating camera observation before base→tag was derived");
    }
    const RigidTransform base_to_tag = edges_.at({frames::kBase, frames::kTag}).transform;
    const RigidTransform base_to_float = solve_float_to_base(base_to_tag, obs);
    set_edge(frames::kFloatCam, frames::kTag, obs.tag_pose, EdgeSource::kTagObservation);
    set_edge(frames::kBase, frames::kFloatCam, base_to_float, EdgeSource::kDerived);
    stage_ = 3;
    return base_to_float;
  }
  throw FrameMismatchError("frame graph: unknown observer '" + obs.observer + "'");
}

std::optional<RigidTransform> FrameGraph::lookup(const std::string& from, const std::string& to) const {
  if (from == to) return RigidTransform::identity();
  // Breadth-first over frames; each reached frame stores from→frame.
  std::map<std::string, RigidTransform> reached{{from, RigidTransform::identity()}};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    for (auto it = edges_.lower_bound({cur, std::string()}); it != edges_.end() && it->first.first == cur; ++it) {
      const std::string& next = it->first.second;
      if (reached.contains(next)) continue;
      reached[next] = reached.at(cur) * it->second.transform;
      if (next == to) return reached.at(next);
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

bool FrameGraph::has_edge(const std::string& from, const std::string& to) const {
  return edges_.contains({from, to});
}

std::vector<FrameGraph::Edge> FrameGraph::edges() const {
  std::vector<Edge> out;
  for (const auto& key : insertion_) out.push_back(edges_.at(key));
  return out;
}

Json FrameGraph::snapshot() const {
  Json frames_json = Json::object();
  std::set<std::string> names{frames::kBase};
  for (const auto& [key, edge] : edges_) names.insert(key.first);
  for (const std::string& name : names) {
    const auto pose = lookup(frames::kBase, name);
    if (!pose) continue;
    Json entry = to_json(*pose);
    const auto direct = edges_.find({frames::kBase, name});
    entry["source"] = direct != edges_.end() ? to_string(direct->second.source) : std::string("derived");
    if (name == frames::kBase) entry["source"] = "root";
    frames_json[name] = std::move(entry);
  }
  return Json{{"frames", std::move(frames_json)}, {"stage", stage_}};
}

RigidTransform perturb(const RigidTransform& t, double rotation_sigma, double translation_sigma,
                       std::mt19937_64& rng) {
  std::normal_distribution<double> rot(0.0, rotation_sigma > 0 ? rotation_sigma : 1.0);
  std::normal_distribution<double> trans(0.0, translation_sigma > 0 ? translation_sigma : 1.0);
  Vec3 rv = Vec3::Zero();
  Vec3 dt = Vec3::Zero();
  if (rotation_sigma > 0) rv = Vec3(rot(rng), rot(rng), rot(rng));
  if (translation_sigma > 0) dt = Vec3(trans(rng), trans(rng), trans(rng));
  return {rotation_exp(rv) * t.rotation(), t.translation() + dt};
}

RigidTransform random_transform(std::mt19937_64& rng, double max_translation) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(-max_translation, max_translation);
  const Quat q(n(rng), n(rng), n(rng), n(rng));
  return {q.normalized(), Vec3(u(rng), u(rng), u(rng))};
}

SyntheticRig SyntheticRig::random(std::mt19937_64& rng) {
  return {random_transform(rng, 1.5), random_transform(rng, 1.0), random_transform(rng, 1.5)};
}

TagObservation SyntheticRig::fixed_observation(double rotation_sigma, double translation_sigma,
                                               std::mt19937_64& rng) const {
  const RigidTransform truth = base_to_fixed_cam.inverse() * base_to_tag;
  return {frames::kFixedCam, perturb(truth, rotation_sigma, translation_sigma, rng), 0.0, rotation_sigma};
}

TagObservation SyntheticRig::float_observation(double rotation_sigma, double translation_sigma,
                                               std::mt19937_64& rng) const {
  const RigidTransform truth = base_to_float_cam.inverse() * base_to_tag;
  return {frames::kFloatCam, perturb(truth, rotation_sigma, translation_sigma, rng), 0.0, rotation_sigma};
}

}  // namespace telephantom
