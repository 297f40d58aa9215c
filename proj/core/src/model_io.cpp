#include "telephantom/model_io.hpp"

#include <cstdlib>
#include <string>

#include "telephantom/error.hpp"

#ifndef TELEPHANTOM_DATA_DIR
#define TELEPHANTOM_DATA_DIR "data"
#endif
#ifndef TELEPHANTOM_INSTALL_DATA_DIR
#define TELEPHANTOM_INSTALL_DATA_DIR TELEPHANTOM_DATA_DIR
#endif

namespace telephantom {
namespace {

// Parents and owning joints may be given by name or by index.
int resolve_joint_ref(const Json& ref, const Json& joints, const std::string& field) {
  if (ref.is_null()) return kRootFrame;
  if (ref.is_number_integer()) {
    const int idx = ref.get<int>();
    if (idx < kRootFrame || idx >= static_cast<int>(joints.size())) {
      throw LoadError(field + ": index " + std::to_string(idx) + " out of range");
    }
    return idx;
  }
  if (ref.is_string()) {
    const auto name = ref.get<std::string>();
    for (std::size_t i = 0; i < joints.size(); ++i) {
      if (joints[i].value("name", std::string()) == name) return static_cast<int>(i);
    }
    throw LoadError(field + ": unknown joint '" + name + "'");
  }
  throw LoadError(field + ": expected joint name, index or null");
}

}  // namespace

KinematicModel model_from_json(const Json& doc) {
  if (!doc.is_object()) throw LoadError("model: expected a JSON object");
  const Json& joints = require(doc, "joints", "");
  if (!joints.is_array() || joints.empty()) throw LoadError("joints: expected a non-empty array");

  std::vector<JointSpec> specs;
  specs.reserve(joints.size());
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const std::string field = "joints[" + std::to_string(i) + "]";
    const Json& j = joints[i];
    JointSpec s;
    const Json& name = require(j, "name", field);
    if (!name.is_string()) throw LoadError(field + ".name: expected a string");
    s.name = name.get<std::string>();
    s.parent = resolve_joint_ref(j.value("parent", Json()), joints, field + ".parent");
    if (j.contains("origin")) s.origin = transform_from_json(j.at("origin"), field + ".origin");
    s.axis = vec3_from_json(require(j, "axis", field), field + ".axis");
    s.lower = require_number(j, "lower", field);
    s.upper = require_number(j, "upper", field);
    s.max_velocity = require_number(j, "max_velocity", field);
    specs.push_back(std::move(s));
  }

  std::vector<LinkSpec> links;
  if (doc.contains("links")) {
    const Json& ls = doc.at("links");
    if (!ls.is_array()) throw LoadError("links: expected an array");
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const std::string field = "links[" + std::to_string(i) + "]";
      const Json& l = ls[i];
      LinkSpec spec;
      spec.name = l.value("name", "link" + std::to_string(i));
      spec.joint = resolve_joint_ref(l.value("joint", Json()), joints, field + ".joint");
      const Json& cap = require(l, "capsule", field);
      spec.capsule.a = vec3_from_json(require(cap, "a", field + ".capsule"), field + ".capsule.a");
      spec.capsule.b = vec3_from_json(require(cap, "b", field + ".capsule"), field + ".capsule.b");
      spec.capsule.radius = require_number(cap, "radius", field + ".capsule");
      if (l.contains("mask")) {
        const Json& mask = l.at("mask");
        if (!mask.is_array()) throw LoadError(field + ".mask: expected an array of link indices");
        for (const Json& m : mask) {
          if (!m.is_number_integer()) throw LoadError(field + ".mask: expected integer link indices");
          spec.mask.push_back(m.get<int>());
        }
      }
      links.push_back(std::move(spec));
    }
  }
  return KinematicModel(std::move(specs), std::move(links), doc.value("root", std::string("base")));
}

Json model_to_json(const KinematicModel& model) {
  Json joints = Json::array();
  for (const JointSpec& j : model.joints()) {
    joints.push_back({{"name", j.name},
                      {"parent", j.parent == kRootFrame ? Json() : Json(j.parent)},
                      {"origin", to_json(j.origin)},
                      {"axis", {j.axis.x(), j.axis.y(), j.axis.z()}},
                      {"lower", j.lower},
                      {"upper", j.upper},
                      {"max_velocity", j.max_velocity}});
  }
  Json links = Json::array();
  for (const LinkSpec& l : model.links()) {
    const Capsule& c = l.capsule;
    links.push_back({{"name", l.name},
                     {"joint", l.joint == kRootFrame ? Json() : Json(l.joint)},
                     {"capsule",
                      {{"a", {c.a.x(), c.a.y(), c.a.z()}}, {"b", {c.b.x(), c.b.y(), c.b.z()}}, {"radius", c.radius}}},
                     {"mask", l.mask}});
  }
  return {{"root", model.root_name()}, {"joints", joints}, {"links", links}};
}

KinematicModel load_model(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  try {
    return model_from_json(doc);
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

std::string model_hash(const KinematicModel& model) {
  return hex64(fnv1a64(model_to_json(model).dump()));
}

std::filesystem::path bundled_data_dir() {
  // Env override, then the source tree, then the installed copy.
  if (const char* env = std::getenv("TELEPHANTOM_DATA_DIR"); env != nullptr && *env != '\0') return env;
  std::error_code ec;
  if (std::filesystem::exists(TELEPHANTOM_DATA_DIR, ec)) return TELEPHANTOM_DATA_DIR;
  return TELEPHANTOM_INSTALL_DATA_DIR;
}

KinematicModel bundled_hand() { return load_model(bundled_data_dir() / "hand.json"); }
KinematicModel bundled_arm() { return load_model(bundled_data_dir() / "arm.json"); }

}  // namespace telephantom
