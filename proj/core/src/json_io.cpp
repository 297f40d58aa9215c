#include "telephantom/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "telephantom/error.hpp"

namespace telephantom {

Json to_json(const RigidTransform& t) {
  const Quat& q = t.rotation();
  const Vec3& p = t.translation();
  return Json{{"quat", {q.w(), q.x(), q.y(), q.z()}}, {"pos", {p.x(), p.y(), p.z()}}};
}

namespace {

double number_at(const Json& arr, std::size_t i, const std::string& field) {
  const Json& v = arr.at(i);
  if (!v.is_number()) throw LoadError(field + "[" + std::to_string(i) + "]: expected a number");
  return v.get<double>();
}

}  // namespace

RigidTransform transform_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) throw LoadError(field + ": expected an object with quat and pos");
  Quat q = Quat::Identity();
  Vec3 p = Vec3::Zero();
  if (j.contains("quat")) {
    const Json& a = j.at("quat");
    if (!a.is_array() || a.size() != 4) throw LoadError(field + ".quat: expected [w,x,y,z]");
    q = Quat(number_at(a, 0, field + ".quat"), number_at(a, 1, field + ".quat"),
             number_at(a, 2, field + ".quat"), number_at(a, 3, field + ".quat"));
    const double n = q.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-6) {
      throw LoadError(field + ".quat: quaternion must have unit norm");
    }
  }
  if (j.contains("pos")) p = vec3_from_json(j.at("pos"), field + ".pos");
  return {q, p};
}

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw LoadError(field + ": expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = number_at(j, i, field);
  }
  return v;
}

Vec3 vec3_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw LoadError(field + ": expected [x,y,z]");
  return {number_at(j, 0, field), number_at(j, 1, field), number_at(j, 2, field)};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw Error(path.string() + ": write failed");
}

const Json& require(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object() || !j.contains(key)) {
    throw LoadError((field.empty() ? std::string(key) : field + "." + key) + ": missing");
  }
  return j.at(key);
}

double require_number(const Json& j, const char* key, const std::string& field) {
  const Json& v = require(j, key, field);
  if (!v.is_number()) {
    throw LoadError((field.empty() ? std::string(key) : field + "." + key) + ": expected a number");
  }
  return v.get<double>();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace telephantom
