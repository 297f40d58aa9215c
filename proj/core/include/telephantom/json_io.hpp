#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "telephantom/rigid_transform.hpp"

namespace telephantom {

using Json = nlohmann::json;

// {"quat":[w,x,y,z], "pos":[x,y,z]}
Json to_json(const RigidTransform& t);
RigidTransform transform_from_json(const Json& j, const std::string& field);

Json to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j, const std::string& field);
Vec3 vec3_from_json(const Json& j, const std::string& field);

/// Whole-file JSON read; throws LoadError naming the path on failure.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Required-member access that throws LoadError("<field>: missing") instead of json exceptions.
const Json& require(const Json& j, const char* key, const std::string& field);
double require_number(const Json& j, const char* key, const std::string& field);

/// 64-bit FNV-1a, stable across platforms; used to tag files with the model they came from.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace telephantom
