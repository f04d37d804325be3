#pragma once

#include <string>

#include "galint/model.hpp"

namespace galint {

/// Reads a mechanism description file:
/// { "gravity": [x,y,z],
///   "bodies": [{ "name", "parent": name|"world", "mass",
///                "inertia": 3x3, "joint": {"type": "revolute"|"prismatic",
///                "axis": [x,y,z]},
///                "rest_transform": {"rotation": 3x3, "translation": [x,y,z]} }] }
/// Throws std::runtime_error on I/O or schema problems.
MechanismModel load_model(const std::string& path);

MechanismModel parse_model(const std::string& json_text);

void save_model(const MechanismModel& model, const std::string& path);

std::string model_to_json(const MechanismModel& model);

}  // namespace galint
