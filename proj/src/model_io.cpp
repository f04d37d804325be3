#include "galint/model_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace galint {

namespace {

using nlohmann::json;

Vec3 to_vec3(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error(what + " must be a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Mat3 to_mat3(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error(what + " must be a 3x3 matrix");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3)
      throw std::runtime_error(what + " must be a 3x3 matrix");
    for (int c = 0; c < 3; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

json from_vec3(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json from_mat3(const Mat3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return rows;
}

}  // namespace

MechanismModel parse_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.contains("bodies") || !doc["bodies"].is_array()) {
    throw std::runtime_error("model file needs a 'bodies' array");
  }
  const Vec3 gravity =
      doc.contains("gravity") ? to_vec3(doc["gravity"], "gravity") : Vec3(0, 0, -9.81);

  std::map<std::string, int> index_by_name;
  std::vector<Body> bodies;
  int i = 0;
  for (const json& jb : doc["bodies"]) {
    Body b;
    b.name = jb.value("name", "body" + std::to_string(i + 1));
    const std::string parent = jb.value("parent", "world");
    if (parent == "world") {
      b.joint.parent = -1;
    } else {
      const auto it = index_by_name.find(parent);
      if (it == index_by_name.end()) {
        throw std::runtime_error("body '" + b.name + "' references unknown parent '" + parent +
                                 "' (parents must be declared first)");
      }
      b.joint.parent = it->second;
    }
    b.mass = jb.value("mass", 1.0);
    if (jb.contains("inertia")) b.rotational_inertia = to_mat3(jb["inertia"], "inertia");
    if (!jb.contains("joint")) throw std::runtime_error("body '" + b.name + "' has no joint");
    const json& jj = jb["joint"];
    const std::string type = jj.value("type", "revolute");
    const Vec3 axis = to_vec3(jj.at("axis"), "joint axis");
    if (type == "revolute") {
      b.joint.kind = JointKind::revolute;
      b.joint.twist = make_twist(axis, jj.contains("moment") ? to_vec3(jj["moment"], "moment")
                                                             : Vec3::Zero());
    } else if (type == "prismatic") {
      b.joint.kind = JointKind::prismatic;
      b.joint.twist = make_twist(Vec3::Zero(), axis);
    } else {
      throw std::runtime_error("unknown joint type '" + type + "'");
    }
    if (jb.contains("rest_transform")) {
      const json& jt = jb["rest_transform"];
      if (jt.contains("rotation"))
        b.joint.rest_transform.rotation = to_mat3(jt["rotation"], "rest rotation");
      if (jt.contains("translation"))
        b.joint.rest_transform.translation = to_vec3(jt["translation"], "rest translation");
    }
    index_by_name[b.name] = i++;
    bodies.push_back(std::move(b));
  }
  return MechanismModel(std::move(bodies), gravity);
}

MechanismModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

std::string model_to_json(const MechanismModel& model) {
  json doc;
  doc["gravity"] = from_vec3(model.gravity());
  json bodies = json::array();
  for (int i = 0; i < model.size(); ++i) {
    const Body& b = model.body(i);
    json jb;
    jb["name"] = b.name;
    jb["parent"] = b.joint.parent < 0 ? "world" : model.body(b.joint.parent).name;
    jb["mass"] = b.mass;
    jb["inertia"] = from_mat3(b.rotational_inertia);
    json jj;
    jj["type"] = b.joint.kind == JointKind::revolute ? "revolute" : "prismatic";
    if (b.joint.kind == JointKind::revolute) {
      jj["axis"] = from_vec3(angular(b.joint.twist));
      jj["moment"] = from_vec3(linear(b.joint.twist));
    } else {
      jj["axis"] = from_vec3(linear(b.joint.twist));
    }
    jb["joint"] = jj;
    json jt;
    jt["rotation"] = from_mat3(b.joint.rest_transform.rotation);
    jt["translation"] = from_vec3(b.joint.rest_transform.translation);
    jb["rest_transform"] = jt;
    bodies.push_back(std::move(jb));
  }
  doc["bodies"] = std::move(bodies);
  return doc.dump(2);
}

void save_model(const MechanismModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
  out << model_to_json(model) << "\n";
}

}  // namespace galint
