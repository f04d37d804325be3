#include "doctest.h"
#include "galint/chain.hpp"
#include "galint/model_io.hpp"
#include "test_util.hpp"

#include <cstdio>
#include <fstream>

using namespace galint;
using namespace galint_test;

TEST_SUITE("model_io") {

TEST_CASE("parse a hand-written document") {
  const std::string text = R"json({
    "gravity": [0, 0, -9.81],
    "bodies": [
      {"name": "base", "parent": "world", "mass": 2.0,
       "inertia": [[0.1,0,0],[0,0.1,0],[0,0,0.1]],
       "joint": {"type": "revolute", "axis": [0,0,1]},
       "rest_transform": {"rotation": [[1,0,0],[0,1,0],[0,0,1]],
                          "translation": [0,0,0.5]}},
      {"name": "slide", "parent": "base", "mass": 0.5,
       "inertia": [[0.01,0,0],[0,0.01,0],[0,0,0.01]],
       "joint": {"type": "prismatic", "axis": [1,0,0]},
       "rest_transform": {"translation": [0.2,0,0]}}
    ]})json";
  const MechanismModel model = parse_model(text);
  REQUIRE(model.size() == 2);
  CHECK(model.validate().empty());
  CHECK(model.body(0).mass == 2.0);
  CHECK(model.parent(1) == 0);
  CHECK(model.body(1).joint.kind == JointKind::prismatic);
  CHECK((linear(model.body(1).joint.twist) - Vec3(1, 0, 0)).norm() == 0.0);
  CHECK(model.body(0).joint.rest_transform.translation.z() == 0.5);
}

TEST_CASE("round trip preserves the chain model") {
  const MechanismModel model = make_chain_pendulum(4, 0.7, 1.3);
  const MechanismModel back = parse_model(model_to_json(model));
  REQUIRE(back.size() == model.size());
  CHECK((back.gravity() - model.gravity()).norm() == 0.0);
  for (int i = 0; i < model.size(); ++i) {
    CHECK(back.body(i).mass == model.body(i).mass);
    CHECK(back.parent(i) == model.parent(i));
    CHECK((back.body(i).joint.twist - model.body(i).joint.twist).norm() == 0.0);
    CHECK((back.body(i).joint.rest_transform.translation -
           model.body(i).joint.rest_transform.translation)
              .norm() == 0.0);
    CHECK((back.body(i).rotational_inertia - model.body(i).rotational_inertia).norm() == 0.0);
  }
}

TEST_CASE("save and load through the filesystem") {
  const std::string path = "galint_io_test_model.json";
  const MechanismModel model = make_chain_pendulum(2);
  save_model(model, path);
  const MechanismModel back = load_model(path);
  CHECK(back.size() == 2);
  CHECK(back.validate().empty());
  std::remove(path.c_str());
}

TEST_CASE("missing files and malformed documents are reported") {
  CHECK_THROWS_AS(load_model("nonexistent-file.json"), std::runtime_error);
  CHECK_THROWS_AS(parse_model("not json at all"), std::runtime_error);
  CHECK_THROWS_AS(parse_model("{\"bodies\": 3}"), std::runtime_error);
  CHECK_THROWS_AS(parse_model(R"({"bodies": [{"name":"a","parent":"ghost",
    "joint":{"type":"revolute","axis":[0,0,1]}}]})"),
                  std::runtime_error);
}

TEST_CASE("unknown joint types are rejected") {
  CHECK_THROWS_AS(parse_model(R"({"bodies": [{"name":"a","parent":"world",
    "joint":{"type":"spherical","axis":[0,0,1]}}]})"),
                  std::runtime_error);
}

}  // TEST_SUITE
