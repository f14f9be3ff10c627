#include "replan/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace replan {

using nlohmann::json;

bool Scenario::point_in_static(const StateVec& p) const {
  for (const auto& o : static_obstacles)
    if (obstacle_contains(o, p, 0.0)) return true;
  return false;
}

bool Scenario::edge_collision_free(const Segment& s, double t_a, double t_b,
                                   double resolution) const {
  return replan::edge_collision_free(s, bounds, static_obstacles,
                                     moving_obstacles, t_a, t_b, resolution);
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw SchemaError(path + ": " + msg);
}

const json& require(const json& obj, const std::string& path,
                    const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> keys) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) fail(path + "." + item.key(), "unknown field");
  }
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

StateVec get_state(const json& v, const std::string& path, int expected_dim) {
  if (!v.is_array() || v.empty()) fail(path, "expected a coordinate array");
  StateVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[static_cast<int>(i)] =
        get_number(v[i], path + "[" + std::to_string(i) + "]");
  if (expected_dim >= 0 && out.size() != expected_dim)
    fail(path, "expected " + std::to_string(expected_dim) + " coordinates");
  return out;
}

std::vector<StateVec> get_states(const json& v, const std::string& path,
                                 int expected_dim) {
  if (!v.is_array()) fail(path, "expected an array of states");
  std::vector<StateVec> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(
        get_state(v[i], path + "[" + std::to_string(i) + "]", expected_dim));
  return out;
}

void check_in_bounds(const Bounds& b, const StateVec& p,
                     const std::string& path) {
  if (!b.contains(p)) fail(path, "lies outside bounds");
}

Obstacle parse_static_obstacle(const json& v, const Bounds& bounds,
                               const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  const json& type = require(v, path, "type");
  if (!type.is_string()) fail(path + ".type", "expected a string");
  const std::string t = type.get<std::string>();
  const int n = bounds.dim();

  if (t == "polygon") {
    reject_unknown(v, path, {"type", "vertices"});
    if (n != 2) fail(path, "polygon obstacles require a 2-D scenario");
    Polygon poly{get_states(require(v, path, "vertices"), path + ".vertices", 2)};
    if (poly.vertices.size() < 3)
      fail(path + ".vertices", "polygon needs at least 3 vertices");
    if (!polygon_is_simple(poly))
      fail(path + ".vertices", "polygon must be simple");
    if (polygon_signed_area(poly) <= 0.0)
      fail(path + ".vertices", "polygon must be counter-clockwise");
    for (std::size_t i = 0; i < poly.vertices.size(); ++i)
      check_in_bounds(bounds, poly.vertices[i],
                      path + ".vertices[" + std::to_string(i) + "]");
    return poly;
  }
  if (t == "circle") {
    reject_unknown(v, path, {"type", "center", "radius"});
    Circle c;
    c.center = get_state(require(v, path, "center"), path + ".center", n);
    c.radius = get_number(require(v, path, "radius"), path + ".radius");
    if (c.radius <= 0.0) fail(path + ".radius", "must be > 0");
    for (int d = 0; d < n; ++d)
      if (c.center[d] - c.radius < bounds.min[d] ||
          c.center[d] + c.radius > bounds.max[d])
        fail(path, "circle extends outside bounds");
    return c;
  }
  if (t == "box") {
    reject_unknown(v, path, {"type", "min", "max"});
    AxisBox box;
    box.min = get_state(require(v, path, "min"), path + ".min", n);
    box.max = get_state(require(v, path, "max"), path + ".max", n);
    for (int d = 0; d < n; ++d)
      if (box.min[d] >= box.max[d]) fail(path, "box min must be < max");
    check_in_bounds(bounds, box.min, path + ".min");
    check_in_bounds(bounds, box.max, path + ".max");
    return box;
  }
  if (t == "moving_ellipse")
    fail(path + ".type", "moving obstacles belong in moving_obstacles");
  fail(path + ".type", "unknown obstacle type '" + t + "'");
}

MovingEllipse parse_moving_obstacle(const json& v, const Bounds& bounds,
                                    const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  const json& type = require(v, path, "type");
  if (!type.is_string() || type.get<std::string>() != "moving_ellipse")
    fail(path + ".type", "expected 'moving_ellipse'");
  reject_unknown(v, path,
                 {"type", "semi_major", "semi_minor", "waypoints", "speed"});
  if (bounds.dim() != 2)
    fail(path, "moving ellipses require a 2-D scenario");
  MovingEllipse e;
  e.semi_major =
      get_number(require(v, path, "semi_major"), path + ".semi_major");
  e.semi_minor =
      get_number(require(v, path, "semi_minor"), path + ".semi_minor");
  if (e.semi_major <= 0.0) fail(path + ".semi_major", "must be > 0");
  if (e.semi_minor <= 0.0) fail(path + ".semi_minor", "must be > 0");
  e.waypoints = get_states(require(v, path, "waypoints"), path + ".waypoints", 2);
  if (e.waypoints.empty()) fail(path + ".waypoints", "needs >= 1 waypoint");
  for (std::size_t i = 0; i + 1 < e.waypoints.size(); ++i)
    if ((e.waypoints[i + 1] - e.waypoints[i]).norm() == 0.0)
      fail(path + ".waypoints[" + std::to_string(i + 1) + "]",
           "consecutive duplicate waypoint");
  e.speed = get_number(require(v, path, "speed"), path + ".speed");
  if (e.speed < 0.0) fail(path + ".speed", "must be >= 0");
  return e;
}

}  // namespace

Scenario load_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("document: ") + e.what());
  }
  if (!doc.is_object()) fail("document", "expected a JSON object");
  reject_unknown(doc, "document",
                 {"version", "name", "bounds", "nominal", "own_speed",
                  "static_obstacles", "moving_obstacles"});

  const json& version = require(doc, "document", "version");
  if (!version.is_string() || version.get<std::string>() != "1")
    fail("version", "unsupported schema version (expected \"1\")");

  const json& name = require(doc, "document", "name");
  if (!name.is_string()) fail("name", "expected a string");

  const json& jb = require(doc, "document", "bounds");
  if (!jb.is_object()) fail("bounds", "expected an object");
  reject_unknown(jb, "bounds", {"min", "max"});
  Bounds bounds;
  bounds.min = get_state(require(jb, "bounds", "min"), "bounds.min", -1);
  bounds.max = get_state(require(jb, "bounds", "max"), "bounds.max",
                         static_cast<int>(bounds.min.size()));
  if (bounds.dim() < 2) fail("bounds", "need at least 2 dimensions");
  for (int d = 0; d < bounds.dim(); ++d)
    if (bounds.min[d] >= bounds.max[d]) fail("bounds", "min must be < max");

  const auto nominal_states =
      get_states(require(doc, "document", "nominal"), "nominal", bounds.dim());
  if (nominal_states.size() < 2) fail("nominal", "needs at least 2 states");
  for (std::size_t i = 0; i < nominal_states.size(); ++i)
    check_in_bounds(bounds, nominal_states[i],
                    "nominal[" + std::to_string(i) + "]");

  const double own_speed =
      get_number(require(doc, "document", "own_speed"), "own_speed");
  if (own_speed <= 0.0) fail("own_speed", "must be > 0");

  std::vector<Obstacle> static_obstacles;
  const json& js = require(doc, "document", "static_obstacles");
  if (!js.is_array()) fail("static_obstacles", "expected an array");
  for (std::size_t i = 0; i < js.size(); ++i)
    static_obstacles.push_back(parse_static_obstacle(
        js[i], bounds, "static_obstacles[" + std::to_string(i) + "]"));

  std::vector<MovingEllipse> moving_obstacles;
  const json& jm = require(doc, "document", "moving_obstacles");
  if (!jm.is_array()) fail("moving_obstacles", "expected an array");
  for (std::size_t i = 0; i < jm.size(); ++i)
    moving_obstacles.push_back(parse_moving_obstacle(
        jm[i], bounds, "moving_obstacles[" + std::to_string(i) + "]"));

  try {
    return Scenario{name.get<std::string>(), bounds,
                    NominalPath(nominal_states), std::move(static_obstacles),
                    std::move(moving_obstacles), own_speed};
  } catch (const std::invalid_argument& e) {
    fail("nominal", e.what());
  }
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

namespace {

json states_to_json(const std::vector<StateVec>& states) {
  json arr = json::array();
  for (const auto& s : states) {
    json row = json::array();
    for (int d = 0; d < s.size(); ++d) row.push_back(s[d]);
    arr.push_back(row);
  }
  return arr;
}

json state_to_json(const StateVec& s) {
  json row = json::array();
  for (int d = 0; d < s.size(); ++d) row.push_back(s[d]);
  return row;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
  json doc;
  doc["version"] = "1";
  doc["name"] = s.name;
  doc["bounds"] = {{"min", state_to_json(s.bounds.min)},
                   {"max", state_to_json(s.bounds.max)}};
  doc["nominal"] = states_to_json(s.nominal.states());
  doc["own_speed"] = s.own_speed;
  json stat = json::array();
  for (const auto& o : s.static_obstacles) {
    json jo;
    if (const auto* poly = std::get_if<Polygon>(&o)) {
      jo["type"] = "polygon";
      jo["vertices"] = states_to_json(poly->vertices);
    } else if (const auto* c = std::get_if<Circle>(&o)) {
      jo["type"] = "circle";
      jo["center"] = state_to_json(c->center);
      jo["radius"] = c->radius;
    } else if (const auto* b = std::get_if<AxisBox>(&o)) {
      jo["type"] = "box";
      jo["min"] = state_to_json(b->min);
      jo["max"] = state_to_json(b->max);
    }
    stat.push_back(jo);
  }
  doc["static_obstacles"] = stat;
  json mov = json::array();
  for (const auto& e : s.moving_obstacles) {
    json jo;
    jo["type"] = "moving_ellipse";
    jo["semi_major"] = e.semi_major;
    jo["semi_minor"] = e.semi_minor;
    jo["waypoints"] = states_to_json(e.waypoints);
    jo["speed"] = e.speed;
    mov.push_back(jo);
  }
  doc["moving_obstacles"] = mov;
  return doc.dump(2);
}

AreaRatioEstimate area_ratio(const Scenario& s, long mc_samples,
                             std::uint64_t seed) {
  if (mc_samples < 1000)
    throw std::invalid_argument("area_ratio: mc_samples must be >= 1000");
  Rng rng(seed);
  const int n = s.bounds.dim();
  StateVec p(n);
  long free_count = 0;
  for (long i = 0; i < mc_samples; ++i) {
    for (int d = 0; d < n; ++d)
      p[d] = rng.uniform(s.bounds.min[d], s.bounds.max[d]);
    if (!s.point_in_static(p)) ++free_count;
  }
  AreaRatioEstimate est;
  est.ratio = static_cast<double>(free_count) / mc_samples;
  est.std_error = std::sqrt(est.ratio * (1.0 - est.ratio) / mc_samples);
  return est;
}

namespace {

StateVec v2(double x, double y) {
  StateVec v(2);
  v << x, y;
  return v;
}

Bounds square_bounds(double lo, double hi) {
  return Bounds{v2(lo, lo), v2(hi, hi)};
}

// Case study I: head-on encounter inside a dredged channel between two
// shoals; nearly the whole chart is unnavigable.
Scenario make_narrow_passage() {
  Bounds bounds = square_bounds(0.0, 1000.0);
  // Channel centerline follows the nominal; the shoals leave a gap that
  // narrows from 400 m at the ends to 190 m midway.
  Polygon south{{v2(0, 0), v2(1000, 0), v2(1000, 300), v2(650, 425),
                 v2(350, 385), v2(0, 300)}};
  Polygon north{{v2(0, 700), v2(350, 575), v2(650, 615), v2(1000, 700),
                 v2(1000, 1000), v2(0, 1000)}};
  MovingEllipse target;
  target.semi_major = 50.0;
  target.semi_minor = 20.0;
  target.waypoints = {v2(950, 510), v2(50, 490)};
  target.speed = 6.0;
  return Scenario{"narrow_passage",
                  bounds,
                  NominalPath({v2(50, 500), v2(350, 480), v2(650, 520),
                               v2(950, 500)}),
                  {south, north},
                  {target},
                  6.0};
}

// Case study II: coastal waters with a starboard-crossing ferry and a slower
// vessel to overtake on the same route.
Scenario make_inner_coastal() {
  Bounds bounds = square_bounds(0.0, 1000.0);
  Polygon coast{{v2(540, 1000), v2(540, 700), v2(660, 520), v2(820, 320),
                 v2(1000, 180), v2(1000, 1000)}};
  Circle island_a{v2(200, 430), 85.0};
  Circle island_b{v2(520, 190), 110.0};
  Circle island_c{v2(150, 700), 100.0};
  MovingEllipse ferry;
  ferry.semi_major = 45.0;
  ferry.semi_minor = 18.0;
  ferry.waypoints = {v2(900, 520), v2(100, 420)};
  ferry.speed = 7.8;
  MovingEllipse slow_vessel;
  slow_vessel.semi_major = 45.0;
  slow_vessel.semi_minor = 18.0;
  slow_vessel.waypoints = {v2(440, 680), v2(480, 840), v2(520, 980)};
  slow_vessel.speed = 1.2;
  return Scenario{"inner_coastal",
                  bounds,
                  NominalPath({v2(100, 80), v2(260, 330), v2(420, 580),
                               v2(470, 800), v2(500, 950)}),
                  {coast, island_a, island_b, island_c},
                  {ferry, slow_vessel},
                  6.0};
}

// Case study III: leaving a fjord whose exit narrows just where a fishing
// boat is working on the nominal route.
Scenario make_fjord_exit() {
  Bounds bounds = square_bounds(0.0, 1000.0);
  Polygon north_wall{{v2(0, 970), v2(750, 950), v2(900, 640), v2(1000, 620),
                      v2(1000, 1000), v2(0, 1000)}};
  Polygon south_wall{{v2(0, 0), v2(1000, 0), v2(1000, 400), v2(900, 360),
                      v2(750, 50), v2(0, 30)}};
  MovingEllipse fishing;
  fishing.semi_major = 42.0;
  fishing.semi_minor = 26.0;
  fishing.waypoints = {v2(840, 520), v2(860, 480)};
  fishing.speed = 0.25;
  return Scenario{"fjord_exit",
                  bounds,
                  NominalPath({v2(80, 500), v2(420, 500), v2(760, 500),
                               v2(950, 500)}),
                  {north_wall, south_wall},
                  {fishing},
                  6.0};
}

}  // namespace

std::vector<std::string> bundled_fixture_names() {
  return {"narrow_passage", "inner_coastal", "fjord_exit"};
}

Scenario bundled_fixture(const std::string& name) {
  if (name == "narrow_passage") return make_narrow_passage();
  if (name == "inner_coastal") return make_inner_coastal();
  if (name == "fjord_exit") return make_fjord_exit();
  throw std::invalid_argument("unknown bundled fixture: " + name);
}

std::vector<Scenario> bundled_fixtures() {
  std::vector<Scenario> out;
  for (const auto& name : bundled_fixture_names())
    out.push_back(bundled_fixture(name));
  return out;
}

std::vector<StateVec> bundled_feasible_path(const std::string& name) {
  if (name == "narrow_passage")
    return {v2(50, 500),  v2(350, 480), v2(500, 435),
            v2(650, 520), v2(950, 500)};
  if (name == "inner_coastal")
    return {v2(100, 80),  v2(260, 330), v2(360, 420), v2(420, 580),
            v2(430, 720), v2(415, 830), v2(460, 920), v2(500, 950)};
  if (name == "fjord_exit")
    return {v2(80, 500),  v2(420, 500), v2(700, 440),
            v2(860, 420), v2(950, 500)};
  throw std::invalid_argument("unknown bundled fixture: " + name);
}

}  // namespace replan
