#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

namespace replan {

/// Point in the n-dimensional planning space (n >= 2, finite entries).
using StateVec = Eigen::VectorXd;

inline bool same_state(const StateVec& a, const StateVec& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

struct Segment {
  StateVec a;
  StateVec b;
  double length() const { return (b - a).norm(); }
};

/// Axis-aligned sampling hyperrectangle.
struct Bounds {
  StateVec min;
  StateVec max;

  int dim() const { return static_cast<int>(min.size()); }
  double measure() const { return (max - min).prod(); }
  double diagonal() const { return (max - min).norm(); }
  bool contains(const StateVec& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
};

/// Simple counter-clockwise polygon, 2-D only.
struct Polygon {
  std::vector<StateVec> vertices;
};

/// Hypersphere in any dimension.
struct Circle {
  StateVec center;
  double radius = 0.0;
};

/// Axis-aligned box obstacle for n > 2 scenarios.
struct AxisBox {
  StateVec min;
  StateVec max;
};

/// Target vessel: an ellipse translating along a waypoint polyline at
/// constant speed, heading locked to the active polyline segment. Past the
/// end of the trajectory the pose freezes at the final waypoint.
struct MovingEllipse {
  double semi_major = 0.0;  // along heading
  double semi_minor = 0.0;
  std::vector<StateVec> waypoints;
  double speed = 0.0;
};

using Obstacle = std::variant<Polygon, Circle, AxisBox, MovingEllipse>;

struct EllipsePose {
  StateVec center;
  double heading = 0.0;  // radians, world frame
};

double point_segment_distance(const StateVec& p, const StateVec& a,
                              const StateVec& b);
double point_segment_distance(const StateVec& p, const Segment& s);

double polygon_signed_area(const Polygon& poly);
bool polygon_is_simple(const Polygon& poly);
int winding_number(const Polygon& poly, const StateVec& p);
bool polygon_contains(const Polygon& poly, const StateVec& p);
bool segments_intersect_2d(const StateVec& a, const StateVec& b,
                           const StateVec& c, const StateVec& d);
bool segment_intersects_polygon(const Segment& s, const Polygon& poly);
bool segment_intersects_box(const Segment& s, const AxisBox& box);
bool box_contains(const AxisBox& box, const StateVec& p);

/// Pose of a moving ellipse at time t >= 0 (arc-length travel at its speed).
EllipsePose moving_ellipse_pose_at(const MovingEllipse& e, double t);
bool ellipse_contains(const MovingEllipse& e, const EllipsePose& pose,
                      const StateVec& p);

/// Containment test; moving ellipses are posed at time t, static shapes
/// ignore it.
bool obstacle_contains(const Obstacle& o, const StateVec& p, double t);

/// True iff the segment stays inside bounds and clear of every obstacle.
/// Static shapes are tested exactly (winding number plus edge intersections
/// for polygons, segment distance for circles, slab test for boxes). Moving
/// ellipses are sampled at `resolution` plus both endpoints, posed at the
/// time interpolated linearly in arc length between t_a and t_b.
bool edge_collision_free(const Segment& s, const Bounds& bounds,
                         const std::vector<Obstacle>& static_obstacles,
                         const std::vector<MovingEllipse>& moving_obstacles,
                         double t_a, double t_b, double resolution);

}  // namespace replan
