#include "replan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace replan {

double point_segment_distance(const StateVec& p, const StateVec& a,
                              const StateVec& b) {
  if (p.size() != a.size() || a.size() != b.size())
    throw std::invalid_argument("point_segment_distance: dimension mismatch");
  const StateVec d = b - a;
  const double dd = d.squaredNorm();
  if (dd == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(d) / dd, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

double point_segment_distance(const StateVec& p, const Segment& s) {
  return point_segment_distance(p, s.a, s.b);
}

double polygon_signed_area(const Polygon& poly) {
  const auto& v = poly.vertices;
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    twice += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * twice;
}

namespace {

double cross2(const StateVec& o, const StateVec& a, const StateVec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool on_segment_collinear(const StateVec& a, const StateVec& b,
                          const StateVec& p) {
  return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
}

}  // namespace

bool segments_intersect_2d(const StateVec& a, const StateVec& b,
                           const StateVec& c, const StateVec& d) {
  const double d1 = cross2(c, d, a);
  const double d2 = cross2(c, d, b);
  const double d3 = cross2(a, b, c);
  const double d4 = cross2(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment_collinear(c, d, a)) return true;
  if (d2 == 0 && on_segment_collinear(c, d, b)) return true;
  if (d3 == 0 && on_segment_collinear(a, b, c)) return true;
  if (d4 == 0 && on_segment_collinear(a, b, d)) return true;
  return false;
}

bool polygon_is_simple(const Polygon& poly) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const StateVec& a = v[i];
    const StateVec& b = v[(i + 1) % n];
    if ((b - a).norm() == 0.0) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      // Skip edges sharing a vertex.
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect_2d(a, b, v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

int winding_number(const Polygon& poly, const StateVec& p) {
  const auto& v = poly.vertices;
  int wn = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const StateVec& a = v[i];
    const StateVec& b = v[(i + 1) % v.size()];
    if (a[1] <= p[1]) {
      if (b[1] > p[1] && cross2(a, b, p) > 0) ++wn;
    } else {
      if (b[1] <= p[1] && cross2(a, b, p) < 0) --wn;
    }
  }
  return wn;
}

bool polygon_contains(const Polygon& poly, const StateVec& p) {
  return winding_number(poly, p) != 0;
}

bool segment_intersects_polygon(const Segment& s, const Polygon& poly) {
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (segments_intersect_2d(s.a, s.b, v[i], v[(i + 1) % v.size()]))
      return true;
  }
  return false;
}

bool box_contains(const AxisBox& box, const StateVec& p) {
  return (p.array() >= box.min.array()).all() &&
         (p.array() <= box.max.array()).all();
}

bool segment_intersects_box(const Segment& s, const AxisBox& box) {
  // Slab test on the parametric segment a + t(b-a), t in [0,1].
  double t0 = 0.0;
  double t1 = 1.0;
  for (int k = 0; k < s.a.size(); ++k) {
    const double d = s.b[k] - s.a[k];
    if (d == 0.0) {
      if (s.a[k] < box.min[k] || s.a[k] > box.max[k]) return false;
      continue;
    }
    double ta = (box.min[k] - s.a[k]) / d;
    double tb = (box.max[k] - s.a[k]) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

EllipsePose moving_ellipse_pose_at(const MovingEllipse& e, double t) {
  if (t < 0) throw std::invalid_argument("moving_ellipse_pose_at: t < 0");
  const auto& w = e.waypoints;
  EllipsePose pose;
  pose.center = w.front();
  pose.heading = 0.0;
  if (w.size() < 2) return pose;

  double remaining = e.speed * t;
  double heading = std::atan2(w[1][1] - w[0][1], w[1][0] - w[0][0]);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const StateVec d = w[i + 1] - w[i];
    const double len = d.norm();
    heading = std::atan2(d[1], d[0]);
    if (remaining <= len) {
      pose.center = w[i] + (len > 0 ? remaining / len : 0.0) * d;
      pose.heading = heading;
      return pose;
    }
    remaining -= len;
  }
  // Past the trajectory end: frozen at the final waypoint, last heading.
  pose.center = w.back();
  pose.heading = heading;
  return pose;
}

bool ellipse_contains(const MovingEllipse& e, const EllipsePose& pose,
                      const StateVec& p) {
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  const double dx = p[0] - pose.center[0];
  const double dy = p[1] - pose.center[1];
  const double u = c * dx + s * dy;   // along heading
  const double v = -s * dx + c * dy;  // across heading
  const double qu = u / e.semi_major;
  const double qv = v / e.semi_minor;
  return qu * qu + qv * qv <= 1.0;
}

bool obstacle_contains(const Obstacle& o, const StateVec& p, double t) {
  return std::visit(
      [&](const auto& shape) -> bool {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Polygon>) {
          return polygon_contains(shape, p);
        } else if constexpr (std::is_same_v<T, Circle>) {
          return (p - shape.center).norm() <= shape.radius;
        } else if constexpr (std::is_same_v<T, AxisBox>) {
          return box_contains(shape, p);
        } else {
          return ellipse_contains(shape, moving_ellipse_pose_at(shape, t), p);
        }
      },
      o);
}

bool edge_collision_free(const Segment& s, const Bounds& bounds,
                         const std::vector<Obstacle>& static_obstacles,
                         const std::vector<MovingEllipse>& moving_obstacles,
                         double t_a, double t_b, double resolution) {
  if (t_a > t_b) throw std::invalid_argument("edge_collision_free: t_a > t_b");
  // Bounds are convex, so containing both endpoints contains the segment.
  if (!bounds.contains(s.a) || !bounds.contains(s.b)) return false;

  bool has_moving = !moving_obstacles.empty();
  for (const auto& o : static_obstacles) {
    if (std::holds_alternative<Polygon>(o)) {
      const auto& poly = std::get<Polygon>(o);
      if (polygon_contains(poly, s.a) || polygon_contains(poly, s.b) ||
          segment_intersects_polygon(s, poly))
        return false;
    } else if (std::holds_alternative<Circle>(o)) {
      const auto& c = std::get<Circle>(o);
      if (point_segment_distance(c.center, s) <= c.radius) return false;
    } else if (std::holds_alternative<AxisBox>(o)) {
      if (segment_intersects_box(s, std::get<AxisBox>(o))) return false;
    } else {
      has_moving = true;
    }
  }
  if (!has_moving) return true;

  const double len = s.length();
  const int steps =
      std::max(1, static_cast<int>(std::ceil(len / std::max(resolution, 1e-12))));
  for (int k = 0; k <= steps; ++k) {
    const double f = static_cast<double>(k) / steps;
    const StateVec p = s.a + f * (s.b - s.a);
    const double t = t_a + f * (t_b - t_a);
    for (const auto& e : moving_obstacles) {
      if (ellipse_contains(e, moving_ellipse_pose_at(e, t), p)) return false;
    }
    for (const auto& o : static_obstacles) {
      if (std::holds_alternative<MovingEllipse>(o)) {
        const auto& e = std::get<MovingEllipse>(o);
        if (ellipse_contains(e, moving_ellipse_pose_at(e, t), p)) return false;
      }
    }
  }
  return true;
}

}  // namespace replan
