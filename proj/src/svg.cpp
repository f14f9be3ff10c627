#include "replan/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace replan {

namespace {

constexpr double kCanvas = 720.0;
constexpr double kMargin = 40.0;

struct MapFrame {
  double x0, y0, sx, sy;
  double px(double x) const { return kMargin + (x - x0) * sx; }
  double py(double y) const { return kCanvas - kMargin - (y - y0) * sy; }
};

MapFrame frame_for(const Bounds& b) {
  const double w = b.max[0] - b.min[0];
  const double h = b.max[1] - b.min[1];
  const double span = kCanvas - 2 * kMargin;
  return MapFrame{b.min[0], b.min[1], span / w, span / h};
}

std::string num(double v) {
  std::ostringstream ss;
  ss.precision(2);
  ss << std::fixed << v;
  return ss.str();
}

void polyline(std::ostringstream& out, const MapFrame& f,
              const std::vector<StateVec>& pts, const std::string& style) {
  out << "<polyline fill=\"none\" " << style << " points=\"";
  for (const auto& p : pts) out << num(f.px(p[0])) << ',' << num(f.py(p[1])) << ' ';
  out << "\"/>\n";
}

void draw_ellipse(std::ostringstream& out, const MapFrame& f, double cx,
                  double cy, double rx, double ry, double heading,
                  const std::string& style) {
  out << "<ellipse cx=\"" << num(f.px(cx)) << "\" cy=\"" << num(f.py(cy))
      << "\" rx=\"" << num(rx * f.sx) << "\" ry=\"" << num(ry * f.sy)
      << "\" transform=\"rotate(" << num(-heading * 180.0 / 3.14159265358979)
      << ' ' << num(f.px(cx)) << ' ' << num(f.py(cy)) << ")\" " << style
      << "/>\n";
}

}  // namespace

std::string scenario_svg(const Scenario& scenario,
                         const std::vector<StateVec>* best_path,
                         const InformedUnion* informed) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas
      << "\" height=\"" << kCanvas << "\" viewBox=\"0 0 " << kCanvas << ' '
      << kCanvas << "\">\n";
  if (scenario.bounds.dim() != 2) {
    out << "<text x=\"20\" y=\"40\">non-planar scenario (n="
        << scenario.bounds.dim() << "), map omitted</text>\n</svg>\n";
    return out.str();
  }
  const MapFrame f = frame_for(scenario.bounds);
  out << "<rect x=\"" << num(f.px(scenario.bounds.min[0])) << "\" y=\""
      << num(f.py(scenario.bounds.max[1])) << "\" width=\""
      << num((scenario.bounds.max[0] - scenario.bounds.min[0]) * f.sx)
      << "\" height=\""
      << num((scenario.bounds.max[1] - scenario.bounds.min[1]) * f.sy)
      << "\" fill=\"#f4f9ff\" stroke=\"#333\"/>\n";

  const std::string land = "fill=\"#ffffff\" stroke=\"#667\" stroke-width=\"1.5\"";
  for (const auto& o : scenario.static_obstacles) {
    if (const auto* poly = std::get_if<Polygon>(&o)) {
      out << "<polygon " << land << " points=\"";
      for (const auto& p : poly->vertices)
        out << num(f.px(p[0])) << ',' << num(f.py(p[1])) << ' ';
      out << "\"/>\n";
    } else if (const auto* c = std::get_if<Circle>(&o)) {
      out << "<circle cx=\"" << num(f.px(c->center[0])) << "\" cy=\""
          << num(f.py(c->center[1])) << "\" r=\"" << num(c->radius * f.sx)
          << "\" " << land << "/>\n";
    } else if (const auto* b = std::get_if<AxisBox>(&o)) {
      out << "<rect x=\"" << num(f.px(b->min[0])) << "\" y=\""
          << num(f.py(b->max[1])) << "\" width=\""
          << num((b->max[0] - b->min[0]) * f.sx) << "\" height=\""
          << num((b->max[1] - b->min[1]) * f.sy) << "\" " << land << "/>\n";
    }
  }

  for (const auto& e : scenario.moving_obstacles) {
    if (e.waypoints.size() > 1)
      polyline(out, f, e.waypoints,
               "stroke=\"#888\" stroke-width=\"1\" stroke-dasharray=\"6 4\"");
    const EllipsePose pose = moving_ellipse_pose_at(e, 0.0);
    draw_ellipse(out, f, pose.center[0], pose.center[1], e.semi_major,
                 e.semi_minor, pose.heading,
                 "fill=\"#f5c242\" fill-opacity=\"0.85\" stroke=\"#a87\"");
  }

  if (informed) {
    for (const auto& phs : informed->spheroids()) {
      const double gap2 =
          phs.c_best() * phs.c_best() - phs.c_min() * phs.c_min();
      const double heading = std::atan2(phs.focus_b()[1] - phs.focus_a()[1],
                                        phs.focus_b()[0] - phs.focus_a()[0]);
      draw_ellipse(out, f, phs.center()[0], phs.center()[1],
                   0.5 * phs.c_best(), 0.5 * std::sqrt(std::max(gap2, 0.0)),
                   heading,
                   "fill=\"#3a6fd8\" fill-opacity=\"0.08\" "
                   "stroke=\"#3a6fd8\" stroke-width=\"1.2\"");
    }
  }

  polyline(out, f, scenario.nominal.states(),
           "stroke=\"#c71585\" stroke-width=\"2.5\"");
  if (best_path && !best_path->empty())
    polyline(out, f, *best_path, "stroke=\"#d62728\" stroke-width=\"2\"");

  out << "<text x=\"" << kMargin << "\" y=\"" << kMargin - 12
      << "\" font-family=\"sans-serif\" font-size=\"16\">" << scenario.name
      << "</text>\n</svg>\n";
  return out.str();
}

std::string convergence_svg(const std::vector<CurveSeries>& series,
                            const std::string& title) {
  const double width = 860.0, height = 560.0, ml = 70.0, mb = 50.0, mt = 40.0,
               mr = 20.0;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.median[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      double lo = s.median[i], hi = s.median[i];
      if (i < s.ci_low.size() && std::isfinite(s.ci_low[i]))
        lo = std::min(lo, s.ci_low[i]);
      if (i < s.ci_high.size() && std::isfinite(s.ci_high[i]))
        hi = std::max(hi, s.ci_high[i]);
      ymin = std::min(ymin, lo);
      ymax = std::max(ymax, hi);
    }
  }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (ymax <= ymin) ymax = ymin + 1;
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) {
    return height - mb - (y - ymin) / (ymax - ymin) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << title << "</text>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
      << width - mr << "\" y2=\"" << height - mb
      << "\" stroke=\"#333\"/>\n<line x1=\"" << ml << "\" y1=\"" << mt
      << "\" x2=\"" << ml << "\" y2=\"" << height - mb
      << "\" stroke=\"#333\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 4.0;
    const double yv = ymin + (ymax - ymin) * k / 4.0;
    out << "<text x=\"" << px(xv) << "\" y=\"" << height - mb + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << num(xv)
        << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << num(yv)
        << "</text>\n";
  }

  double legend_y = mt + 10;
  for (const auto& s : series) {
    const bool has_band =
        s.ci_low.size() == s.x.size() && s.ci_high.size() == s.x.size();
    if (has_band) {
      std::ostringstream band;
      bool any = false;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.ci_high[i])) continue;
        band << px(s.x[i]) << ',' << py(s.ci_high[i]) << ' ';
        any = true;
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        if (!std::isfinite(s.ci_low[i])) continue;
        band << px(s.x[i]) << ',' << py(s.ci_low[i]) << ' ';
      }
      if (any)
        out << "<polygon points=\"" << band.str() << "\" fill=\"" << s.color
            << "\" fill-opacity=\"0.15\"/>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.median[i]))
        out << px(s.x[i]) << ',' << py(s.median[i]) << ' ';
    out << "\"/>\n";
    out << "<rect x=\"" << width - mr - 190 << "\" y=\"" << legend_y - 9
        << "\" width=\"14\" height=\"4\" fill=\"" << s.color << "\"/>\n"
        << "<text x=\"" << width - mr - 170 << "\" y=\"" << legend_y
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label
        << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace replan
