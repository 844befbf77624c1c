#include "cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "rbc/errors.hpp"

namespace rbc::cli {

namespace {

constexpr double kPanelWidth = 520.0;
constexpr double kPanelHeight = 340.0;
constexpr double kMargin = 56.0;
constexpr std::size_t kMaxPolylinePoints = 4000;

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4g", v);
  return buffer;
}

std::string px(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // Pads the range by 5 % and widens degenerate ranges so a single sample
  // still maps to the middle of the panel.
  Range padded() const {
    Range r = *this;
    if (!std::isfinite(r.lo)) return {-1.0, 1.0};
    if (r.hi - r.lo < 1e-12) {
      const double pad = std::max(1.0, std::abs(r.lo)) * 0.5;
      return {r.lo - pad, r.hi + pad};
    }
    const double pad = 0.05 * (r.hi - r.lo);
    return {r.lo - pad, r.hi + pad};
  }
};

class Panel {
 public:
  Panel(double left, double top, std::string title, std::string xlabel, Range x, Range y)
      : left_(left), top_(top), title_(std::move(title)), xlabel_(std::move(xlabel)),
        x_(x.padded()), y_(y.padded()) {}

  double sx(double v) const {
    return left_ + kMargin + (v - x_.lo) / (x_.hi - x_.lo) * (kPanelWidth - 1.5 * kMargin);
  }
  double sy(double v) const {
    return top_ + kPanelHeight - kMargin -
           (v - y_.lo) / (y_.hi - y_.lo) * (kPanelHeight - 1.6 * kMargin);
  }

  void frame(std::ostringstream& svg) const {
    const double x0 = sx(x_.lo), x1 = sx(x_.hi), y0 = sy(y_.lo), y1 = sy(y_.hi);
    svg << "<rect x=\"" << px(x0) << "\" y=\"" << px(y1) << "\" width=\"" << px(x1 - x0)
        << "\" height=\"" << px(y0 - y1) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << px(left_ + kPanelWidth / 2) << "\" y=\"" << px(top_ + 20)
        << "\" text-anchor=\"middle\" font-size=\"14\">" << title_ << "</text>\n";
    svg << "<text x=\"" << px((x0 + x1) / 2) << "\" y=\"" << px(y0 + 36)
        << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel_ << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
      const double xv = x_.lo + (x_.hi - x_.lo) * i / 4.0;
      const double yv = y_.lo + (y_.hi - y_.lo) * i / 4.0;
      svg << "<text x=\"" << px(sx(xv)) << "\" y=\"" << px(y0 + 16)
          << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xv) << "</text>\n";
      svg << "<text x=\"" << px(x0 - 6) << "\" y=\"" << px(sy(yv) + 3)
          << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(yv) << "</text>\n";
    }
  }

  void polyline(std::ostringstream& svg, const std::vector<double>& xs,
                const std::vector<double>& ys, const std::string& color,
                const std::string& extra = {}) const {
    if (xs.empty()) return;
    const std::size_t stride = std::max<std::size_t>(1, xs.size() / kMaxPolylinePoints);
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.4\" " << extra
        << " points=\"";
    for (std::size_t i = 0; i < xs.size(); i += stride) {
      svg << px(sx(xs[i])) << ',' << px(sy(ys[i])) << ' ';
    }
    svg << px(sx(xs.back())) << ',' << px(sy(ys.back())) << "\"/>\n";
  }

  void hline(std::ostringstream& svg, double v, const std::string& color) const {
    if (v < y_.lo || v > y_.hi) return;
    svg << "<line x1=\"" << px(sx(x_.lo)) << "\" y1=\"" << px(sy(v)) << "\" x2=\""
        << px(sx(x_.hi)) << "\" y2=\"" << px(sy(v)) << "\" stroke=\"" << color
        << "\" stroke-dasharray=\"4 3\"/>\n";
  }

  void legend(std::ostringstream& svg, int slot, const std::string& label,
              const std::string& color) const {
    const double x = left_ + kPanelWidth - 150;
    const double y = top_ + 40 + 16 * slot;
    svg << "<line x1=\"" << px(x) << "\" y1=\"" << px(y) << "\" x2=\"" << px(x + 18) << "\" y2=\""
        << px(y) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << px(x + 24) << "\" y=\"" << px(y + 4) << "\" font-size=\"11\">" << label
        << "</text>\n";
  }

 private:
  double left_;
  double top_;
  std::string title_;
  std::string xlabel_;
  Range x_;
  Range y_;
};

std::vector<Eigen::Vector2d> ellipse_points(const Matrix& q, int samples) {
  const Eigen::Matrix2d block = q.topLeftCorner(2, 2);
  const Eigen::Matrix2d l = Eigen::LLT<Eigen::Matrix2d>(block).matrixL();
  std::vector<Eigen::Vector2d> points;
  for (int i = 0; i <= samples; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / samples;
    points.push_back(l * Eigen::Vector2d(std::cos(theta), std::sin(theta)));
  }
  return points;
}

}  // namespace

std::vector<Eigen::Vector2d> hull_boundary(const std::vector<Matrix>& q_list, int samples) {
  std::vector<Eigen::Vector2d> points;
  if (q_list.empty() || samples <= 0) return points;
  for (int i = 0; i < samples; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / samples;
    const Eigen::Vector2d d(std::cos(theta), std::sin(theta));
    double best = -1.0;
    Eigen::Vector2d point = Eigen::Vector2d::Zero();
    for (const auto& q : q_list) {
      const Eigen::Matrix2d block = q.topLeftCorner(2, 2);
      const double support_sq = d.dot(block * d);
      if (support_sq > best) {
        best = support_sq;
        point = block * d / std::sqrt(support_sq);
      }
    }
    points.push_back(point);
  }
  return points;
}

std::string render_plot(const SimulationTrace& trace, const std::optional<std::vector<Matrix>>& q_list) {
  if (trace.rows.empty()) throw Error("cannot plot an empty trace");
  const bool planar = trace.order >= 2;

  std::vector<double> t, x1, x2, y, u, b_true, b_hat, source;
  for (const auto& row : trace.rows) {
    t.push_back(row.t);
    x1.push_back(row.x(0));
    x2.push_back(planar ? row.x(1) : 0.0);
    y.push_back(row.y);
    u.push_back(row.u_applied);
    b_true.push_back(row.b_true);
    b_hat.push_back(row.b_hat_max);
    source.push_back(row.source == ControlSource::kBackup ? 1.0 : 0.0);
  }

  std::vector<Eigen::Vector2d> hull;
  std::vector<std::vector<Eigen::Vector2d>> ellipses;
  if (q_list && planar) {
    hull = hull_boundary(*q_list);
    for (const auto& q : *q_list) ellipses.push_back(ellipse_points(q, 240));
  }

  Range phase_x, phase_y, time, signal, barrier;
  for (std::size_t i = 0; i < t.size(); ++i) {
    phase_x.add(x1[i]);
    phase_y.add(x2[i]);
    time.add(t[i]);
    signal.add(y[i]);
    signal.add(u[i]);
    barrier.add(b_true[i]);
    barrier.add(b_hat[i]);
  }
  for (const auto& p : hull) {
    phase_x.add(p.x());
    phase_y.add(p.y());
  }

  std::ostringstream svg;
  const double width = 2 * kPanelWidth;
  const double height = 2 * kPanelHeight;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width) << "\" height=\""
      << px(height) << "\" viewBox=\"0 0 " << px(width) << ' ' << px(height)
      << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  Panel phase(0, 0, "Phase portrait", "x1 (vertical axis x2)", phase_x, phase_y);
  phase.frame(svg);
  const auto draw_loop = [&](const std::vector<Eigen::Vector2d>& pts, const std::string& color,
                             const std::string& extra) {
    std::vector<double> xs, ys;
    for (const auto& p : pts) {
      xs.push_back(p.x());
      ys.push_back(p.y());
    }
    if (!pts.empty()) {
      xs.push_back(pts.front().x());
      ys.push_back(pts.front().y());
    }
    phase.polyline(svg, xs, ys, color, extra);
  };
  for (const auto& e : ellipses) draw_loop(e, "#999", "stroke-dasharray=\"5 3\"");
  if (!hull.empty()) {
    draw_loop(hull, "#000", "");
    phase.legend(svg, 0, "hull boundary", "#000");
    phase.legend(svg, 1, "ellipses", "#999");
  }
  phase.polyline(svg, x1, x2, "#1f77b4");
  phase.legend(svg, 2, "trajectory", "#1f77b4");

  Panel signals(kPanelWidth, 0, "Output and input", "t [s]", time, signal);
  signals.frame(svg);
  signals.hline(svg, 1.0, "#bbb");
  signals.hline(svg, -1.0, "#bbb");
  signals.polyline(svg, t, u, "#d62728");
  signals.polyline(svg, t, y, "#1f77b4");
  signals.legend(svg, 0, "y", "#1f77b4");
  signals.legend(svg, 1, "u applied", "#d62728");

  Panel barriers(0, kPanelHeight, "Barrier value", "t [s]", time, barrier);
  barriers.frame(svg);
  barriers.hline(svg, 0.0, "#bbb");
  barriers.polyline(svg, t, b_hat, "#ff7f0e");
  barriers.polyline(svg, t, b_true, "#2ca02c");
  barriers.legend(svg, 0, "B true", "#2ca02c");
  barriers.legend(svg, 1, "B estimate (max)", "#ff7f0e");

  Range source_range;
  source_range.add(0.0);
  source_range.add(1.0);
  Panel sources(kPanelWidth, kPanelHeight, "Control source (0 nominal, 1 backup)", "t [s]", time,
                source_range);
  sources.frame(svg);
  std::vector<double> st, sv;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0 && source[i] != source[i - 1]) {
      st.push_back(t[i]);
      sv.push_back(source[i - 1]);
    }
    st.push_back(t[i]);
    sv.push_back(source[i]);
  }
  sources.polyline(svg, st, sv, "#9467bd");

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace rbc::cli
