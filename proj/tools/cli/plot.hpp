#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rbc/simulator.hpp"

namespace rbc::cli {

/// Number of support directions used to trace the hull of the ellipsoids.
inline constexpr int kHullSamples = 720;

/// Boundary of the convex hull of the ellipses x^T Q_j^{-1} x <= 1 projected
/// on (x1, x2): for each of `samples` normals d the support point
/// Q_j d / sqrt(d^T Q_j d) of the member with the largest support.
std::vector<Eigen::Vector2d> hull_boundary(const std::vector<Matrix>& q_list,
                                           int samples = kHullSamples);

/// Self-contained SVG with four panels: phase portrait (with the hull and
/// ellipses when `q_list` is given), y and u over time, true barrier against
/// its estimate, and the active control source. Throws rbc::Error for an
/// empty trace.
std::string render_plot(const SimulationTrace& trace,
                        const std::optional<std::vector<Matrix>>& q_list = std::nullopt);

}  // namespace rbc::cli
