#pragma once

#include <array>
#include <vector>

namespace fracspec {

enum class Shape { Interval, Rectangle };

// Convex computational domain with a distinguished boundary pole P. Every
// interior point Q is addressed by ray coordinates (r, e): r = |Q - P|,
// e the unit direction from P to Q, and d(e) the distance at which the
// ray leaves the domain.
struct Domain {
  int dimension = 1;
  Shape shape = Shape::Interval;
  std::array<double, 2> lengths{1.0, 0.0};  // interval: {d, unused}; rectangle: {w, h}
  std::array<double, 2> pole{0.0, 0.0};

  static Domain interval(double length, double pole_x = 0.0);
  static Domain rectangle(double width, double height,
                          std::array<double, 2> pole = {0.0, 0.0});

  double diameter() const;
  double measure() const;  // length resp. area of the domain
  void validate() const;   // throws std::invalid_argument on bad extents / pole off the boundary
};

struct RayCoords {
  std::array<double, 2> point{0.0, 0.0};
  double r = 0.0;                   // |Q - P|
  std::array<double, 2> e{1.0, 0.0};
  double d = 0.0;                   // exit distance d(e)
};

// Uniform Cartesian grid of interior nodes (homogeneous Dirichlet boundary,
// zero extension outside the closure). Node ordering is lexicographic:
// x index fastest, then y. 1D: (N-1) nodes, 2D: (N-1)^2.
struct Grid {
  Domain domain;
  int n_per_axis = 0;
  std::array<double, 2> spacing{0.0, 0.0};
  std::vector<RayCoords> nodes;

  int n_dof() const { return static_cast<int>(nodes.size()); }
  int nodes_per_axis() const { return n_per_axis - 1; }
  // 2D helper, 1-based axis indices ix, iy in [1, N-1]
  int node_index(int ix, int iy) const { return (iy - 1) * (n_per_axis - 1) + (ix - 1); }
  double ip_weight() const;  // h^n weight of the discrete inner product
};

// Exit distance of the ray P + t*e from the domain. Throws if the ray
// leaves immediately (e points outward at P).
double exit_distance(const Domain& domain, const std::array<double, 2>& e);

// Builds the interior grid with precomputed ray coordinates. N >= 4.
Grid build_grid(const Domain& domain, int n_per_axis);

// Graded partition of [0, r] with `cells` cells, clustered at t = r:
// t_k = r * (1 - (1 - k/M)^q). q = 1 gives the uniform partition.
std::vector<double> graded_partition(double r, int cells, double grading_q);

// Graded partition of [start, start + len] clustered at t = start.
std::vector<double> graded_partition_right(double start, double len, int cells,
                                           double grading_q);

// Quadrature abscissae on the segment [P, Q] for a grid node.
std::vector<double> ray_samples(const Grid& grid, int node, int cells, double grading_q);

}  // namespace fracspec
