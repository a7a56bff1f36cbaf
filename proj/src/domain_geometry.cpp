#include "fracspec/domain_geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fracspec {

namespace {

bool near(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(scale));
}

}  // namespace

Domain Domain::interval(double length, double pole_x) {
  Domain d;
  d.dimension = 1;
  d.shape = Shape::Interval;
  d.lengths = {length, 0.0};
  d.pole = {pole_x, 0.0};
  d.validate();
  return d;
}

Domain Domain::rectangle(double width, double height, std::array<double, 2> pole) {
  Domain d;
  d.dimension = 2;
  d.shape = Shape::Rectangle;
  d.lengths = {width, height};
  d.pole = pole;
  d.validate();
  return d;
}

double Domain::diameter() const {
  if (shape == Shape::Interval) return lengths[0];
  return std::hypot(lengths[0], lengths[1]);
}

double Domain::measure() const {
  if (shape == Shape::Interval) return lengths[0];
  return lengths[0] * lengths[1];
}

void Domain::validate() const {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("domain.dimension: must be 1 or 2");
  if (shape == Shape::Interval) {
    if (!(lengths[0] > 0.0))
      throw std::invalid_argument("domain.lengths: interval length must be positive");
    if (!near(pole[0], 0.0, lengths[0]) && !near(pole[0], lengths[0], lengths[0]))
      throw std::invalid_argument("domain.pole: must be an endpoint of the interval");
  } else {
    if (!(lengths[0] > 0.0) || !(lengths[1] > 0.0))
      throw std::invalid_argument("domain.lengths: rectangle extents must be positive");
    const bool on_x = near(pole[0], 0.0, lengths[0]) || near(pole[0], lengths[0], lengths[0]);
    const bool on_y = near(pole[1], 0.0, lengths[1]) || near(pole[1], lengths[1], lengths[1]);
    const bool in_x = pole[0] >= -1e-12 && pole[0] <= lengths[0] + 1e-12;
    const bool in_y = pole[1] >= -1e-12 && pole[1] <= lengths[1] + 1e-12;
    if (!(in_x && in_y) || !(on_x || on_y))
      throw std::invalid_argument("domain.pole: must lie on the rectangle boundary");
  }
}

double Grid::ip_weight() const {
  return domain.dimension == 1 ? spacing[0] : spacing[0] * spacing[1];
}

double exit_distance(const Domain& domain, const std::array<double, 2>& e) {
  const double norm = std::hypot(e[0], domain.dimension == 2 ? e[1] : 0.0);
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("exit_distance: direction must be a unit vector");

  // Slab intersection: smallest positive t where P + t*e crosses a face.
  double t_exit = std::numeric_limits<double>::infinity();
  for (int ax = 0; ax < domain.dimension; ++ax) {
    const double p = domain.pole[ax];
    const double len = domain.lengths[ax];
    const double dir = e[ax];
    if (dir > 0.0)
      t_exit = std::min(t_exit, (len - p) / dir);
    else if (dir < 0.0)
      t_exit = std::min(t_exit, -p / dir);
    // dir == 0: the ray runs parallel to this face pair
  }
  if (!(t_exit > 1e-14) || !std::isfinite(t_exit))
    throw std::invalid_argument("exit_distance: ray exits immediately at the pole");
  return t_exit;
}

Grid build_grid(const Domain& domain, int n_per_axis) {
  domain.validate();
  if (n_per_axis < 4)
    throw std::invalid_argument("grid.N: need at least 4 cells per axis, got " +
                                std::to_string(n_per_axis));

  Grid g;
  g.domain = domain;
  g.n_per_axis = n_per_axis;
  g.spacing = {domain.lengths[0] / n_per_axis,
               domain.dimension == 2 ? domain.lengths[1] / n_per_axis : 0.0};

  auto make_coords = [&](double x, double y) {
    RayCoords rc;
    rc.point = {x, y};
    const double dx = x - domain.pole[0];
    const double dy = domain.dimension == 2 ? y - domain.pole[1] : 0.0;
    rc.r = std::hypot(dx, dy);
    rc.e = {dx / rc.r, domain.dimension == 2 ? dy / rc.r : 0.0};
    rc.d = exit_distance(domain, rc.e);
    return rc;
  };

  if (domain.dimension == 1) {
    g.nodes.reserve(n_per_axis - 1);
    for (int i = 1; i < n_per_axis; ++i)
      g.nodes.push_back(make_coords(i * g.spacing[0], 0.0));
  } else {
    g.nodes.reserve(static_cast<std::size_t>(n_per_axis - 1) * (n_per_axis - 1));
    for (int iy = 1; iy < n_per_axis; ++iy)
      for (int ix = 1; ix < n_per_axis; ++ix)
        g.nodes.push_back(make_coords(ix * g.spacing[0], iy * g.spacing[1]));
  }
  return g;
}

std::vector<double> graded_partition(double r, int cells, double grading_q) {
  if (cells < 1) throw std::invalid_argument("graded_partition: cells must be >= 1");
  if (!(grading_q >= 1.0)) throw std::invalid_argument("graded_partition: q must be >= 1");
  std::vector<double> t(cells + 1);
  for (int k = 0; k <= cells; ++k) {
    const double s = 1.0 - static_cast<double>(k) / cells;
    t[k] = r * (1.0 - std::pow(s, grading_q));
  }
  t.front() = 0.0;
  t.back() = r;
  return t;
}

std::vector<double> graded_partition_right(double start, double len, int cells,
                                           double grading_q) {
  if (cells < 1) throw std::invalid_argument("graded_partition_right: cells must be >= 1");
  if (!(grading_q >= 1.0))
    throw std::invalid_argument("graded_partition_right: q must be >= 1");
  std::vector<double> t(cells + 1);
  for (int k = 0; k <= cells; ++k)
    t[k] = start + len * std::pow(static_cast<double>(k) / cells, grading_q);
  t.front() = start;
  t.back() = start + len;
  return t;
}

std::vector<double> ray_samples(const Grid& grid, int node, int cells, double grading_q) {
  if (node < 0 || node >= grid.n_dof())
    throw std::invalid_argument("ray_samples: node index out of range");
  return graded_partition(grid.nodes[node].r, cells, grading_q);
}

}  // namespace fracspec
