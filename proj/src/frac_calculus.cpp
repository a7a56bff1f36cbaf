#include "fracspec/frac_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracspec {

namespace {

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

// Moments of the integrable kernel: Int_{u_lo}^{u_hi} u^(alpha-1+m) du.
double moment_int(double u_lo, double u_hi, double alpha, int m) {
  const double p = alpha + m;
  return (std::pow(u_hi, p) - std::pow(u_lo, p)) / p;
}

// Moments of the hypersingular kernel: Int_{u_lo}^{u_hi} u^(m-alpha-1) du.
// m = 0 requires u_lo > 0; m >= 1 is finite down to u_lo = 0.
double moment_der(double u_lo, double u_hi, double alpha, int m) {
  if (m == 0) return (std::pow(u_lo, -alpha) - std::pow(u_hi, -alpha)) / alpha;
  const double p = m - alpha;
  return (std::pow(u_hi, p) - std::pow(u_lo, p)) / p;
}

struct Cell {
  double lo, hi;     // t-range
  double f_lo, f_hi; // samples at the original (unclipped) cell ends
  double t_lo, t_hi; // original cell ends (slope reference)
};

// Cells of the sampled function clipped to [a, b].
std::vector<Cell> clipped_cells(const RayFunction& f, double a, double b) {
  std::vector<Cell> cells;
  const std::size_t n = f.t.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double lo = std::max(f.t[k], a);
    const double hi = std::min(f.t[k + 1], b);
    if (hi - lo <= 0.0) continue;
    cells.push_back({lo, hi, f.values[k], f.values[k + 1], f.t[k], f.t[k + 1]});
  }
  return cells;
}

}  // namespace

void FracConfig::validate() const {
  // Formulas degenerate at the order endpoints; reject outside (0.01, 0.99).
  if (!(alpha > 0.01 && alpha < 0.99))
    throw std::invalid_argument("alpha: must lie in (0.01, 0.99), got " +
                                std::to_string(alpha));
  if (dimension < 1)
    throw std::invalid_argument("dimension: must be >= 1");
  if (cells_per_ray < 8)
    throw std::invalid_argument("ray.M: need at least 8 cells per ray");
  if (!(grading_q >= 1.0))
    throw std::invalid_argument("ray.q: grading exponent must be >= 1");
  if (truncation_eps < 0.0)
    throw std::invalid_argument("truncation_eps: must be >= 0");
}

RayFunction::RayFunction(std::vector<double> abscissae, std::vector<double> vals)
    : t(std::move(abscissae)), values(std::move(vals)) {
  validate();
}

void RayFunction::validate() const {
  if (t.size() != values.size() || t.size() < 2)
    throw std::invalid_argument("RayFunction: need matching abscissae/values, >= 2 samples");
  for (std::size_t k = 0; k + 1 < t.size(); ++k)
    if (!(t[k + 1] > t[k]))
      throw std::invalid_argument("RayFunction: abscissae must be strictly increasing");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("RayFunction: non-finite sample");
}

double RayFunction::at(double x) const {
  if (x <= t.front()) return values.front();
  if (x >= t.back()) return values.back();
  const auto it = std::upper_bound(t.begin(), t.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
  const double w = (x - t[k]) / (t[k + 1] - t[k]);
  return values[k] + w * (values[k + 1] - values[k]);
}

double cn_alpha(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("cn_alpha: n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("cn_alpha: alpha must lie in (0, 1)");
  return std::tgamma(static_cast<double>(n)) / std::tgamma(n - alpha);
}

double frac_integral_left(const RayFunction& f, const FracConfig& cfg, double r) {
  cfg.validate();
  f.validate();
  if (!(r > 0.0)) throw std::invalid_argument("frac_integral_left: r must be positive");
  const double alpha = cfg.alpha;
  const int n = cfg.dimension;

  double total = 0.0;
  for (const Cell& c : clipped_cells(f, 0.0, r)) {
    const double slope = (c.f_hi - c.f_lo) / (c.t_hi - c.t_lo);
    // f(t) = p0 + p1*u in u = r - t
    const double p1 = -slope;
    const double p0 = c.f_lo + slope * (r - c.t_lo);
    const double u_lo = r - c.hi, u_hi = r - c.lo;
    // weight (t/r)^(n-1) = sum_j binom(n-1,j) (-u/r)^j
    for (int j = 0; j < n; ++j) {
      const double cj = binom(n - 1, j) * std::pow(-1.0 / r, j);
      total += cj * (p0 * moment_int(u_lo, u_hi, alpha, j) +
                     p1 * moment_int(u_lo, u_hi, alpha, j + 1));
    }
  }
  return total / std::tgamma(alpha);
}

double frac_integral_right(const RayFunction& f, const FracConfig& cfg, double r,
                           double d) {
  cfg.validate();
  f.validate();
  if (!(r >= 0.0 && r < d))
    throw std::invalid_argument("frac_integral_right: need 0 <= r < d");
  const double alpha = cfg.alpha;

  double total = 0.0;
  for (const Cell& c : clipped_cells(f, r, d)) {
    const double slope = (c.f_hi - c.f_lo) / (c.t_hi - c.t_lo);
    // f(t) = q0 + q1*u in u = t - r
    const double q1 = slope;
    const double q0 = c.f_lo + slope * (r - c.t_lo);
    const double u_lo = c.lo - r, u_hi = c.hi - r;
    total += q0 * moment_int(u_lo, u_hi, alpha, 0) +
             q1 * moment_int(u_lo, u_hi, alpha, 1);
  }
  return total / std::tgamma(alpha);
}

double marchaud_left_truncated(const RayFunction& f, const FracConfig& cfg, double r) {
  cfg.validate();
  f.validate();
  const double eps = cfg.truncation_eps;
  if (!(eps > 0.0))
    throw std::invalid_argument("marchaud_left_truncated: truncation_eps must be > 0");
  const double alpha = cfg.alpha;
  const int n = cfg.dimension;
  const double fQ = f.at(r);

  if (r < eps) return fQ / std::pow(eps, alpha);

  double total = 0.0;
  for (const Cell& c : clipped_cells(f, 0.0, r - eps)) {
    const double slope = (c.f_hi - c.f_lo) / (c.t_hi - c.t_lo);
    // f(t) = c0 + c1*u,  t^(n-1) = sum_i binom(n-1,i) r^(n-1-i) (-u)^i
    const double c1 = -slope;
    const double c0 = c.f_lo + slope * (r - c.t_lo);
    const double u_lo = r - c.hi, u_hi = r - c.lo;
    // numerator fQ r^(n-1) - f(t) t^(n-1) as a polynomial in u, degree n
    std::vector<double> coef(n + 1, 0.0);
    coef[0] += fQ * std::pow(r, n - 1);
    for (int i = 0; i < n; ++i) {
      const double base = binom(n - 1, i) * std::pow(r, n - 1 - i) * std::pow(-1.0, i);
      coef[i] -= c0 * base;
      coef[i + 1] -= c1 * base;
    }
    double cell = 0.0;
    for (int m = 0; m <= n; ++m)
      if (coef[m] != 0.0) cell += coef[m] * moment_der(u_lo, u_hi, alpha, m);
    total += cell * std::pow(r, 1 - n);
  }
  const double g1ma = std::tgamma(1.0 - alpha);
  return alpha / g1ma * total + fQ * std::pow(r, -alpha) / g1ma;
}

double marchaud_right_truncated(const RayFunction& f, const FracConfig& cfg, double r,
                                double d) {
  cfg.validate();
  f.validate();
  const double eps = cfg.truncation_eps;
  if (!(eps > 0.0))
    throw std::invalid_argument("marchaud_right_truncated: truncation_eps must be > 0");
  const double alpha = cfg.alpha;
  const double fQ = f.at(r);

  if (r > d - eps)
    return fQ / alpha * (std::pow(eps, -alpha) - std::pow(d - r, -alpha));

  double total = 0.0;
  for (const Cell& c : clipped_cells(f, r + eps, d)) {
    const double slope = (c.f_hi - c.f_lo) / (c.t_hi - c.t_lo);
    const double q1 = slope;
    const double q0 = c.f_lo + slope * (r - c.t_lo);
    const double u_lo = c.lo - r, u_hi = c.hi - r;
    // [fQ - f(t)] u^(-alpha-1) with f(t) = q0 + q1*u
    total += (fQ - q0) * moment_der(u_lo, u_hi, alpha, 0) -
             q1 * moment_der(u_lo, u_hi, alpha, 1);
  }
  const double g1ma = std::tgamma(1.0 - alpha);
  return alpha / g1ma * total + fQ * std::pow(d - r, -alpha) / g1ma;
}

double marchaud_left_limit(const RayFunction& f, const FracConfig& cfg, double r) {
  cfg.validate();
  f.validate();
  if (!(r > 0.0)) throw std::invalid_argument("marchaud_left_limit: r must be positive");
  const double alpha = cfg.alpha;
  const int n = cfg.dimension;
  const double fQ = f.at(r);

  const auto cells = clipped_cells(f, 0.0, r);
  if (cells.empty() || std::abs(cells.back().hi - r) > 1e-12 * std::max(1.0, r))
    throw std::invalid_argument("marchaud_left_limit: f must be sampled up to t = r");

  double total = 0.0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Cell& c = cells[k];
    const double slope = (c.f_hi - c.f_lo) / (c.t_hi - c.t_lo);
    const double u_lo = r - c.hi, u_hi = r - c.lo;
    // g(t) = fQ - f(t); values at the clipped ends
    const double g_lo = fQ - (c.f_lo + slope * (c.lo - c.t_lo));
    const double g_hi = fQ - (c.f_lo + slope * (c.hi - c.t_lo));
    if (k + 1 == cells.size()) {
      // final cell: g vanishes at u = 0 by construction, g_lin = a1*u
      const double a1 = g_lo / u_hi;
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        acc += binom(n - 1, j) * std::pow(-1.0 / r, j) * moment_der(0.0, u_hi, alpha, j + 1);
      total += a1 * acc;
    } else {
      const double du = u_hi - u_lo;
      const double a1 = (g_lo - g_hi) / du;  // g_lin = a0 + a1*u
      const double a0 = g_hi - a1 * u_lo;
      for (int j = 0; j < n; ++j) {
        const double cj = binom(n - 1, j) * std::pow(-1.0 / r, j);
        total += cj * (a0 * moment_der(u_lo, u_hi, alpha, j) +
                       a1 * moment_der(u_lo, u_hi, alpha, j + 1));
      }
    }
  }
  const double g1ma = std::tgamma(1.0 - alpha);
  return alpha / g1ma * total + cn_alpha(n, alpha) * fQ * std::pow(r, -alpha);
}

double marchaud_right_limit(const RayFunction& f, const FracConfig& cfg, double r,
                            double d) {
  cfg.validate();
  f.validate();
  if (!(r >= 0.0 && r < d))
    throw std::invalid_argument("marchaud_right_limit: need 0 <= r < d");
  const double alpha = cfg.alpha;
  const double fQ = f.at(r);

  const auto cells = clipped_cells(f, r, d);
  if (cells.empty() || std::abs(cells.front().lo - r) > 1e-12 * std::max(1.0, d))
    throw std::invalid_argument("marchaud_right_limit: f must be sampled from t = r");

  double total = 0.0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Cell& c = cells[k];
    const double slope = (c.f_hi - c.f_lo) / (c.t_hi - c.t_lo);
    const double u_lo = c.lo - r, u_hi = c.hi - r;
    const double g_lo = fQ - (c.f_lo + slope * (c.lo - c.t_lo));
    const double g_hi = fQ - (c.f_lo + slope * (c.hi - c.t_lo));
    if (k == 0) {
      // first cell: g vanishes at u = 0, g_lin = a1*u
      const double a1 = g_hi / u_hi;
      total += a1 * moment_der(0.0, u_hi, alpha, 1);
    } else {
      const double du = u_hi - u_lo;
      const double a1 = (g_hi - g_lo) / du;
      const double a0 = g_lo - a1 * u_lo;
      total += a0 * moment_der(u_lo, u_hi, alpha, 0) +
               a1 * moment_der(u_lo, u_hi, alpha, 1);
    }
  }
  const double g1ma = std::tgamma(1.0 - alpha);
  return alpha / g1ma * total + fQ * std::pow(d - r, -alpha) / g1ma;
}

std::vector<WeightedNode> grid_interpolation_weights(const Grid& grid,
                                                     const std::array<double, 2>& point) {
  std::vector<WeightedNode> out;
  const int nn = grid.nodes_per_axis();
  if (grid.domain.dimension == 1) {
    const double c = point[0] / grid.spacing[0];
    const int i0 = static_cast<int>(std::floor(c));
    const double fx = c - i0;
    if (i0 >= 1 && i0 <= nn && 1.0 - fx > 0.0)
      out.push_back({i0 - 1, 1.0 - fx});
    if (i0 + 1 >= 1 && i0 + 1 <= nn && fx > 0.0)
      out.push_back({i0, fx});
  } else {
    const double cx = point[0] / grid.spacing[0];
    const double cy = point[1] / grid.spacing[1];
    const int ix0 = static_cast<int>(std::floor(cx));
    const int iy0 = static_cast<int>(std::floor(cy));
    const double fx = cx - ix0, fy = cy - iy0;
    const double wx[2] = {1.0 - fx, fx};
    const double wy[2] = {1.0 - fy, fy};
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) {
        const int gx = ix0 + dx, gy = iy0 + dy;
        const double w = wx[dx] * wy[dy];
        if (w > 0.0 && gx >= 1 && gx <= nn && gy >= 1 && gy <= nn)
          out.push_back({grid.node_index(gx, gy), w});
      }
  }
  return out;
}

std::vector<WeightedNode> fractional_node_functional(const Grid& grid,
                                                     const FracConfig& cfg, int node,
                                                     bool right_side,
                                                     const std::vector<double>* ray_scale) {
  cfg.validate();
  if (node < 0 || node >= grid.n_dof())
    throw std::invalid_argument("fractional_node_functional: node index out of range");
  const RayCoords& rc = grid.nodes[node];
  if (!(rc.r > 0.0))
    throw std::invalid_argument("fractional_node_functional: node at zero radius");
  const double alpha = cfg.alpha;
  const int n = grid.domain.dimension;
  const int M = cfg.cells_per_ray;
  const double r = rc.r;
  const double pref = alpha / std::tgamma(1.0 - alpha);

  std::vector<double> row(grid.n_dof(), 0.0);
  double self = 0.0;  // coefficient of the node's own (possibly scaled) value

  // sample coefficients are expanded through the interpolation weights
  auto add_sample = [&](const std::array<double, 2>& pt, double scale, double coef) {
    if (coef == 0.0) return;
    for (const WeightedNode& wn : grid_interpolation_weights(grid, pt))
      row[wn.index] += coef * scale * wn.weight;
  };
  auto point_at = [&](double t) {
    return std::array<double, 2>{rc.point[0] - (r - t) * rc.e[0],
                                 rc.point[1] - (r - t) * rc.e[1]};
  };
  auto scale_at = [&](int k) { return ray_scale ? (*ray_scale)[k] : 1.0; };

  if (!right_side) {
    const auto t = graded_partition(r, M, cfg.grading_q);
    // cells below the final one: g(t) = gQ - s(t) linear in u = r - t
    for (int k = 0; k + 2 <= M; ++k) {
      const double u_hi = r - t[k], u_lo = r - t[k + 1];
      const double du = u_hi - u_lo;
      double A = 0.0, B = 0.0;
      for (int j = 0; j < n; ++j) {
        const double cj = binom(n - 1, j) * std::pow(-1.0 / r, j);
        const double Mj = moment_der(u_lo, u_hi, alpha, j);
        const double Mj1 = moment_der(u_lo, u_hi, alpha, j + 1);
        A += cj * Mj;
        B += cj * (Mj1 - u_lo * Mj);
      }
      // contribution = A*g_{k+1} + (B/du)*(g_k - g_{k+1})
      self += pref * A;
      add_sample(point_at(t[k + 1]), scale_at(k + 1), pref * (-A + B / du));
      add_sample(point_at(t[k]), scale_at(k), pref * (-B / du));
    }
    // final cell: g vanishes at t = r structurally; g_lin = (g_{M-1}/u_hi) u
    {
      const double u_hi = r - t[M - 1];
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        acc += binom(n - 1, j) * std::pow(-1.0 / r, j) * moment_der(0.0, u_hi, alpha, j + 1);
      const double w = pref * acc / u_hi;
      self += w;
      add_sample(point_at(t[M - 1]), scale_at(M - 1), -w);
    }
    self += cn_alpha(n, alpha) * std::pow(r, -alpha);
  } else {
    // right-side derivative on [r, d], no ray weight, kernel (t-r)^(-alpha-1)
    const double d = rc.d;
    const auto t = graded_partition_right(r, d - r, M, cfg.grading_q);
    // first cell: g vanishes at t = r structurally
    {
      const double u_hi = t[1] - r;
      const double w = pref * moment_der(0.0, u_hi, alpha, 1) / u_hi;
      self += w;
      add_sample(point_at(t[1]), scale_at(1), -w);
    }
    for (int k = 1; k + 1 <= M; ++k) {
      const double u_lo = t[k] - r, u_hi = t[k + 1] - r;
      const double du = u_hi - u_lo;
      const double M0 = moment_der(u_lo, u_hi, alpha, 0);
      const double M1 = moment_der(u_lo, u_hi, alpha, 1);
      // contribution = g_k*M0 + (g_{k+1} - g_k)*(M1 - u_lo*M0)/du
      const double C = (M1 - u_lo * M0) / du;
      self += pref * M0;
      add_sample(point_at(t[k]), scale_at(k), pref * (-M0 + C));
      add_sample(point_at(t[k + 1]), scale_at(k + 1), pref * (-C));
    }
    self += std::pow(d - r, -alpha) / std::tgamma(1.0 - alpha);
  }

  const double self_scale = ray_scale ? (right_side ? (*ray_scale)[0] : (*ray_scale)[M]) : 1.0;
  row[node] += self * self_scale;

  std::vector<WeightedNode> out;
  out.reserve(4 * static_cast<std::size_t>(M));
  for (int i = 0; i < grid.n_dof(); ++i)
    if (row[i] != 0.0) out.push_back({i, row[i]});
  return out;
}

GridFunction kipriyanov_apply(const GridFunction& f, const FracConfig& cfg,
                              const Grid& grid) {
  if (f.size() != grid.n_dof())
    throw std::invalid_argument("kipriyanov_apply: f size does not match grid");
  GridFunction out(grid.n_dof());
  for (int q = 0; q < grid.n_dof(); ++q) {
    double v = 0.0;
    for (const WeightedNode& wn : fractional_node_functional(grid, cfg, q))
      v += wn.weight * f[wn.index];
    out[q] = v;
  }
  return out;
}

double fractional_gradient_bound(double alpha, double delta, int n) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("fractional_gradient_bound: alpha must lie in (0, 1)");
  if (!(delta > 0.0))
    throw std::invalid_argument("fractional_gradient_bound: delta must be positive");
  return (alpha / std::tgamma(1.0 - alpha) + cn_alpha(n, alpha)) *
         std::pow(delta, 1.0 - alpha) / (1.0 - alpha);
}

}  // namespace fracspec
