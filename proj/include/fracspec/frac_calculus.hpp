#pragma once

#include <Eigen/Core>
#include <vector>

#include "fracspec/domain_geometry.hpp"

namespace fracspec {

// Quadrature configuration for the directional fractional operators.
// alpha is the differentiation order, dimension enters through the ray
// weight (t/r)^(n-1) of the left-side operators, grading_q and
// cells_per_ray control the graded quadrature partition, truncation_eps
// selects the truncated derivative (0 = full limit derivative).
struct FracConfig {
  double alpha = 0.5;
  int dimension = 1;
  double grading_q = 2.0;
  int cells_per_ray = 64;
  double truncation_eps = 0.0;

  void validate() const;  // throws std::invalid_argument
};

// Scalar function sampled along a ray at ascending abscissae, interpreted
// piecewise-linearly between samples. This is the reconstruction space of
// every product-integration rule below.
struct RayFunction {
  std::vector<double> t;
  std::vector<double> values;

  RayFunction() = default;
  RayFunction(std::vector<double> abscissae, std::vector<double> vals);

  double at(double x) const;  // piecewise-linear evaluation (clamped to the range)
  void validate() const;      // monotone abscissae, finite values
};

using GridFunction = Eigen::VectorXd;

// C_n over alpha: (n-1)! / Gamma(n - alpha).
double cn_alpha(int n, double alpha);

// Left-side directional fractional integral at radius r:
//   (1/Gamma(alpha)) * Int_0^r f(t) (r-t)^(alpha-1) (t/r)^(n-1) dt.
// Piecewise-linear reconstruction of f, analytic moments of the weight.
double frac_integral_left(const RayFunction& f, const FracConfig& cfg, double r);

// Right-side directional fractional integral (no ray weight):
//   (1/Gamma(alpha)) * Int_r^d f(t) (t-r)^(alpha-1) dt.
double frac_integral_right(const RayFunction& f, const FracConfig& cfg, double r,
                           double d);

// Truncated left-side directional fractional derivative. For r >= eps:
//   alpha/Gamma(1-alpha) * Int_0^{r-eps} [f(r) r^(n-1) - f(t) t^(n-1)]
//       (r-t)^(-alpha-1) r^(1-n) dt  +  f(r) r^(-alpha) / Gamma(1-alpha),
// and f(r)/eps^alpha for 0 <= r < eps. Requires cfg.truncation_eps > 0.
double marchaud_left_truncated(const RayFunction& f, const FracConfig& cfg, double r);

// Truncated right-side directional fractional derivative. For r <= d - eps:
//   alpha/Gamma(1-alpha) * Int_{r+eps}^d [f(r) - f(t)] (t-r)^(-alpha-1) dt
//       + f(r) (d-r)^(-alpha) / Gamma(1-alpha),
// and (f(r)/alpha) (eps^-alpha - (d-r)^-alpha) for d - eps < r <= d.
double marchaud_right_truncated(const RayFunction& f, const FracConfig& cfg, double r,
                                double d);

// Limit (eps -> 0) left-side derivative of a ray function at r, via
// singularity-absorbing product integration: the difference f(r) - f(t)
// vanishes linearly at t = r in the reconstruction, so every cell moment
// is finite. Used by kipriyanov_apply and directly in tests.
double marchaud_left_limit(const RayFunction& f, const FracConfig& cfg, double r);

// Limit right-side derivative of a ray function at r (segment [r, d]).
double marchaud_right_limit(const RayFunction& f, const FracConfig& cfg, double r,
                            double d);

// One term of the discrete linear functional representing a directional
// fractional derivative at a grid node.
struct WeightedNode {
  int index;       // grid node index
  double weight;
};

// The limit derivative at grid node `node` as a linear functional on grid
// values: value = sum_k weight_k * f[index_k]. The ray samples come from
// linear (1D) / bilinear (2D) interpolation of the grid with zero extension.
// `right_side` selects the right-side derivative on [r, d(e)]; `ray_scale`
// multiplies every ray sample (used for the composition t -> rho(t) f(t)).
std::vector<WeightedNode> fractional_node_functional(
    const Grid& grid, const FracConfig& cfg, int node, bool right_side = false,
    const std::vector<double>* ray_scale = nullptr);

// Applies the full fractional differential operator to a grid function:
// for every node Q, the limit derivative along the ray [P, Q] plus the
// C_n f(Q) r^(-alpha) term.
GridFunction kipriyanov_apply(const GridFunction& f, const FracConfig& cfg,
                              const Grid& grid);

// The H^1_0 -> L_2 bound of the fractional derivative:
//   K = [alpha/Gamma(1-alpha) + C_n(alpha)] * delta^(1-alpha) / (1-alpha).
double fractional_gradient_bound(double alpha, double delta, int n);

// Interpolation weights of the grid at an arbitrary point of the closed
// domain (zero extension: boundary and exterior contribute nothing).
std::vector<WeightedNode> grid_interpolation_weights(const Grid& grid,
                                                     const std::array<double, 2>& point);

}  // namespace fracspec
