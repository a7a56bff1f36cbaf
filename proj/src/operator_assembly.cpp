#include "fracspec/operator_assembly.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace fracspec {

double Coefficients::ellipticity(int n) const {
  if (n == 1) return aij(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(aij);
  return es.eigenvalues().minCoeff();
}

double Coefficients::frobenius(int n) const {
  if (n == 1) return std::abs(aij(0, 0));
  return aij.norm();
}

double Coefficients::rho_min(const Domain& d) const {
  // affine in r over r in [0, diameter]
  return std::min(rho0, rho0 + rho1 * d.diameter());
}

double Coefficients::rho_max(const Domain& d) const {
  return std::max(rho0, rho0 + rho1 * d.diameter());
}

void Coefficients::validate(const Domain& d, double alpha) const {
  const int n = d.dimension;
  if (n == 2 && std::abs(aij(0, 1) - aij(1, 0)) > 1e-14 * aij.norm())
    throw std::invalid_argument("coefficients.aij: must be symmetric");
  if (!(ellipticity(n) > 0.0))
    throw std::invalid_argument("coefficients.aij: not elliptic (smallest eigenvalue <= 0)");
  // rho = 0 assembles fine but fails the accretivity estimate downstream;
  // only negative weights are rejected here
  if (rho_min(d) < 0.0)
    throw std::invalid_argument("coefficients.rho: must be nonnegative on the domain");
  // affine rho is Lipschitz with exponent 1; the standing assumption mu > alpha
  // then only excludes alpha >= 1, which the config validation already rejects
  (void)alpha;
}

OperatorMatrix assemble_elliptic(const Coefficients& coeffs, const Grid& grid) {
  const int n = grid.domain.dimension;
  coeffs.validate(grid.domain, 0.5);
  const int m = grid.n_dof();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);

  if (n == 1) {
    const double h = grid.spacing[0];
    const double a = coeffs.aij(0, 0);
    for (int i = 0; i < m; ++i) {
      A(i, i) = 2.0 * a / (h * h);
      if (i > 0) A(i, i - 1) = -a / (h * h);
      if (i + 1 < m) A(i, i + 1) = -a / (h * h);
    }
  } else {
    const double hx = grid.spacing[0], hy = grid.spacing[1];
    const double a11 = coeffs.aij(0, 0), a22 = coeffs.aij(1, 1), a12 = coeffs.aij(0, 1);
    const int nn = grid.nodes_per_axis();
    auto at = [&](int ix, int iy) -> int {
      return (ix >= 1 && ix <= nn && iy >= 1 && iy <= nn) ? grid.node_index(ix, iy) : -1;
    };
    for (int iy = 1; iy <= nn; ++iy)
      for (int ix = 1; ix <= nn; ++ix) {
        const int q = grid.node_index(ix, iy);
        A(q, q) = 2.0 * a11 / (hx * hx) + 2.0 * a22 / (hy * hy);
        const struct { int dx, dy; double v; } stencil[] = {
            {-1, 0, -a11 / (hx * hx)},
            {+1, 0, -a11 / (hx * hx)},
            {0, -1, -a22 / (hy * hy)},
            {0, +1, -a22 / (hy * hy)},
            // mixed term -2 a12 D_x D_y via centered cross differences
            {+1, +1, -a12 / (2.0 * hx * hy)},
            {-1, -1, -a12 / (2.0 * hx * hy)},
            {+1, -1, +a12 / (2.0 * hx * hy)},
            {-1, +1, +a12 / (2.0 * hx * hy)},
        };
        for (const auto& s : stencil) {
          const int j = at(ix + s.dx, iy + s.dy);
          if (j >= 0) A(q, j) += s.v;
        }
      }
  }
  return {std::move(A), grid.ip_weight(), MatrixLabel::Elliptic};
}

OperatorMatrix assemble_fractional(const Coefficients& coeffs, const FracConfig& cfg,
                                   const Grid& grid) {
  coeffs.validate(grid.domain, cfg.alpha);
  const int m = grid.n_dof();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  for (int q = 0; q < m; ++q) {
    const double w = coeffs.rho(grid.nodes[q].r);
    for (const WeightedNode& wn : fractional_node_functional(grid, cfg, q))
      A(q, wn.index) = w * wn.weight;
  }
  return {std::move(A), grid.ip_weight(), MatrixLabel::Fractional};
}

OperatorMatrix assemble_L(const Coefficients& coeffs, const FracConfig& cfg,
                          const Grid& grid) {
  OperatorMatrix ell = assemble_elliptic(coeffs, grid);
  OperatorMatrix frac = assemble_fractional(coeffs, cfg, grid);
  ell.entries += frac.entries;
  ell.label = MatrixLabel::L;
  return ell;
}

OperatorMatrix assemble_L_adjoint(const Coefficients& coeffs, const FracConfig& cfg,
                                  const Grid& grid) {
  OperatorMatrix out = assemble_elliptic(coeffs, grid);  // symmetric principal part
  const int m = grid.n_dof();
  // right-side derivative of rho*f: scale the ray samples by rho(t)
  for (int q = 0; q < m; ++q) {
    const RayCoords& rc = grid.nodes[q];
    const auto t = graded_partition_right(rc.r, rc.d - rc.r, cfg.cells_per_ray,
                                          cfg.grading_q);
    std::vector<double> scale(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) scale[k] = coeffs.rho(t[k]);
    for (const WeightedNode& wn :
         fractional_node_functional(grid, cfg, q, /*right_side=*/true, &scale))
      out.entries(q, wn.index) += wn.weight;
  }
  out.label = MatrixLabel::LAdjoint;
  return out;
}

Eigen::MatrixXd real_component(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXcd imaginary_component(const Eigen::MatrixXd& m) {
  const std::complex<double> half_over_i(0.0, -0.5);  // 1/(2i)
  return half_over_i * (m - m.transpose()).cast<std::complex<double>>();
}

double estimate_eta(const OperatorMatrix& fractional) {
  const Eigen::MatrixXd sym = real_component(fractional.entries);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw ComputationError("estimate_eta: symmetric eigensolver failed");
  const double lambda_min = es.eigenvalues().minCoeff();
  if (!(lambda_min > 0.0))
    throw ComputationError(
        "accretivity violated: the symmetric part of the fractional matrix has "
        "smallest eigenvalue " + std::to_string(lambda_min) +
        " <= 0; increase rho");
  return lambda_min;
}

OperatorConstants operator_constants(const Coefficients& coeffs, const FracConfig& cfg,
                                     const Grid& grid, const OperatorMatrix& fractional) {
  OperatorConstants c;
  const int n = grid.domain.dimension;
  c.ellipticity = coeffs.ellipticity(n);
  c.coeff_norm = coeffs.frobenius(n);
  c.rho_min = coeffs.rho_min(grid.domain);
  c.rho_max = coeffs.rho_max(grid.domain);
  c.diameter = grid.domain.diameter();
  c.grad_bound = fractional_gradient_bound(cfg.alpha, c.diameter, n);
  c.mixed_bound = c.rho_max * c.grad_bound;
  c.eta_inv_sq = estimate_eta(fractional);
  return c;
}

double norm_l2(const Eigen::VectorXd& f, const Grid& grid) {
  return std::sqrt(grid.ip_weight()) * f.norm();
}

double norm_h10(const Eigen::VectorXd& f, const Grid& grid) {
  // forward differences over all cells, zero extension at the boundary
  const double w = grid.ip_weight();
  double acc = 0.0;
  if (grid.domain.dimension == 1) {
    const double h = grid.spacing[0];
    const int m = grid.n_dof();
    for (int i = 0; i <= m; ++i) {
      const double left = (i == 0) ? 0.0 : f[i - 1];
      const double right = (i == m) ? 0.0 : f[i];
      const double d = (right - left) / h;
      acc += d * d;
    }
  } else {
    const double hx = grid.spacing[0], hy = grid.spacing[1];
    const int nn = grid.nodes_per_axis();
    auto val = [&](int ix, int iy) -> double {
      return (ix >= 1 && ix <= nn && iy >= 1 && iy <= nn) ? f[grid.node_index(ix, iy)]
                                                          : 0.0;
    };
    for (int iy = 1; iy <= nn; ++iy)
      for (int ix = 0; ix <= nn; ++ix) {
        const double d = (val(ix + 1, iy) - val(ix, iy)) / hx;
        acc += d * d;
      }
    for (int ix = 1; ix <= nn; ++ix)
      for (int iy = 0; iy <= nn; ++iy) {
        const double d = (val(ix, iy + 1) - val(ix, iy)) / hy;
        acc += d * d;
      }
  }
  return std::sqrt(w * acc);
}

}  // namespace fracspec
