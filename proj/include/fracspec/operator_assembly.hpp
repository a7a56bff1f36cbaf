#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

#include "fracspec/domain_geometry.hpp"
#include "fracspec/frac_calculus.hpp"

namespace fracspec {

// Raised when a computation cannot proceed (as opposed to invalid input):
// accretivity violated, singular matrix, eigensolver failure.
struct ComputationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coefficients of the differential operator: constant symmetric principal
// part a^{ij} and a scalar weight rho(Q) = rho0 + rho1 * r affine in the
// ray radius.
struct Coefficients {
  Eigen::Matrix2d aij = Eigen::Matrix2d::Identity();
  double rho0 = 1.0;
  double rho1 = 0.0;

  double ellipticity(int n) const;          // a: smallest eigenvalue of a^{ij}
  double frobenius(int n) const;            // script-A: (sum a_ij^2)^{1/2}
  double rho(double r) const { return rho0 + rho1 * r; }
  double rho_min(const Domain& d) const;    // inf over the domain
  double rho_max(const Domain& d) const;    // sup over the domain
  void validate(const Domain& d, double alpha) const;
};

enum class MatrixLabel { Elliptic, Fractional, L, LAdjoint, H, Mass };

// Dense square matrix of a discretized operator. The discrete inner
// product is (f,g)_h = ip_weight * sum_i f_i conj(g_i); the weight is a
// scalar multiple of the identity, so the adjoint is the plain transpose.
struct OperatorMatrix {
  Eigen::MatrixXd entries;
  double ip_weight = 1.0;
  MatrixLabel label = MatrixLabel::L;
};

// Scalar constants of the operator on a given grid; the accretivity
// constant eta^{-2} is measured from the assembled fractional matrix.
struct OperatorConstants {
  double ellipticity = 0.0;   // a
  double coeff_norm = 0.0;    // sup Frobenius norm of a^{ij}
  double rho_min = 0.0;
  double rho_max = 0.0;
  double diameter = 0.0;
  double grad_bound = 0.0;    // K: |D^alpha f| <= K |f|_{H^1_0}
  double mixed_bound = 0.0;   // I = rho_max * K
  double eta_inv_sq = 0.0;    // measured sharp constant of Re(rho D^alpha f, f) >= eta^{-2}|f|^2
};

// Second-order central finite differences for -D_j(a^{ij} D_i f) with
// homogeneous Dirichlet boundary. Symmetric positive definite.
OperatorMatrix assemble_elliptic(const Coefficients& coeffs, const Grid& grid);

// Dense nonsymmetric matrix whose row q is f -> rho(Q_q) (D^alpha f)(Q_q).
OperatorMatrix assemble_fractional(const Coefficients& coeffs, const FracConfig& cfg,
                                   const Grid& grid);

OperatorMatrix assemble_L(const Coefficients& coeffs, const FracConfig& cfg,
                          const Grid& grid);

// Formal adjoint: same elliptic part plus the right-side derivative of rho*f.
OperatorMatrix assemble_L_adjoint(const Coefficients& coeffs, const FracConfig& cfg,
                                  const Grid& grid);

// (M + M^T)/2 — real matrices, adjoint = transpose in the weighted product.
Eigen::MatrixXd real_component(const Eigen::MatrixXd& m);
// (M - M^*)/2i, Hermitian with purely imaginary entries for real M.
Eigen::MatrixXcd imaginary_component(const Eigen::MatrixXd& m);

// eta^{-2} as the smallest eigenvalue of the symmetric part of the
// fractional matrix. Throws ComputationError("accretivity violated ...")
// when the value is <= 0 (rho too small for the standing assumption).
double estimate_eta(const OperatorMatrix& fractional);

OperatorConstants operator_constants(const Coefficients& coeffs, const FracConfig& cfg,
                                     const Grid& grid, const OperatorMatrix& fractional);

// Discrete norms in the weighted inner product.
double norm_l2(const Eigen::VectorXd& f, const Grid& grid);
double norm_h10(const Eigen::VectorXd& f, const Grid& grid);  // forward-difference gradient norm

}  // namespace fracspec
