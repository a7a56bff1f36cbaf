#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <vector>

#include "fracspec/operator_assembly.hpp"

namespace fracspec {

// Ordered eigenvalues with algebraic multiplicities. Symmetric input:
// real eigenvalues ascending. General input: ascending modulus. nu is the
// total multiplicity count (= dimension), multiplicities cluster distinct
// eigenvalues at relative tolerance 1e-8.
struct SpectrumResult {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd eigenvectors;   // columns follow the eigenvalue order
  std::vector<std::complex<double>> distinct;
  std::vector<int> multiplicities;
  int nu = 0;
  double residual_max = 0.0;       // max_i |M v_i - lambda_i v_i| / |M|
};

struct SNumberSequence {
  Eigen::VectorXd values;  // descending, nonnegative
  std::string source;
};

// L = H^{1/2}(I + iB)H^{1/2} with Hermitian B. For the real matrices used
// here B = -i * Br with Br real skew-symmetric, S = I + B^2 = I - Br^2.
struct SectorFactorization {
  Eigen::MatrixXd h_half;       // symmetric positive root of H
  Eigen::MatrixXd h_half_inv;
  Eigen::MatrixXd br;           // real skew part conjugated by H^{-1/2}
  Eigen::MatrixXcd b;           // Hermitian: -i * br
  Eigen::MatrixXd s;            // I - br^2, symmetric, >= I
  double b_norm = 0.0;          // |B| spectral
  double s_inv_norm = 0.0;      // |S^{-1}|
  double resid_factorization = 0.0;  // |H^{1/2}(I+iB)H^{1/2} - L| / |L|
};

struct FovPoint {
  double phi;
  double support;                // max Re(e^{i phi} z) over the numerical range
  std::complex<double> z;        // Rayleigh quotient of the extremal vector
};

struct FovBoundary {
  std::vector<FovPoint> points;
  double max_abs_arg() const;    // semi-angle of the sampled boundary about 0
  double max_abs_arg_shifted(double vertex) const;
};

struct DecayFit {
  double slope = 0.0;
  double std_error = 0.0;
};

SpectrumResult eig_sym(const Eigen::MatrixXd& m);
SpectrumResult eig_general(const Eigen::MatrixXd& m);

// Builds a SpectrumResult from externally obtained eigenpairs (already
// sorted), with residuals measured against m and clustered multiplicities.
SpectrumResult make_spectrum_result(const Eigen::VectorXcd& eigenvalues,
                                    const Eigen::MatrixXcd& eigenvectors,
                                    const Eigen::MatrixXcd& m);

// Descending singular values, computed as square roots of the eigenvalues
// of M^T M (the s-number construction through the modulus operator).
SNumberSequence singular_values(const Eigen::MatrixXd& m, std::string source = {});

// Dense inverse by LU with partial pivoting; the reconstruction residual
// |M R - I|_F is written to *residual when given. Throws ComputationError
// for singular-to-tolerance input.
Eigen::MatrixXd resolvent_at_zero(const Eigen::MatrixXd& m, double* residual = nullptr);

// Support-function construction of the numerical-range boundary: for each
// angle, the top eigenpair of (e^{i phi} M + e^{-i phi} M^*)/2 yields the
// support value and a boundary point z = (Mv, v)/(v, v).
FovBoundary field_of_values(const Eigen::MatrixXd& m, int n_angles);

// Largest eigenvalue / eigenvector of a complex Hermitian matrix.
// Lanczos with full reorthogonalization, certified by the residual, with a
// dense-solver fallback. Deterministic.
std::pair<double, Eigen::VectorXcd> hermitian_top_eigenpair(const Eigen::MatrixXcd& h);

SectorFactorization factorize_sector(const Eigen::MatrixXd& l_h, const Eigen::MatrixXd& h_h);

// Sharp semi-angle of the numerical range of M about the origin:
// arctan of the largest generalized eigenvalue of the pencil formed by the
// imaginary and real parts, computed through a Cholesky factor of the real
// part (independent of the H^{1/2} route used by factorize_sector).
double numerical_range_semi_angle(const Eigen::MatrixXd& m);

// Real part of the resolvent predicted by the factorization:
// H^{-1/2} S^{-1} H^{-1/2}.
Eigen::MatrixXd resolvent_real_part_from_factorization(const SectorFactorization& f);

// Least-squares slope of log(seq_i) against log(i) over the 1-based index
// window [i_min, i_max], with the standard error of the slope.
DecayFit decay_exponent(const Eigen::VectorXd& seq, int i_min, int i_max);

}  // namespace fracspec
