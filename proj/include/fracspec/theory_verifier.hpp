#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "fracspec/spectral_engine.hpp"

namespace fracspec {

using json = nlohmann::ordered_json;

// Sector of the numerical range as a function of the free parameter eps:
//   b(eps)    = a * (I/2 * eps + A)^{-1}
//   gamma(eps)= eta^{-2} - I/2 * b(eps) / eps          (vertex)
//   theta(eps)= arctan(1 / b(eps))                     (semi-angle)
//   xi        = sqrt((A/I)^2 + a eta^2) - A/I          (root of gamma)
//   theta0    = theta(xi)                              (semi-angle at gamma = 0)
// with a = ellipticity, A = coeff_norm, I = mixed_bound, eta from base.
struct SectorParams {
  OperatorConstants base;
  double epsilon = 0.0;
  double b = 0.0;
  double gamma = 0.0;
  double theta = 0.0;
  double xi = 0.0;
  double theta0 = 0.0;
};

// Comparison-operator eigenvalues at one index: Y_k = -mu_k Lap + sigma_k
// with mu_0 = a, sigma_0 = eta^{-2}, mu_1 = A + I/2, sigma_1 = I/2.
// Both the analytic Dirichlet spectrum of the domain and the closed-form
// spectrum of the discretized Laplacian are carried: the first feeds the
// Weyl-asymptotics checks, the second gives index-wise matrix bounds.
struct WeylBounds {
  int index = 0;
  double laplace_analytic = 0.0;
  double laplace_discrete = 0.0;
  double y0_analytic = 0.0, y1_analytic = 0.0;
  double y0_discrete = 0.0, y1_discrete = 0.0;
  double e0 = 0.0, e1 = 0.0;  // Weyl leading coefficients of Y_0, Y_1
};

// One verified claim. verdict is "pass", "fail" or "not-applicable".
struct ClaimRecord {
  std::string id;
  std::string anchor;
  json measured = json::object();
  json bound = json::object();
  double tolerance = 0.0;
  std::string verdict = "pass";
  std::string reason;
  std::vector<int> grids;

  bool passed() const { return verdict == "pass"; }
  bool failed() const { return verdict == "fail"; }
};

SectorParams sector_params(const OperatorConstants& base, double eps);

// Ascending analytic Dirichlet Laplacian eigenvalues of the domain.
Eigen::VectorXd dirichlet_laplace_spectrum(const Domain& domain, int count);
// Ascending closed-form spectrum of the discretized Dirichlet Laplacian.
Eigen::VectorXd dirichlet_laplace_spectrum_fd(const Grid& grid);
// Weyl leading coefficient 4 pi mu [Gamma(n/2+1)/mes]^(2/n).
double weyl_leading_coefficient(double mu, const Domain& domain);

WeylBounds weyl_bounds(int index, const OperatorConstants& base, const Grid& grid);

// Semi-angle estimate of the numerical range about the origin: maximum
// |arg| over the sampled boundary and over the eigenvalues (eigenvalues are
// Rayleigh quotients of their eigenvectors, so they lie in the range).
double measured_semi_angle(const FovBoundary& fov, const SpectrumResult& eigs);

// --- claim evaluators -------------------------------------------------

ClaimRecord check_sector_enclosure(const std::string& id, const FovBoundary& fov,
                                   const SpectrumResult& eigs, const SectorParams& params,
                                   double margin);

// Sweep variant: enclosure must hold for each eps in the list.
ClaimRecord check_sector_enclosure_sweep(const std::string& id, const FovBoundary& fov,
                                         const SpectrumResult& eigs,
                                         const OperatorConstants& base,
                                         const std::vector<double>& eps_list,
                                         double margin);

ClaimRecord check_sector_formula_consistency(const OperatorConstants& base,
                                             std::uint64_t seed, int fuzz_cases);

ClaimRecord subordination_check(const Eigen::MatrixXd& l_h, const Eigen::MatrixXd& h_h,
                                double ip_weight, double semi_angle, int samples,
                                std::uint64_t seed);

ClaimRecord accretivity_check(const Eigen::MatrixXd& l_h, const Grid& grid,
                              const OperatorConstants& constants, int samples,
                              std::uint64_t seed);

ClaimRecord check_fractional_gradient_bound(const Grid& grid, const FracConfig& cfg,
                                            int samples, std::uint64_t seed);

ClaimRecord check_inversion_identity(const FracConfig& cfg, double ray_length);

ClaimRecord check_truncation_convergence(const Grid& grid, const FracConfig& cfg);

ClaimRecord check_spectral_sandwich(const SpectrumResult& h_spectrum,
                                    const OperatorConstants& base, const Grid& grid,
                                    double band);

ClaimRecord check_weyl_asymptotics(const OperatorConstants& base, const Grid& grid);

// Decay of the eigenvalues of the real part of the resolvent: slope of
// lambda_i(V) over [5, n_dof/4] against -2/n.
ClaimRecord check_resolvent_real_eig_decay(const Eigen::VectorXd& v_descending, int n,
                                           double slope_tol);

ClaimRecord check_resolvent_bound_constant(const Eigen::MatrixXd& resolvent,
                                           const Eigen::VectorXd& v_descending);

ClaimRecord check_snumber_decay(const SNumberSequence& s, int n, double slope_tol);

// Membership classification for one exponent p; gates only where the
// sufficient or the necessary condition decides the answer.
ClaimRecord schatten_classify(const SNumberSequence& s, double p, int n);

ClaimRecord completeness_condition(const SectorParams& params, const FovBoundary& fov_r,
                                   const SpectrumResult& eigs_r, int n, double margin);

struct SumBoundSeries {
  std::vector<double> partial_lhs;      // sum |lambda_m(R)|^p, descending modulus
  std::vector<double> partial_rhs_fov;  // sec^p(theta_m) * sum s_m(V)^p
  std::vector<double> partial_rhs_weyl; // sec^p(theta_m) |S^-1| sum y0_m^{-p}
};

ClaimRecord eigenvalue_sum_bound(const SpectrumResult& eigs_r,
                                 const Eigen::VectorXd& v_descending,
                                 const SectorFactorization& factor,
                                 const SectorParams& params, double theta_measured,
                                 double p, const Eigen::VectorXd& y0_discrete,
                                 SumBoundSeries* series = nullptr);

ClaimRecord check_eigenvalue_tail_decay(const SpectrumResult& eigs_r, int n);

}  // namespace fracspec
