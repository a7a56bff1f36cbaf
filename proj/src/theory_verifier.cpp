#include "fracspec/theory_verifier.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracspec/rng.hpp"

namespace fracspec {

namespace {

constexpr double kPi = std::numbers::pi;

double sec(double theta) { return 1.0 / std::cos(theta); }

json complex_json(std::complex<double> z) {
  return json{{"re", z.real()}, {"im", z.imag()}};
}

Eigen::VectorXd descending_moduli(const SpectrumResult& s) {
  const int n = static_cast<int>(s.eigenvalues.size());
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = std::abs(s.eigenvalues[n - 1 - i]);
  return out;
}

}  // namespace

SectorParams sector_params(const OperatorConstants& base, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("sector_params: eps must be positive");
  if (!(base.ellipticity > 0.0 && base.coeff_norm > 0.0 && base.mixed_bound > 0.0 &&
        base.eta_inv_sq > 0.0))
    throw std::invalid_argument("sector_params: base constants must be positive");
  SectorParams p;
  p.base = base;
  p.epsilon = eps;
  const double a = base.ellipticity, A = base.coeff_norm, I = base.mixed_bound;
  const double eta_sq = 1.0 / base.eta_inv_sq;
  p.b = a / (0.5 * I * eps + A);
  p.gamma = base.eta_inv_sq - 0.5 * I * p.b / eps;
  p.theta = std::atan(1.0 / p.b);
  // rationalized root of gamma: sqrt((A/I)^2 + a eta^2) - A/I without the
  // cancellation at large A/I
  p.xi = a * eta_sq / (std::sqrt((A / I) * (A / I) + a * eta_sq) + A / I);
  p.theta0 = std::atan(std::sqrt((A / (2.0 * a)) * (A / (2.0 * a)) +
                                 I * I * eta_sq / (4.0 * a)) +
                       A / (2.0 * a));
  return p;
}

Eigen::VectorXd dirichlet_laplace_spectrum(const Domain& domain, int count) {
  if (count < 1) throw std::invalid_argument("dirichlet_laplace_spectrum: count >= 1");
  std::vector<double> vals;
  if (domain.dimension == 1) {
    const double d = domain.lengths[0];
    vals.reserve(count);
    for (int i = 1; i <= count; ++i) vals.push_back((i * kPi / d) * (i * kPi / d));
  } else {
    const double w = domain.lengths[0], h = domain.lengths[1];
    double cap = 4.0 * kPi * (count + 16) / domain.measure() * 4.0 + 64.0;
    for (;;) {
      vals.clear();
      const int jmax = static_cast<int>(std::ceil(std::sqrt(cap) * w / kPi)) + 1;
      const int kmax = static_cast<int>(std::ceil(std::sqrt(cap) * h / kPi)) + 1;
      for (int j = 1; j <= jmax; ++j)
        for (int k = 1; k <= kmax; ++k) {
          const double lam = kPi * kPi * (j * j / (w * w) + k * k / (h * h));
          if (lam <= cap) vals.push_back(lam);
        }
      if (static_cast<int>(vals.size()) >= count) break;
      cap *= 2.0;
    }
    std::sort(vals.begin(), vals.end());
    vals.resize(count);
  }
  return Eigen::Map<Eigen::VectorXd>(vals.data(), count);
}

Eigen::VectorXd dirichlet_laplace_spectrum_fd(const Grid& grid) {
  const int N = grid.n_per_axis;
  std::vector<double> vals;
  if (grid.domain.dimension == 1) {
    const double h = grid.spacing[0];
    for (int i = 1; i < N; ++i) {
      const double s = std::sin(i * kPi / (2.0 * N));
      vals.push_back(4.0 / (h * h) * s * s);
    }
  } else {
    const double hx = grid.spacing[0], hy = grid.spacing[1];
    std::vector<double> lx(N - 1), ly(N - 1);
    for (int i = 1; i < N; ++i) {
      const double s = std::sin(i * kPi / (2.0 * N));
      lx[i - 1] = 4.0 / (hx * hx) * s * s;
      ly[i - 1] = 4.0 / (hy * hy) * s * s;
    }
    for (double a : lx)
      for (double b : ly) vals.push_back(a + b);
    std::sort(vals.begin(), vals.end());
  }
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<int>(vals.size()));
}

double weyl_leading_coefficient(double mu, const Domain& domain) {
  const double n = domain.dimension;
  return 4.0 * kPi * mu *
         std::pow(std::tgamma(n / 2.0 + 1.0) / domain.measure(), 2.0 / n);
}

WeylBounds weyl_bounds(int index, const OperatorConstants& base, const Grid& grid) {
  if (index < 1 || index > grid.n_dof())
    throw std::invalid_argument("weyl_bounds: index out of range");
  WeylBounds wb;
  wb.index = index;
  wb.laplace_analytic = dirichlet_laplace_spectrum(grid.domain, index)[index - 1];
  wb.laplace_discrete = dirichlet_laplace_spectrum_fd(grid)[index - 1];
  const double mu0 = base.ellipticity, sig0 = base.eta_inv_sq;
  const double mu1 = base.coeff_norm + 0.5 * base.mixed_bound;
  const double sig1 = 0.5 * base.mixed_bound;
  wb.y0_analytic = mu0 * wb.laplace_analytic + sig0;
  wb.y1_analytic = mu1 * wb.laplace_analytic + sig1;
  wb.y0_discrete = mu0 * wb.laplace_discrete + sig0;
  wb.y1_discrete = mu1 * wb.laplace_discrete + sig1;
  wb.e0 = weyl_leading_coefficient(mu0, grid.domain);
  wb.e1 = weyl_leading_coefficient(mu1, grid.domain);
  return wb;
}

double measured_semi_angle(const FovBoundary& fov, const SpectrumResult& eigs) {
  double worst = fov.max_abs_arg();
  for (int i = 0; i < eigs.eigenvalues.size(); ++i)
    worst = std::max(worst, std::abs(std::arg(eigs.eigenvalues[i])));
  return worst;
}

ClaimRecord check_sector_enclosure(const std::string& id, const FovBoundary& fov,
                                   const SpectrumResult& eigs, const SectorParams& params,
                                   double margin) {
  ClaimRecord c;
  c.id = id;
  c.anchor = "numerical range and spectrum inside the sector with vertex gamma, "
             "semi-angle theta";
  double worst_needed = -kPi;
  std::complex<double> offender(0.0, 0.0);
  int violations = 0;
  auto visit = [&](std::complex<double> z) {
    const double needed = std::abs(std::arg(z - params.gamma)) - params.theta;
    if (needed > worst_needed) {
      worst_needed = needed;
      offender = z;
    }
    if (needed > margin) ++violations;
  };
  for (const FovPoint& p : fov.points) visit(p.z);
  for (int i = 0; i < eigs.eigenvalues.size(); ++i) visit(eigs.eigenvalues[i]);
  c.measured = {{"gamma", params.gamma},
                {"theta", params.theta},
                {"epsilon", params.epsilon},
                {"margin_needed", worst_needed},
                {"violations", violations},
                {"worst_offender", complex_json(offender)}};
  c.bound = {{"margin", margin}};
  c.tolerance = margin;
  c.verdict = violations == 0 ? "pass" : "fail";
  return c;
}

ClaimRecord check_sector_enclosure_sweep(const std::string& id, const FovBoundary& fov,
                                         const SpectrumResult& eigs,
                                         const OperatorConstants& base,
                                         const std::vector<double>& eps_list,
                                         double margin) {
  ClaimRecord c;
  c.id = id;
  c.anchor = "sector enclosure across the one-parameter family of sectors";
  json items = json::array();
  bool all_pass = true;
  for (double eps : eps_list) {
    ClaimRecord sub = check_sector_enclosure(id, fov, eigs, sector_params(base, eps), margin);
    items.push_back({{"epsilon", eps},
                     {"gamma", sub.measured["gamma"]},
                     {"theta", sub.measured["theta"]},
                     {"margin_needed", sub.measured["margin_needed"]},
                     {"violations", sub.measured["violations"]}});
    all_pass = all_pass && sub.passed();
  }
  c.measured = {{"sweep", items}};
  c.bound = {{"margin", margin}};
  c.tolerance = margin;
  c.verdict = all_pass ? "pass" : "fail";
  return c;
}

ClaimRecord check_sector_formula_consistency(const OperatorConstants& base,
                                             std::uint64_t seed, int fuzz_cases) {
  ClaimRecord c;
  c.id = "sector_formula_consistency";
  c.anchor = "vertex root xi, semi-angle at the zero vertex, sign pattern of gamma";

  auto evaluate = [](const OperatorConstants& b, double* gamma_at_xi, double* rel_tan,
                     bool* pattern_ok) {
    SectorParams at_xi = sector_params(b, sector_params(b, 1.0).xi);
    *gamma_at_xi = at_xi.gamma;
    const double tan_theta0 = std::tan(at_xi.theta0);
    *rel_tan = std::abs(tan_theta0 - 1.0 / at_xi.b) / std::abs(tan_theta0);
    bool ok = true;
    const double xi = at_xi.xi;
    const double slack = 1e-12 * std::max(1.0, b.eta_inv_sq);
    for (int k = -30; k <= 30; ++k) {
      if (k == 0) continue;  // eps = xi handled by the root check
      const double eps = xi * std::pow(10.0, k / 10.0);
      const double g = sector_params(b, eps).gamma;
      if (k < 0 && !(g < slack)) ok = false;
      if (k > 0 && !(g >= -slack)) ok = false;
    }
    *pattern_ok = ok;
  };

  double g_xi = 0.0, rel_tan = 0.0;
  bool pattern = false;
  evaluate(base, &g_xi, &rel_tan, &pattern);
  const double scale = std::max(1.0, base.eta_inv_sq);

  // fuzz over random positive constant sets
  Rng rng(seed);
  double fuzz_worst_gamma = 0.0, fuzz_worst_tan = 0.0;
  bool fuzz_pattern = true;
  for (int k = 0; k < fuzz_cases; ++k) {
    OperatorConstants b;
    b.ellipticity = std::pow(10.0, rng.uniform(-2.0, 2.0));
    b.coeff_norm = std::pow(10.0, rng.uniform(-2.0, 2.0));
    b.mixed_bound = std::pow(10.0, rng.uniform(-2.0, 2.0));
    b.eta_inv_sq = std::pow(10.0, rng.uniform(-2.0, 2.0));
    b.rho_max = b.rho_min = 1.0;
    b.diameter = 1.0;
    double g = 0.0, rt = 0.0;
    bool pat = false;
    evaluate(b, &g, &rt, &pat);
    fuzz_worst_gamma = std::max(fuzz_worst_gamma, std::abs(g) / std::max(1.0, b.eta_inv_sq));
    fuzz_worst_tan = std::max(fuzz_worst_tan, rt);
    fuzz_pattern = fuzz_pattern && pat;
  }

  c.measured = {{"gamma_at_xi", g_xi},
                {"tan_theta0_rel_diff", rel_tan},
                {"sign_pattern_ok", pattern},
                {"fuzz_cases", fuzz_cases},
                {"fuzz_worst_gamma_at_xi", fuzz_worst_gamma},
                {"fuzz_worst_tan_rel_diff", fuzz_worst_tan},
                {"fuzz_sign_pattern_ok", fuzz_pattern}};
  c.bound = {{"gamma_at_xi", 1e-12}, {"tan_rel_diff", 1e-10}};
  c.tolerance = 1e-10;
  const bool ok = std::abs(g_xi) <= 1e-12 * scale && rel_tan <= 1e-10 && pattern &&
                  fuzz_worst_gamma <= 1e-12 && fuzz_worst_tan <= 1e-10 && fuzz_pattern;
  c.verdict = ok ? "pass" : "fail";
  return c;
}

ClaimRecord subordination_check(const Eigen::MatrixXd& l_h, const Eigen::MatrixXd& h_h,
                                double ip_weight, double semi_angle, int samples,
                                std::uint64_t seed) {
  ClaimRecord c;
  c.id = "subordination";
  c.anchor = "t/2 <= |a[f]| <= sec(theta) t/2 for the adjoint-part form";
  Rng rng(seed);
  const int n = static_cast<int>(l_h.rows());
  const Eigen::MatrixXd lt = l_h.transpose();

  double max_sample_arg = 0.0;
  std::vector<double> t_half(samples), a_abs(samples);
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXcd f = rng.complex_vector(n);
    f.normalize();
    const double th = ip_weight * std::real(f.dot(h_h * f));
    const std::complex<double> lval = ip_weight * f.dot(lt * f);
    max_sample_arg = std::max(max_sample_arg, std::abs(std::arg(lval)));
    t_half[k] = th;
    a_abs[k] = std::abs(-lval);
  }
  const double theta_eff = std::max(semi_angle, max_sample_arg);
  const double s = sec(theta_eff);
  int viol = 0;
  double worst_low = 1e300, worst_up = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double lo = a_abs[k] / t_half[k];          // must be >= 1
    const double up = a_abs[k] / (s * t_half[k]);    // must be <= 1
    worst_low = std::min(worst_low, lo);
    worst_up = std::max(worst_up, up);
    if (lo < 1.0 - 1e-10 || up > 1.0 + 1e-10) ++viol;
  }
  c.measured = {{"samples", samples},
                {"theta", semi_angle},
                {"theta_effective", theta_eff},
                {"min_lower_ratio", worst_low},
                {"max_upper_ratio", worst_up},
                {"violations", viol}};
  c.bound = {{"relative_tolerance", 1e-10}};
  c.tolerance = 1e-10;
  c.verdict = viol == 0 ? "pass" : "fail";
  return c;
}

ClaimRecord accretivity_check(const Eigen::MatrixXd& l_h, const Grid& grid,
                              const OperatorConstants& constants, int samples,
                              std::uint64_t seed) {
  ClaimRecord c;
  c.id = "accretivity";
  c.anchor = "Re(Lf,f) >= a |grad f|^2 + eta^{-2} |f|^2; positive real part";
  Rng rng(seed);
  const int n = static_cast<int>(l_h.rows());
  const double w = grid.ip_weight();

  double worst_slack_rel = 0.0;
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXcd f = rng.complex_vector(n);
    f /= std::sqrt(w) * f.norm();
    const Eigen::VectorXd re = f.real(), im = f.imag();
    const double grad_sq = norm_h10(re, grid) * norm_h10(re, grid) +
                           norm_h10(im, grid) * norm_h10(im, grid);
    const double l2_sq = w * f.squaredNorm();
    for (const Eigen::MatrixXd& m : {l_h, Eigen::MatrixXd(l_h.transpose())}) {
      const double lhs = w * std::real(f.dot(m * f));
      const double rhs = constants.ellipticity * grad_sq + constants.eta_inv_sq * l2_sq;
      const double slack = (rhs - lhs) / std::max(std::abs(lhs), 1e-300);
      worst_slack_rel = std::max(worst_slack_rel, slack);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real_component(l_h));
  const double h_min = es.eigenvalues().minCoeff();

  c.measured = {{"samples", samples},
                {"worst_relative_slack", worst_slack_rel},
                {"lambda_min_H", h_min}};
  c.bound = {{"slack", 1e-10}, {"lambda_min_H", 0.0}};
  c.tolerance = 1e-10;
  c.verdict = (worst_slack_rel <= 1e-10 && h_min > 0.0) ? "pass" : "fail";
  return c;
}

ClaimRecord check_fractional_gradient_bound(const Grid& grid, const FracConfig& cfg,
                                            int samples, std::uint64_t seed) {
  ClaimRecord c;
  c.id = "fractional_gradient_bound";
  c.anchor = "|D^alpha f| <= K |f|_{H^1_0} for smooth f vanishing on the boundary";
  const int n = grid.domain.dimension;
  const double K = fractional_gradient_bound(cfg.alpha, grid.domain.diameter(), n);
  Rng rng(seed);

  auto make_sample = [&](int which) {
    Eigen::VectorXd f(grid.n_dof());
    const double w = grid.domain.lengths[0];
    const double h = n == 2 ? grid.domain.lengths[1] : 1.0;
    const int modes = 3;
    std::vector<double> cx(modes), cy(modes);
    for (int m = 0; m < modes; ++m) {
      cx[m] = rng.uniform(-1.0, 1.0);
      cy[m] = rng.uniform(-1.0, 1.0);
    }
    for (int q = 0; q < grid.n_dof(); ++q) {
      const double x = grid.nodes[q].point[0], y = grid.nodes[q].point[1];
      double v = 0.0;
      if (which % 3 == 0) {
        for (int m = 0; m < modes; ++m)
          v += cx[m] * std::sin((m + 1) * kPi * x / w) *
               (n == 2 ? std::sin((m + 1) * kPi * y / h) : 1.0);
      } else if (which % 3 == 1) {
        v = x * (w - x) * (n == 2 ? y * (h - y) : 1.0);
      } else {
        v = x * (w - x) * (1.0 + cx[0] * x) * (n == 2 ? y * (h - y) * (1.0 + cy[0] * y) : 1.0);
      }
      f[q] = v;
    }
    return f;
  };

  double max_ratio = 0.0;
  int violations = 0;
  for (int k = 0; k < samples; ++k) {
    const Eigen::VectorXd f = make_sample(k);
    const Eigen::VectorXd df = kipriyanov_apply(f, cfg, grid);
    const double ratio = norm_l2(df, grid) / norm_h10(f, grid);
    max_ratio = std::max(max_ratio, ratio);
    if (ratio > K * 1.02) ++violations;
  }
  c.measured = {{"samples", samples}, {"max_ratio", max_ratio}, {"K", K},
                {"violations", violations}};
  c.bound = {{"K_times", 1.02}};
  c.tolerance = 0.02;
  c.verdict = violations == 0 ? "pass" : "fail";
  return c;
}

ClaimRecord check_inversion_identity(const FracConfig& cfg, double ray_length) {
  ClaimRecord c;
  c.id = "inversion_identity";
  c.anchor = "left integral of the left derivative recovers f on the ray";

  auto error_at = [&](int cells) {
    const double r = ray_length;
    const auto t = graded_partition(r, cells, cfg.grading_q);
    std::vector<double> fv(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) fv[j] = t[j] * (r - t[j]);
    RayFunction f(t, fv);
    FracConfig local = cfg;
    local.cells_per_ray = cells;
    std::vector<double> gv(t.size(), 0.0);
    for (std::size_t j = 1; j < t.size(); ++j)
      gv[j] = marchaud_left_limit(f, local, t[j]);
    RayFunction g(t, gv);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 1; j < t.size(); ++j) {
      const double wq = (j + 1 < t.size() ? t[j + 1] : t[j]) - t[j - 1];  // trapezoid-ish
      const double rec = frac_integral_left(g, local, t[j]);
      num += wq * (rec - fv[j]) * (rec - fv[j]);
      den += wq * fv[j] * fv[j];
    }
    return std::sqrt(num / den);
  };

  const int M = std::max(cfg.cells_per_ray, 64);
  const double e1 = error_at(M), e2 = error_at(2 * M), e3 = error_at(4 * M);
  c.measured = {{"cells", json::array({M, 2 * M, 4 * M})},
                {"errors", json::array({e1, e2, e3})},
                {"reduction_factors", json::array({e1 / e2, e2 / e3})}};
  c.bound = {{"final_error", 1e-3}, {"reduction_factor", 2.0}};
  c.tolerance = 1e-3;
  c.verdict = (e3 <= 1e-3 && e1 / e2 >= 2.0 && e2 / e3 >= 2.0) ? "pass" : "fail";
  return c;
}

ClaimRecord check_truncation_convergence(const Grid& grid, const FracConfig& cfg) {
  ClaimRecord c;
  c.id = "truncation_convergence";
  c.anchor = "truncated derivative converges to the limit derivative as eps -> 0";

  Eigen::VectorXd f(grid.n_dof());
  for (int q = 0; q < grid.n_dof(); ++q) {
    const double x = grid.nodes[q].point[0], y = grid.nodes[q].point[1];
    f[q] = x * (grid.domain.lengths[0] - x);
    if (grid.domain.dimension == 2) f[q] *= y * (grid.domain.lengths[1] - y);
  }
  const Eigen::VectorXd limit = kipriyanov_apply(f, cfg, grid);

  auto truncated = [&](double eps) {
    Eigen::VectorXd out(grid.n_dof());
    FracConfig local = cfg;
    local.truncation_eps = eps;
    for (int q = 0; q < grid.n_dof(); ++q) {
      const RayCoords& rc = grid.nodes[q];
      const auto t = graded_partition(rc.r, cfg.cells_per_ray, cfg.grading_q);
      std::vector<double> fv(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) {
        fv[j] = 0.0;
        const std::array<double, 2> pt{rc.point[0] - (rc.r - t[j]) * rc.e[0],
                                       rc.point[1] - (rc.r - t[j]) * rc.e[1]};
        for (const WeightedNode& wn : grid_interpolation_weights(grid, pt))
          fv[j] += wn.weight * f[wn.index];
      }
      fv.back() = f[q];
      out[q] = marchaud_left_truncated(RayFunction(t, fv), local, rc.r);
    }
    return out;
  };

  const double delta = grid.domain.diameter();
  json dists = json::array();
  double first = 0.0, last = 0.0;
  bool decreasing = true;
  double prev = 0.0;
  for (int k = 2; k <= 7; ++k) {
    const double eps = delta * std::pow(2.0, -k);
    const double dist = (truncated(eps) - limit).norm() / limit.norm();
    dists.push_back({{"eps", eps}, {"relative_distance", dist}});
    if (k == 2) first = dist;
    if (k > 2 && dist > prev * 1.05) decreasing = false;
    prev = dist;
    last = dist;
  }
  c.measured = {{"distances", dists}, {"first", first}, {"last", last}};
  c.bound = {{"final_vs_first", 0.25}};
  c.tolerance = 0.25;
  c.verdict = (decreasing && last <= first * 0.25) ? "pass" : "fail";
  return c;
}

ClaimRecord check_spectral_sandwich(const SpectrumResult& h_spectrum,
                                    const OperatorConstants& base, const Grid& grid,
                                    double band) {
  ClaimRecord c;
  c.id = "spectral_sandwich";
  c.anchor = "lambda_i(Y0) <= lambda_i(H) <= lambda_i(Y1) index-wise";
  const int n_dof = grid.n_dof();
  const int m = std::max(4, n_dof / 4);
  const Eigen::VectorXd fd = dirichlet_laplace_spectrum_fd(grid);
  const Eigen::VectorXd an = dirichlet_laplace_spectrum(grid.domain, m);
  const double mu0 = base.ellipticity, sig0 = base.eta_inv_sq;
  const double mu1 = base.coeff_norm + 0.5 * base.mixed_bound;
  const double sig1 = 0.5 * base.mixed_bound;

  double low_d = -1e300, up_d = -1e300, low_a = -1e300, up_a = -1e300;
  for (int i = 0; i < m; ++i) {
    const double lam = h_spectrum.eigenvalues[i].real();
    const double y0d = mu0 * fd[i] + sig0, y1d = mu1 * fd[i] + sig1;
    const double y0a = mu0 * an[i] + sig0, y1a = mu1 * an[i] + sig1;
    low_d = std::max(low_d, (y0d - lam) / y0d);
    up_d = std::max(up_d, (lam - y1d) / y1d);
    low_a = std::max(low_a, (y0a - lam) / y0a);
    up_a = std::max(up_a, (lam - y1a) / y1a);
  }
  c.measured = {{"indices_checked", m},
                {"lower_violation_discrete", low_d},
                {"upper_violation_discrete", up_d},
                {"lower_violation_analytic", low_a},
                {"upper_violation_analytic", up_a}};
  c.bound = {{"lower", 1e-8}, {"upper_band", band}};
  c.tolerance = band;
  c.verdict = (low_d <= 1e-8 && up_d <= band) ? "pass" : "fail";
  return c;
}

ClaimRecord check_weyl_asymptotics(const OperatorConstants& base, const Grid& grid) {
  ClaimRecord c;
  c.id = "weyl_asymptotics";
  c.anchor = "leading coefficient of the Dirichlet spectrum and counting function";
  const int n = grid.domain.dimension;
  const int count = std::max(grid.n_dof(), 400);
  const Eigen::VectorXd lam = dirichlet_laplace_spectrum(grid.domain, count);
  const double e_unit = weyl_leading_coefficient(1.0, grid.domain);

  // tail mean of lambda_i / (E i^{2/n})
  double acc = 0.0;
  int cnt = 0;
  for (int i = count / 2; i <= count; ++i) {
    acc += lam[i - 1] / (e_unit * std::pow(static_cast<double>(i), 2.0 / n));
    ++cnt;
  }
  const double tail_ratio = acc / cnt;

  // counting function at the top checked eigenvalue
  const double mes = grid.domain.measure();
  const double lead = mes / (std::pow(2.0, n) * std::pow(kPi, n / 2.0) *
                             std::tgamma(n / 2.0 + 1.0));
  const double n_formula = lead * std::pow(lam[count - 1], n / 2.0);
  const double count_rel = std::abs(n_formula - count) / count;

  c.measured = {{"count", count},
                {"e0", weyl_leading_coefficient(base.ellipticity, grid.domain)},
                {"e1", weyl_leading_coefficient(base.coeff_norm + 0.5 * base.mixed_bound,
                                                grid.domain)},
                {"tail_ratio_mean", tail_ratio},
                {"counting_function_rel_dev", count_rel}};
  c.bound = {{"tail_ratio", 0.05}, {"counting_dev", 0.10}};
  c.tolerance = 0.05;
  c.verdict = (std::abs(tail_ratio - 1.0) <= 0.05 && count_rel <= 0.10) ? "pass" : "fail";
  return c;
}

ClaimRecord check_resolvent_real_eig_decay(const Eigen::VectorXd& v_descending, int n,
                                           double slope_tol) {
  ClaimRecord c;
  c.id = "resolvent_real_eig_decay";
  c.anchor = "eigenvalues of the resolvent real part decay like i^{-2/n}";
  const int len = static_cast<int>(v_descending.size());
  const int i_min = 5, i_max = std::max(i_min + 10, len / 4);
  const DecayFit fit = decay_exponent(v_descending, i_min, i_max);
  double c1 = 1e300, c2 = 0.0;
  for (int i = i_min; i <= i_max; ++i) {
    const double r = v_descending[i - 1] * std::pow(static_cast<double>(i), 2.0 / n);
    c1 = std::min(c1, r);
    c2 = std::max(c2, r);
  }
  c.measured = {{"slope", fit.slope}, {"std_error", fit.std_error},
                {"window", json::array({i_min, i_max})}, {"c1", c1}, {"c2", c2}};
  c.bound = {{"slope", -2.0 / n}, {"tolerance", slope_tol}};
  c.tolerance = slope_tol;
  c.verdict = (std::abs(fit.slope + 2.0 / n) <= slope_tol && c1 > 0.0) ? "pass" : "fail";
  return c;
}

ClaimRecord check_resolvent_bound_constant(const Eigen::MatrixXd& resolvent,
                                           const Eigen::VectorXd& v_descending) {
  ClaimRecord c;
  c.id = "resolvent_bound_constant";
  c.anchor = "lambda_i(R*R) <= C1^{-1} lambda_i(V) with the measured accretivity "
             "constant of the resolvent";
  const Eigen::MatrixXd f = resolvent.transpose() * resolvent;
  const Eigen::MatrixXd v = real_component(resolvent);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(v, f);
  if (ges.info() != Eigen::Success)
    throw ComputationError("check_resolvent_bound_constant: pencil solve failed");
  const double c1 = ges.eigenvalues().minCoeff();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fe(f);
  const int n = static_cast<int>(f.rows());
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lam_f = fe.eigenvalues()[n - 1 - i];
    worst = std::max(worst, lam_f * c1 / v_descending[i]);
  }
  c.measured = {{"C1", c1}, {"max_index_ratio", worst}};
  c.bound = {{"max_index_ratio", 1.0 + 1e-10}};
  c.tolerance = 1e-10;
  c.verdict = (c1 > 0.0 && worst <= 1.0 + 1e-10) ? "pass" : "fail";
  return c;
}

ClaimRecord check_snumber_decay(const SNumberSequence& s, int n, double slope_tol) {
  ClaimRecord c;
  c.id = "snumber_decay";
  c.anchor = "singular values of the resolvent decay like i^{-2/n}";
  const int len = static_cast<int>(s.values.size());
  const int i_min = 5, i_max = std::max(i_min + 10, len / 4);
  const DecayFit fit = decay_exponent(s.values, i_min, i_max);
  c.measured = {{"slope", fit.slope}, {"std_error", fit.std_error},
                {"window", json::array({i_min, i_max})}};
  c.bound = {{"slope", -2.0 / n}, {"tolerance", slope_tol}};
  c.tolerance = slope_tol;
  c.verdict = std::abs(fit.slope + 2.0 / n) <= slope_tol ? "pass" : "fail";
  return c;
}

ClaimRecord schatten_classify(const SNumberSequence& s, double p, int n) {
  ClaimRecord c;
  c.id = "schatten_membership";
  c.anchor = "p-summability of the resolvent singular values";
  if (p < 1.0) throw std::invalid_argument("schatten_classify: p must be >= 1");
  const int len = static_cast<int>(s.values.size());
  const int i_min = std::max(5, len / 8), i_max = std::max(i_min + 10, len / 2);
  const DecayFit fit = decay_exponent(s.values, i_min, i_max);
  const double sigma_p = fit.slope * p;

  double partial = 0.0;
  for (int i = 0; i < len; ++i) partial += std::pow(s.values[i], p);
  // fitted tail beyond the computed range
  double tail_rel = 1e300;
  bool member = false;
  if (sigma_p < -1.0) {
    const double log_c = std::log(s.values[i_max - 1]) - fit.slope * std::log(double(i_max));
    const double cpow = std::exp(log_c * p);
    const double tail = cpow * std::pow(static_cast<double>(len), sigma_p + 1.0) /
                        (-sigma_p - 1.0);
    tail_rel = tail / partial;
    member = tail_rel < 0.05;
  }

  // sufficient / necessary gates of the classification
  std::string gate = "none";
  bool expected_member = false;
  if ((n == 1 && p >= 1.0) || (n >= 2 && p > n)) {
    gate = "sufficient";
    expected_member = true;
  } else if (!(n < 2.0 * p)) {
    gate = "necessary";
    expected_member = false;
  }

  c.measured = {{"p", p}, {"n", n}, {"tail_exponent", sigma_p},
                {"partial_sum", partial}, {"tail_estimate_rel", tail_rel == 1e300 ? json() : json(tail_rel)},
                {"member", member}, {"gate", gate}};
  c.bound = {{"tail_rel", 0.05}};
  c.tolerance = 0.05;
  if (gate == "none")
    c.verdict = "pass";  // no prediction to contradict; result is informational
  else
    c.verdict = (member == expected_member) ? "pass" : "fail";
  return c;
}

ClaimRecord completeness_condition(const SectorParams& params, const FovBoundary& fov_r,
                                   const SpectrumResult& eigs_r, int n, double margin) {
  ClaimRecord c;
  c.id = "root_system_completeness";
  c.anchor = "semi-angle below pi/n; cone angle of the resolvent range; "
             "eigenvector rank";
  const bool flag = params.theta0 < kPi / n;

  double max_pos = 0.0, max_neg = 0.0;
  for (const FovPoint& p : fov_r.points) {
    const double a = std::arg(p.z);
    if (a >= 0.0) max_pos = std::max(max_pos, a);
    else max_neg = std::max(max_neg, -a);
  }
  const double asym = std::abs(max_pos - max_neg);
  const double cone = max_pos + max_neg;

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(eigs_r.eigenvectors);
  const int rank = static_cast<int>(qr.rank());
  const int n_dof = static_cast<int>(eigs_r.eigenvectors.rows());

  c.measured = {{"theta0", params.theta0}, {"pi_over_n", kPi / n},
                {"completeness_flag", flag}, {"cone_angle", cone},
                {"arg_symmetry_dev", asym}, {"eigenvector_rank", rank},
                {"n_dof", n_dof}};
  c.bound = {{"cone_max", 2.0 * params.theta0 + margin}, {"symmetry", 1e-6}};
  c.tolerance = margin;
  if (cone < 1e-12) {
    c.verdict = "not-applicable";
    c.reason = "numerical range is real: the nonsymmetric part is disabled, the cone "
               "angle degenerates to zero";
    return c;
  }
  const bool ok = flag && asym <= 1e-6 && cone > 0.0 &&
                  cone <= 2.0 * params.theta0 + margin && rank == n_dof;
  if (!flag) {
    c.verdict = "not-applicable";
    c.reason = "sufficient completeness condition theta0 < pi/n does not hold";
    return c;
  }
  c.verdict = ok ? "pass" : "fail";
  return c;
}

ClaimRecord eigenvalue_sum_bound(const SpectrumResult& eigs_r,
                                 const Eigen::VectorXd& v_descending,
                                 const SectorFactorization& factor,
                                 const SectorParams& params, double theta_measured,
                                 double p, const Eigen::VectorXd& y0_discrete,
                                 SumBoundSeries* series) {
  ClaimRecord c;
  c.id = "eigenvalue_sum_bound";
  c.anchor = "partial sums of |lambda(R)|^p against the s-number and "
             "comparison-spectrum bounds";
  const Eigen::VectorXd lam = descending_moduli(eigs_r);
  const int n = static_cast<int>(lam.size());
  const double secp_meas = std::pow(sec(theta_measured), p);
  const double secp_analytic = std::pow(sec(params.theta0), p);

  double lhs = 0.0, rhs46 = 0.0, rhs41 = 0.0;
  double worst46 = 0.0, worst41 = 0.0;
  if (series) {
    series->partial_lhs.reserve(n);
    series->partial_rhs_fov.reserve(n);
    series->partial_rhs_weyl.reserve(n);
  }
  for (int k = 0; k < n; ++k) {
    lhs += std::pow(lam[k], p);
    rhs46 += std::pow(v_descending[k], p);
    rhs41 += std::pow(y0_discrete[k], -p);
    const double b46 = secp_meas * rhs46;
    const double b41 = secp_meas * factor.s_inv_norm * rhs41;
    worst46 = std::max(worst46, lhs / b46);
    worst41 = std::max(worst41, lhs / b41);
    if (series) {
      series->partial_lhs.push_back(lhs);
      series->partial_rhs_fov.push_back(b46);
      series->partial_rhs_weyl.push_back(b41);
    }
  }
  c.measured = {{"p", p},
                {"theta_measured", theta_measured},
                {"theta_analytic", params.theta0},
                {"sec_p_measured", secp_meas},
                {"sec_p_analytic", secp_analytic},
                {"s_inv_norm", factor.s_inv_norm},
                {"max_ratio_snumber_bound", worst46},
                {"max_ratio_comparison_bound", worst41}};
  c.bound = {{"ratio", 1.0 + 1e-10}};
  c.tolerance = 1e-10;
  c.verdict = (worst46 <= 1.0 + 1e-10 && worst41 <= 1.0 + 1e-10) ? "pass" : "fail";
  return c;
}

ClaimRecord check_eigenvalue_tail_decay(const SpectrumResult& eigs_r, int n) {
  ClaimRecord c;
  c.id = "eigenvalue_tail_decay";
  c.anchor = "modulus of the resolvent eigenvalues decays at least like i^{-2/n}";
  const Eigen::VectorXd lam = descending_moduli(eigs_r);
  const int len = static_cast<int>(lam.size());
  const int i_min = 5, i_max = std::max(i_min + 10, len / 4);
  const DecayFit fit = decay_exponent(lam, i_min, i_max);
  c.measured = {{"slope", fit.slope}, {"std_error", fit.std_error},
                {"window", json::array({i_min, i_max})}};
  c.bound = {{"slope_max", -2.0 / n + 0.1}};
  c.tolerance = 0.1;
  c.verdict = fit.slope <= -2.0 / n + 0.1 ? "pass" : "fail";
  return c;
}

}  // namespace fracspec
