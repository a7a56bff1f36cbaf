#include "fracspec/spectral_engine.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace fracspec {

namespace {

constexpr double kClusterRelTol = 1e-8;

void cluster_multiplicities(SpectrumResult& r) {
  const int n = static_cast<int>(r.eigenvalues.size());
  r.distinct.clear();
  r.multiplicities.clear();
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(r.eigenvalues[i]));
  const double tol = kClusterRelTol * std::max(scale, 1e-300);
  for (int i = 0; i < n;) {
    int j = i + 1;
    while (j < n && std::abs(r.eigenvalues[j] - r.eigenvalues[j - 1]) <= tol) ++j;
    std::complex<double> mean(0.0, 0.0);
    for (int k = i; k < j; ++k) mean += r.eigenvalues[k];
    r.distinct.push_back(mean / static_cast<double>(j - i));
    r.multiplicities.push_back(j - i);
    i = j;
  }
  r.nu = n;
}

double residual_of(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& lambda,
                   const Eigen::MatrixXcd& v) {
  const Eigen::MatrixXcd resid = m * v - v * lambda.asDiagonal();
  const double scale = std::max(m.norm(), 1e-300);
  double worst = 0.0;
  for (int i = 0; i < v.cols(); ++i)
    worst = std::max(worst, resid.col(i).norm() / std::max(v.col(i).norm(), 1e-300));
  return worst / scale;
}

}  // namespace

double FovBoundary::max_abs_arg() const { return max_abs_arg_shifted(0.0); }

double FovBoundary::max_abs_arg_shifted(double vertex) const {
  double worst = 0.0;
  for (const FovPoint& p : points)
    worst = std::max(worst, std::abs(std::arg(p.z - vertex)));
  return worst;
}

SpectrumResult eig_sym(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_sym: matrix must be square");
  const double asym = (m - m.transpose()).norm();
  if (asym > 1e-10 * std::max(1.0, m.norm()))
    throw std::invalid_argument("eig_sym: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw ComputationError("eig_sym: eigensolver did not converge");
  SpectrumResult r;
  r.eigenvalues = es.eigenvalues().cast<std::complex<double>>();
  r.eigenvectors = es.eigenvectors().cast<std::complex<double>>();
  r.residual_max = residual_of(m.cast<std::complex<double>>(), r.eigenvalues, r.eigenvectors);
  cluster_multiplicities(r);
  return r;
}

SpectrumResult eig_general(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("eig_general: matrix must be square");
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw ComputationError("eig_general: eigensolver did not converge");
  const int n = static_cast<int>(m.rows());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Eigen::VectorXcd ev = es.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = std::abs(ev[a]), mb = std::abs(ev[b]);
    if (ma != mb) return ma < mb;
    if (ev[a].real() != ev[b].real()) return ev[a].real() < ev[b].real();
    return ev[a].imag() < ev[b].imag();
  });
  SpectrumResult r;
  r.eigenvalues.resize(n);
  r.eigenvectors.resize(n, n);
  const Eigen::MatrixXcd vec = es.eigenvectors();
  for (int i = 0; i < n; ++i) {
    r.eigenvalues[i] = ev[order[i]];
    r.eigenvectors.col(i) = vec.col(order[i]);
  }
  r.residual_max = residual_of(m.cast<std::complex<double>>(), r.eigenvalues, r.eigenvectors);
  cluster_multiplicities(r);
  return r;
}

SpectrumResult make_spectrum_result(const Eigen::VectorXcd& eigenvalues,
                                    const Eigen::MatrixXcd& eigenvectors,
                                    const Eigen::MatrixXcd& m) {
  SpectrumResult r;
  r.eigenvalues = eigenvalues;
  r.eigenvectors = eigenvectors;
  r.residual_max = residual_of(m, r.eigenvalues, r.eigenvectors);
  cluster_multiplicities(r);
  return r;
}

SNumberSequence singular_values(const Eigen::MatrixXd& m, std::string source) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("singular_values: matrix must be square");
  const Eigen::MatrixXd gram = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success)
    throw ComputationError("singular_values: eigensolver did not converge");
  const int n = static_cast<int>(m.rows());
  SNumberSequence s;
  s.values.resize(n);
  for (int i = 0; i < n; ++i)
    s.values[i] = std::sqrt(std::max(0.0, es.eigenvalues()[n - 1 - i]));
  s.source = std::move(source);
  return s;
}

Eigen::MatrixXd resolvent_at_zero(const Eigen::MatrixXd& m, double* residual) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("resolvent_at_zero: matrix must be square");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14))
    throw ComputationError("resolvent_at_zero: matrix singular to tolerance, rcond = " +
                           std::to_string(rcond));
  Eigen::MatrixXd inv = lu.inverse();
  const double resid =
      (m * inv - Eigen::MatrixXd::Identity(m.rows(), m.cols())).norm();
  if (residual) *residual = resid;
  return inv;
}

std::pair<double, Eigen::VectorXcd> hermitian_top_eigenpair(const Eigen::MatrixXcd& h) {
  const int n = static_cast<int>(h.rows());
  const double scale = std::max(h.norm(), 1e-300);

  if (n <= 128) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
      throw ComputationError("hermitian_top_eigenpair: dense solver failed");
    return {es.eigenvalues()[n - 1], es.eigenvectors().col(n - 1)};
  }

  // Lanczos with full reorthogonalization and a deterministic start.
  const int max_iter = std::min(n, 260);
  Eigen::MatrixXcd basis(n, max_iter);
  Eigen::VectorXd diag(max_iter), off(max_iter);
  Eigen::VectorXcd v(n), w(n);
  for (int i = 0; i < n; ++i) v[i] = std::complex<double>(1.0 + 1e-3 * std::sin(i + 1.0), 0.0);
  v.normalize();

  int m = 0;
  double beta = 0.0;
  for (int j = 0; j < max_iter; ++j) {
    basis.col(j) = v;
    w = h * v;
    if (j > 0) w -= beta * basis.col(j - 1);
    const double a = std::real(basis.col(j).dot(w));
    diag[j] = a;
    w -= a * v;
    // full reorthogonalization (twice for safety at this scale)
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w);
    beta = w.norm();
    m = j + 1;

    const bool invariant = beta <= 1e-14 * scale;
    const bool check = invariant || j + 1 == max_iter || (j >= 8 && j % 4 == 0);
    if (check) {
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        tri(i, i) = diag[i];
        if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = off[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(tri);
      const double theta = tes.eigenvalues()[m - 1];
      const Eigen::VectorXd s = tes.eigenvectors().col(m - 1);
      const double resid_est = std::abs(beta * s[m - 1]);
      if (invariant || resid_est <= 1e-11 * scale) {
        Eigen::VectorXcd top = basis.leftCols(m) * s.cast<std::complex<double>>();
        top.normalize();
        // certify; fall back to the dense solver when uncertified
        const double true_resid = (h * top - theta * top).norm();
        if (true_resid <= 1e-9 * scale) return {theta, top};
        break;
      }
    }
    if (invariant) break;
    off[j] = beta;
    v = w / beta;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw ComputationError("hermitian_top_eigenpair: dense fallback failed");
  return {es.eigenvalues()[n - 1], es.eigenvectors().col(n - 1)};
}

FovBoundary field_of_values(const Eigen::MatrixXd& m, int n_angles) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("field_of_values: matrix must be square");
  if (n_angles < 16)
    throw std::invalid_argument("field_of_values: need at least 16 angles");
  const int n = static_cast<int>(m.rows());
  const Eigen::MatrixXd sym = real_component(m);
  const Eigen::MatrixXd skew = 0.5 * (m - m.transpose());
  const std::complex<double> iu(0.0, 1.0);
  const Eigen::MatrixXcd mc = m.cast<std::complex<double>>();

  FovBoundary fov;
  fov.points.reserve(n_angles);
  Eigen::MatrixXcd hphi(n, n);
  for (int k = 0; k < n_angles; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / n_angles;
    hphi = std::cos(phi) * sym.cast<std::complex<double>>() +
           iu * std::sin(phi) * skew.cast<std::complex<double>>();
    auto [support, v] = hermitian_top_eigenpair(hphi);
    const std::complex<double> z = v.dot(mc * v) / v.dot(v);
    fov.points.push_back({phi, support, z});
  }
  return fov;
}

SectorFactorization factorize_sector(const Eigen::MatrixXd& l_h,
                                     const Eigen::MatrixXd& h_h) {
  if (l_h.rows() != l_h.cols() || h_h.rows() != h_h.cols() || l_h.rows() != h_h.rows())
    throw std::invalid_argument("factorize_sector: shape mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_h);
  if (es.info() != Eigen::Success)
    throw ComputationError("factorize_sector: eigensolver failed on H");
  if (!(es.eigenvalues().minCoeff() > 0.0))
    throw ComputationError("factorize_sector: H is not positive definite");

  SectorFactorization f;
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::MatrixXd& vec = es.eigenvectors();
  f.h_half = vec * lam.cwiseSqrt().asDiagonal() * vec.transpose();
  f.h_half_inv = vec * lam.cwiseSqrt().cwiseInverse().asDiagonal() * vec.transpose();

  const Eigen::MatrixXd skew = 0.5 * (l_h - l_h.transpose());
  Eigen::MatrixXd br = f.h_half_inv * skew * f.h_half_inv;
  br = 0.5 * (br - br.transpose().eval());  // keep it exactly skew
  f.br = br;
  f.b = std::complex<double>(0.0, -1.0) * br.cast<std::complex<double>>();
  f.s = Eigen::MatrixXd::Identity(br.rows(), br.cols()) + br.transpose() * br;

  f.b_norm = singular_values(br).values[0];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ss(f.s);
  f.s_inv_norm = 1.0 / ss.eigenvalues().minCoeff();

  const Eigen::MatrixXd recon = f.h_half * (Eigen::MatrixXd::Identity(br.rows(), br.cols()) + br) * f.h_half;
  f.resid_factorization = (recon - l_h).norm() / std::max(l_h.norm(), 1e-300);
  return f;
}

double numerical_range_semi_angle(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("numerical_range_semi_angle: matrix must be square");
  const Eigen::MatrixXd sym = real_component(m);
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success)
    throw ComputationError(
        "numerical_range_semi_angle: real part is not positive definite");
  const Eigen::MatrixXd skew = 0.5 * (m - m.transpose());
  // sup |Im(Mf,f)| / Re(Mf,f) = largest singular value of L^{-1} W L^{-T}
  const Eigen::MatrixXd lw = llt.matrixL().solve(skew);
  const Eigen::MatrixXd conj = llt.matrixL().solve(lw.transpose()).transpose();
  return std::atan(singular_values(conj).values[0]);
}

Eigen::MatrixXd resolvent_real_part_from_factorization(const SectorFactorization& f) {
  const Eigen::MatrixXd s_inv = f.s.ldlt().solve(
      Eigen::MatrixXd::Identity(f.s.rows(), f.s.cols()));
  return f.h_half_inv * s_inv * f.h_half_inv;
}

DecayFit decay_exponent(const Eigen::VectorXd& seq, int i_min, int i_max) {
  if (i_min < 1 || i_max > seq.size() || i_max - i_min < 10)
    throw std::invalid_argument("decay_exponent: need i_max - i_min >= 10 within range");
  for (int i = i_min; i <= i_max; ++i)
    if (!(seq[i - 1] > 0.0))
      throw std::invalid_argument("decay_exponent: sequence must be positive on the window");

  const int n = i_max - i_min + 1;
  double sx = 0.0, sy = 0.0;
  for (int i = i_min; i <= i_max; ++i) {
    sx += std::log(static_cast<double>(i));
    sy += std::log(seq[i - 1]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = i_min; i <= i_max; ++i) {
    const double dx = std::log(static_cast<double>(i)) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(seq[i - 1]) - my);
  }
  DecayFit fit;
  fit.slope = sxy / sxx;
  double ss_res = 0.0;
  for (int i = i_min; i <= i_max; ++i) {
    const double dx = std::log(static_cast<double>(i)) - mx;
    const double resid = (std::log(seq[i - 1]) - my) - fit.slope * dx;
    ss_res += resid * resid;
  }
  fit.std_error = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace fracspec
