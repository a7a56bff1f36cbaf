#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "fracspec/rng.hpp"
#include "fracspec/spectral_engine.hpp"

using namespace fracspec;

namespace {

Eigen::MatrixXd random_matrix(int n, std::uint64_t seed) {
  Rng rng(seed);
  return rng.real_matrix(n, n);
}

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
  const Eigen::MatrixXd m = random_matrix(n, seed);
  return 0.5 * (m + m.transpose());
}

}  // namespace

TEST_CASE("symmetric eigensolve") {
  SUBCASE("diagonal") {
    Eigen::MatrixXd d(3, 3);
    d << 3, 0, 0, 0, 1, 0, 0, 0, 2;
    const SpectrumResult r = eig_sym(d);
    CHECK(r.eigenvalues[0].real() == doctest::Approx(1.0));
    CHECK(r.eigenvalues[1].real() == doctest::Approx(2.0));
    CHECK(r.eigenvalues[2].real() == doctest::Approx(3.0));
    CHECK(r.nu == 3);
  }
  SUBCASE("1D difference operator against the closed form") {
    const int N = 64;
    const double h = 1.0 / N;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(N - 1, N - 1);
    for (int i = 0; i < N - 1; ++i) {
      t(i, i) = 2.0 / (h * h);
      if (i > 0) t(i, i - 1) = -1.0 / (h * h);
      if (i + 1 < N - 1) t(i, i + 1) = -1.0 / (h * h);
    }
    const SpectrumResult r = eig_sym(t);
    for (int i = 1; i < N; ++i) {
      const double formula = 4.0 / (h * h) * std::pow(std::sin(i * M_PI * h / 2.0), 2);
      CHECK(r.eigenvalues[i - 1].real() == doctest::Approx(formula).epsilon(1e-10));
    }
  }
  SUBCASE("residuals certify the decomposition") {
    const Eigen::MatrixXd m = random_symmetric(50, 101);
    const SpectrumResult r = eig_sym(m);
    CHECK(r.residual_max <= 1e-10);
  }
  SUBCASE("rejects nonsymmetric input") {
    CHECK_THROWS_AS(eig_sym(random_matrix(5, 1)), std::invalid_argument);
  }
}

TEST_CASE("general eigensolve") {
  SUBCASE("rotation generator") {
    Eigen::MatrixXd m(2, 2);
    m << 0, -1, 1, 0;
    const SpectrumResult r = eig_general(m);
    CHECK(std::abs(r.eigenvalues[0] - std::complex<double>(0, -1)) < 1e-12);
    CHECK(std::abs(r.eigenvalues[1] - std::complex<double>(0, 1)) < 1e-12);
  }
  SUBCASE("companion matrix of z^3 - 1") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 2) = 1;
    m(1, 0) = 1;
    m(2, 1) = 1;
    const SpectrumResult r = eig_general(m);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(std::abs(r.eigenvalues[i]) - 1.0) < 1e-10);
  }
  SUBCASE("transpose keeps the spectrum") {
    const Eigen::MatrixXd m = random_matrix(40, 7);
    const SpectrumResult a = eig_general(m);
    const SpectrumResult b = eig_general(m.transpose());
    for (int i = 0; i < 40; ++i)
      CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) <=
            1e-8 * std::abs(a.eigenvalues[39]));
  }
  SUBCASE("multiplicity clustering counts the dimension") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
    const SpectrumResult r = eig_general(m);
    CHECK(r.nu == 4);
    CHECK(r.multiplicities.size() == 1);
    CHECK(r.multiplicities[0] == 4);
  }
}

TEST_CASE("singular values") {
  SUBCASE("diagonal with signs") {
    Eigen::MatrixXd m(2, 2);
    m << -2, 0, 0, 1;
    const SNumberSequence s = singular_values(m);
    CHECK(s.values[0] == doctest::Approx(2.0));
    CHECK(s.values[1] == doctest::Approx(1.0));
  }
  SUBCASE("positive definite: singular values are eigenvalues") {
    Eigen::MatrixXd m = random_symmetric(20, 3);
    m = m * m.transpose() + 20.0 * Eigen::MatrixXd::Identity(20, 20);
    const SNumberSequence s = singular_values(m);
    const SpectrumResult r = eig_sym(m);
    for (int i = 0; i < 20; ++i)
      CHECK(s.values[i] == doctest::Approx(r.eigenvalues[19 - i].real()).epsilon(1e-10));
  }
  SUBCASE("trace identity") {
    const Eigen::MatrixXd m = random_matrix(30, 9);
    const SNumberSequence s = singular_values(m);
    CHECK(s.values.squaredNorm() == doctest::Approx(m.squaredNorm()).epsilon(1e-10));
  }
  SUBCASE("descending order") {
    const SNumberSequence s = singular_values(random_matrix(25, 21));
    for (int i = 1; i < 25; ++i) CHECK(s.values[i] <= s.values[i - 1] + 1e-14);
  }
}

TEST_CASE("resolvent at zero") {
  SUBCASE("diagonal") {
    Eigen::MatrixXd m(2, 2);
    m << 2, 0, 0, 4;
    const Eigen::MatrixXd r = resolvent_at_zero(m);
    CHECK(r(0, 0) == doctest::Approx(0.5));
    CHECK(r(1, 1) == doctest::Approx(0.25));
  }
  SUBCASE("residual certified on random input") {
    double resid = 0.0;
    const Eigen::MatrixXd m =
        random_matrix(40, 31) + 40.0 * Eigen::MatrixXd::Identity(40, 40);
    const Eigen::MatrixXd r = resolvent_at_zero(m, &resid);
    CHECK(resid <= 1e-8);
    Rng rng(5);
    const Eigen::VectorXd f = rng.real_vector(40);
    CHECK((m * (r * f) - f).norm() <= 1e-8 * f.norm());
  }
  SUBCASE("positive definite inverse stays positive definite") {
    Eigen::MatrixXd m = random_symmetric(15, 41);
    m = m * m.transpose() + 15.0 * Eigen::MatrixXd::Identity(15, 15);
    const Eigen::MatrixXd r = resolvent_at_zero(m);
    CHECK((r - r.transpose()).norm() <= 1e-10 * r.norm());
    CHECK(eig_sym(0.5 * (r + r.transpose())).eigenvalues[0].real() > 0.0);
  }
  SUBCASE("singular input aborts") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    CHECK_THROWS_AS(resolvent_at_zero(m), ComputationError);
  }
}

TEST_CASE("field of values") {
  SUBCASE("diagonal projector traces the segment [0, 1]") {
    Eigen::MatrixXd m(2, 2);
    m << 0, 0, 0, 1;
    const FovBoundary fov = field_of_values(m, 64);
    double max_re = -1e300;
    for (const FovPoint& p : fov.points) {
      CHECK(std::abs(p.z.imag()) <= 1e-9);
      CHECK(p.z.real() >= -1e-9);
      CHECK(p.z.real() <= 1.0 + 1e-9);
      max_re = std::max(max_re, p.z.real());
    }
    CHECK(max_re == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("Jordan block: disk of radius 1/2 around 1") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 1, 0, 1;
    const FovBoundary fov = field_of_values(m, 256);
    double worst = 0.0, brute = 0.0;
    for (const FovPoint& p : fov.points)
      worst = std::max(worst, std::abs(std::abs(p.z - std::complex<double>(1, 0)) - 0.5));
    CHECK(worst <= 1e-6);
    // brute-force maximization over random unit vectors stays inside
    Rng rng(77);
    const Eigen::MatrixXcd mc = m.cast<std::complex<double>>();
    for (int k = 0; k < 100000; ++k) {
      Eigen::VectorXcd v = rng.complex_vector(2);
      v.normalize();
      brute = std::max(brute, std::abs(v.dot(mc * v) - std::complex<double>(1, 0)));
    }
    CHECK(brute <= 0.5 + 1e-9);
    CHECK(brute >= 0.49);
  }
  SUBCASE("symmetric input: all points real, spanning the spectrum") {
    const Eigen::MatrixXd m = random_symmetric(12, 55);
    const FovBoundary fov = field_of_values(m, 64);
    const SpectrumResult r = eig_sym(m);
    double lo = 1e300, hi = -1e300;
    for (const FovPoint& p : fov.points) {
      CHECK(std::abs(p.z.imag()) <= 1e-8 * m.norm());
      lo = std::min(lo, p.z.real());
      hi = std::max(hi, p.z.real());
    }
    CHECK(lo == doctest::Approx(r.eigenvalues[0].real()).epsilon(1e-8));
    CHECK(hi == doctest::Approx(r.eigenvalues[11].real()).epsilon(1e-8));
  }
  SUBCASE("rejects too few angles") {
    CHECK_THROWS_AS(field_of_values(Eigen::MatrixXd::Identity(2, 2), 8),
                    std::invalid_argument);
  }
}

TEST_CASE("Lanczos path matches the dense solver above the size threshold") {
  Rng rng(99);
  const int n = 200;
  Eigen::MatrixXcd h(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) h(i, j) = std::complex<double>(rng.normal(), rng.normal());
  h = (h + h.adjoint()).eval();
  const auto [lambda, v] = hermitian_top_eigenpair(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  CHECK(lambda == doctest::Approx(es.eigenvalues()[n - 1]).epsilon(1e-9));
  CHECK((h * v - lambda * v).norm() <= 1e-8 * h.norm());
}

TEST_CASE("sector factorization") {
  // small operator-like pair: H SPD, skew perturbation
  const int n = 24;
  Eigen::MatrixXd h = random_symmetric(n, 123);
  h = h * h.transpose() + double(n) * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd w0 = random_matrix(n, 124);
  const Eigen::MatrixXd w = 0.5 * (w0 - w0.transpose());
  const Eigen::MatrixXd l = h + w;

  const SectorFactorization f = factorize_sector(l, h);
  SUBCASE("reconstruction") { CHECK(f.resid_factorization <= 1e-12); }
  SUBCASE("B is Hermitian, S dominates the identity") {
    CHECK((f.b - f.b.adjoint()).norm() <= 1e-12 * (1.0 + f.b.norm()));
    const SpectrumResult s = eig_sym(f.s);
    CHECK(s.eigenvalues[0].real() >= 1.0 - 1e-10);
    CHECK(f.s_inv_norm <= 1.0 + 1e-10);
  }
  SUBCASE("transposed input flips the sign of B") {
    const SectorFactorization ft = factorize_sector(l.transpose(), h);
    CHECK((f.br + ft.br).norm() <= 1e-10 * f.br.norm());
  }
  SUBCASE("(I +- iB) does not contract") {
    Rng rng(5);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < 20; ++k) {
      const Eigen::VectorXd x = rng.real_vector(n).normalized();
      CHECK(((eye + f.br) * x).norm() >= 1.0 - 1e-12);
      CHECK(((eye - f.br) * x).norm() >= 1.0 - 1e-12);
    }
  }
  SUBCASE("real part of the inverse from the factorization") {
    const Eigen::MatrixXd r = resolvent_at_zero(l);
    const Eigen::MatrixXd v = 0.5 * (r + r.transpose());
    const Eigen::MatrixXd predicted = resolvent_real_part_from_factorization(f);
    CHECK((v - predicted).norm() <= 1e-10 * v.norm());
  }
  SUBCASE("symmetric input degenerates to B = 0 and V = H^{-1}") {
    const SectorFactorization fs = factorize_sector(h, h);
    CHECK(fs.b_norm <= 1e-12);
    CHECK((fs.s - Eigen::MatrixXd::Identity(n, n)).norm() <= 1e-12);
    const Eigen::MatrixXd hinv = resolvent_at_zero(h);
    CHECK((resolvent_real_part_from_factorization(fs) - hinv).norm() <=
          1e-8 * hinv.norm());
  }
  SUBCASE("indefinite H aborts") {
    Eigen::MatrixXd bad = h;
    bad(0, 0) = -1e6;
    CHECK_THROWS_AS(factorize_sector(l, bad), ComputationError);
  }
}

TEST_CASE("numerical range semi-angle") {
  SUBCASE("normal 2x2 with unit rotation part") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 1, -1, 1;
    CHECK(numerical_range_semi_angle(m) == doctest::Approx(M_PI / 4.0).epsilon(1e-13));
  }
  SUBCASE("agrees with tan of the factorization norm and dominates sampling") {
    const int n = 30;
    Eigen::MatrixXd h = random_symmetric(n, 301);
    h = h * h.transpose() + double(n) * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd w0 = random_matrix(n, 302);
    const Eigen::MatrixXd l = h + 0.05 * (w0 - w0.transpose());
    const double theta = numerical_range_semi_angle(l);
    const SectorFactorization f = factorize_sector(l, h);
    CHECK(std::tan(theta) == doctest::Approx(f.b_norm).epsilon(1e-11));
    const FovBoundary fov = field_of_values(l, 256);
    CHECK(fov.max_abs_arg() <= theta + 1e-10);
  }
  SUBCASE("rejects an indefinite real part") {
    Eigen::MatrixXd m(2, 2);
    m << -1, 0, 0, 1;
    CHECK_THROWS_AS(numerical_range_semi_angle(m), ComputationError);
  }
}

TEST_CASE("decay exponent fits") {
  Eigen::VectorXd exact(300), scaled(300), noisy(300);
  for (int i = 1; i <= 300; ++i) {
    exact[i - 1] = std::pow(double(i), -2.0);
    scaled[i - 1] = 5.0 * std::pow(double(i), -1.0);
    noisy[i - 1] = std::pow(double(i), -2.0) * (1.0 + 0.1 * std::sin(double(i)));
  }
  CHECK(decay_exponent(exact, 1, 300).slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(decay_exponent(scaled, 1, 300).slope == doctest::Approx(-1.0).epsilon(1e-12));
  const DecayFit f = decay_exponent(noisy, 10, 200);
  CHECK(std::abs(f.slope + 2.0) <= 0.05);
  CHECK(f.std_error < 0.05);

  Eigen::VectorXd bad(20);
  bad.setOnes();
  bad[7] = -1.0;
  CHECK_THROWS_AS(decay_exponent(bad, 1, 20), std::invalid_argument);
  CHECK_THROWS_AS(decay_exponent(exact, 1, 5), std::invalid_argument);
}
