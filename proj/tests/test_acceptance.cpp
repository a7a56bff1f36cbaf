// Acceptance suite: one verdict line per criterion, every tolerance pinned
// in code. Heavier reference problems are shared between criteria through a
// lazily built cache.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "fracspec/pipeline.hpp"
#include "fracspec/rng.hpp"

using namespace fracspec;
namespace fs = std::filesystem;

namespace {

struct Ref {
  RunConfig cfg;
  Grid grid;
  FracConfig fc;
  Coefficients co;
  Eigen::MatrixXd ell, l, h, r, v;
  OperatorConstants k;
  SectorParams params;
  SpectrumResult eig_h, eig_l, eig_r;
  Eigen::VectorXd v_desc, y0d;
  SNumberSequence s_r;
  double theta_m = 0.0;
  std::optional<FovBoundary> fov_l, fov_r;
  std::optional<SectorFactorization> fac;

  const FovBoundary& fovL() {
    if (!fov_l) fov_l = field_of_values(l, 256);
    return *fov_l;
  }
  const FovBoundary& fovR() {
    if (!fov_r) fov_r = field_of_values(r, 256);
    return *fov_r;
  }
  const SectorFactorization& factor() {
    if (!fac) fac = factorize_sector(l, h);
    return *fac;
  }
};

RunConfig reference_config(int dim, int n) {
  RunConfig c;
  c.dimension = dim;
  c.shape = dim == 1 ? "interval" : "rectangle";
  c.lengths = dim == 1 ? std::vector<double>{1.0} : std::vector<double>{1.0, 1.0};
  c.pole = dim == 1 ? std::vector<double>{0.0} : std::vector<double>{0.0, 0.0};
  c.alpha = 0.5;
  c.aij = dim == 1 ? std::vector<std::vector<double>>{{1.0}}
                   : std::vector<std::vector<double>>{{1.0, 0.0}, {0.0, 1.0}};
  c.rho0 = 1.0;
  c.n_list = {n};
  c.ray_cells = 64;
  c.p_list = dim == 1 ? std::vector<double>{1.0, 2.0} : std::vector<double>{2.0};
  c.fov_angles = 256;
  c.seed = 12345;
  return c;
}

Ref& ref(int dim, int n) {
  static std::map<std::pair<int, int>, std::unique_ptr<Ref>> cache;
  auto& slot = cache[{dim, n}];
  if (!slot) {
    auto rr = std::make_unique<Ref>();
    rr->cfg = reference_config(dim, n);
    rr->grid = build_grid(rr->cfg.domain(), n);
    rr->fc = rr->cfg.frac_config();
    rr->co = rr->cfg.coefficients();
    rr->ell = assemble_elliptic(rr->co, rr->grid).entries;
    const OperatorMatrix frac = assemble_fractional(rr->co, rr->fc, rr->grid);
    rr->l = rr->ell + frac.entries;
    rr->h = real_component(rr->l);
    rr->k = operator_constants(rr->co, rr->fc, rr->grid, frac);
    rr->params = sector_params(rr->k, sector_params(rr->k, 1.0).xi);
    rr->eig_h = eig_sym(rr->h);
    rr->eig_l = eig_general(rr->l);
    rr->r = resolvent_at_zero(rr->l);
    {
      const int m = static_cast<int>(rr->l.rows());
      Eigen::VectorXcd vals(m);
      Eigen::MatrixXcd vecs(m, m);
      for (int i = 0; i < m; ++i) {
        vals[i] = 1.0 / rr->eig_l.eigenvalues[m - 1 - i];
        vecs.col(i) = rr->eig_l.eigenvectors.col(m - 1 - i);
      }
      rr->eig_r = make_spectrum_result(vals, vecs, rr->r.cast<std::complex<double>>());
    }
    rr->v = real_component(rr->r);
    {
      const SpectrumResult vs = eig_sym(rr->v);
      const int m = static_cast<int>(vs.eigenvalues.size());
      rr->v_desc.resize(m);
      for (int i = 0; i < m; ++i) rr->v_desc[i] = vs.eigenvalues[m - 1 - i].real();
    }
    rr->s_r = singular_values(rr->r, "resolvent");
    rr->theta_m = numerical_range_semi_angle(rr->l);
    rr->y0d = rr->k.ellipticity * dirichlet_laplace_spectrum_fd(rr->grid).array() +
              rr->k.eta_inv_sq;
    slot = std::move(rr);
  }
  return *slot;
}

void report_line(int criterion, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << detail
            << std::endl;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(FRACSPEC_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double sample_rel_l2_error(double alpha, int cells) {
  // derivative of the identity profile against the classical power law
  double num = 0.0, den = 0.0;
  FracConfig c;
  c.alpha = alpha;
  c.cells_per_ray = cells;
  for (int k = 1; k <= 10; ++k) {
    const double r = 0.1 * k;
    const auto t = graded_partition(r, cells, 2.0);
    std::vector<double> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = t[i];
    const double got = marchaud_left_limit(RayFunction(t, v), c, r);
    const double exact = std::pow(r, 1.0 - alpha) / std::tgamma(2.0 - alpha);
    num += (got - exact) * (got - exact);
    den += exact * exact;
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("criterion 01: fractional-calculus oracles") {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double alpha : {0.25, 0.5, 0.75})
    worst = std::max(worst, sample_rel_l2_error(alpha, 256));

  // convergence order in 1/M; the linear profile is reproduced exactly by
  // the product rule, so the order is measured on a curved profile and the
  // linear one must sit at the accuracy floor
  std::vector<double> errs;
  const double r = 0.7, alpha = 0.5;
  const double exact = std::pow(r, 1.0 - alpha) / std::tgamma(2.0 - alpha) -
                       2.0 * std::pow(r, 2.0 - alpha) / std::tgamma(3.0 - alpha);
  for (int cells : {32, 64, 128, 256}) {
    FracConfig c;
    c.alpha = alpha;
    c.cells_per_ray = cells;
    const auto tt = graded_partition(r, cells, 2.0);
    std::vector<double> v(tt.size());
    for (std::size_t i = 0; i < tt.size(); ++i) v[i] = tt[i] * (1.0 - tt[i]);
    errs.push_back(std::abs(marchaud_left_limit(RayFunction(tt, v), c, r) - exact));
  }
  double order = 0.0;
  for (std::size_t i = 1; i < errs.size(); ++i) order += std::log2(errs[i - 1] / errs[i]);
  order /= errs.size() - 1;
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const bool ok = worst <= 1e-3 && order >= 1.5 && seconds <= 5.0;
  std::ostringstream d;
  d << "power-law rel L2 error " << worst << " (<= 1e-3), order " << order
    << " (>= 1.5), runtime " << seconds << " s (<= 5)";
  report_line(1, ok, d.str());
  CHECK(worst <= 1e-3);
  CHECK(order >= 1.5);
  CHECK(seconds <= 5.0);
}

TEST_CASE("criterion 02: inversion identity") {
  FracConfig c;
  c.alpha = 0.5;
  c.cells_per_ray = 64;
  const ClaimRecord rec = check_inversion_identity(c, 1.0);
  const auto errs = rec.measured.at("errors");
  const auto factors = rec.measured.at("reduction_factors");
  const bool ok = rec.passed();
  std::ostringstream d;
  d << "errors " << errs.dump() << ", reduction factors " << factors.dump()
    << " (final <= 1e-3, factors >= 2)";
  report_line(2, ok, d.str());
  CHECK(ok);
}

TEST_CASE("criterion 03: discrete Laplacian spectra") {
  // 1D, N = 400: first 20 eigenvalues within 1% of (i pi)^2
  double worst_1d = 0.0;
  {
    const Grid g = build_grid(Domain::interval(1.0), 400);
    Coefficients co;
    const SpectrumResult es = eig_sym(assemble_elliptic(co, g).entries);
    for (int i = 1; i <= 20; ++i) {
      const double exact = M_PI * M_PI * i * i;
      worst_1d = std::max(worst_1d, std::abs(es.eigenvalues[i - 1].real() - exact) / exact);
    }
  }
  // 2D, N = 32: first 10 within 2%, assembly + eigensolve within 60 s
  const auto t0 = std::chrono::steady_clock::now();
  double worst_2d = 0.0;
  {
    const Grid g = build_grid(Domain::rectangle(1.0, 1.0), 32);
    Coefficients co;
    FracConfig fc;
    fc.alpha = 0.5;
    fc.dimension = 2;
    const Eigen::MatrixXd ell = assemble_elliptic(co, g).entries;
    const Eigen::MatrixXd fr = assemble_fractional(co, fc, g).entries;
    const SpectrumResult hs = eig_sym(real_component(ell + fr));
    (void)hs;
    const SpectrumResult ell_spec = eig_sym(ell);
    const Eigen::VectorXd exact = dirichlet_laplace_spectrum(g.domain, 10);
    for (int i = 0; i < 10; ++i)
      worst_2d = std::max(worst_2d,
                          std::abs(ell_spec.eigenvalues[i].real() - exact[i]) / exact[i]);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = worst_1d <= 0.01 && worst_2d <= 0.02 && seconds <= 60.0;
  std::ostringstream d;
  d << "1D worst rel dev " << worst_1d << " (<= 0.01), 2D worst rel dev " << worst_2d
    << " (<= 0.02), 2D assembly+eigensolve " << seconds << " s (<= 60)";
  report_line(3, ok, d.str());
  CHECK(worst_1d <= 0.01);
  CHECK(worst_2d <= 0.02);
  CHECK(seconds <= 60.0);
}

TEST_CASE("criterion 04: gradient bound on smooth samples") {
  bool ok = true;
  std::ostringstream d;
  for (auto [dim, n] : {std::pair{1, 400}, std::pair{2, 32}}) {
    Ref& rr = ref(dim, n);
    const ClaimRecord rec = check_fractional_gradient_bound(rr.grid, rr.fc, 20, 12345);
    ok = ok && rec.passed() && rec.measured.at("violations").get<int>() == 0;
    d << dim << "D max ratio/K "
      << rec.measured.at("max_ratio").get<double>() / rec.measured.at("K").get<double>()
      << " (<= 1.02), violations " << rec.measured.at("violations") << "; ";
  }
  report_line(4, ok, d.str());
  CHECK(ok);
}

TEST_CASE("criterion 05: sector enclosure with shrinking margin") {
  bool ok = true;
  std::ostringstream d;
  for (auto [dim, levels] :
       {std::pair<int, std::vector<int>>{1, {200, 400}},
        std::pair<int, std::vector<int>>{2, {16, 32}}}) {
    double prev_needed = 1e300;
    for (int n : levels) {
      Ref& rr = ref(dim, n);
      const ClaimRecord rec = check_sector_enclosure("sector_enclosure_operator",
                                                     rr.fovL(), rr.eig_l, rr.params, 0.05);
      const double needed = rec.measured.at("margin_needed").get<double>();
      const bool shrink = std::max(0.0, needed) <= std::max(0.0, prev_needed) + 1e-12;
      ok = ok && rec.passed() && shrink;
      d << dim << "D N=" << n << " margin_needed " << needed << "; ";
      prev_needed = needed;
    }
  }
  d << "(all points inside at margin 0.05, needed margin non-increasing)";
  report_line(5, ok, d.str());
  CHECK(ok);
}

TEST_CASE("criterion 06: sector formula consistency under fuzzing") {
  Rng rng(2026);
  double worst_gamma = 0.0, worst_tan = 0.0;
  bool pattern = true;
  for (int trial = 0; trial < 1000; ++trial) {
    OperatorConstants k;
    k.ellipticity = std::pow(10.0, rng.uniform(-2.0, 2.0));
    k.coeff_norm = std::pow(10.0, rng.uniform(-2.0, 2.0));
    k.mixed_bound = std::pow(10.0, rng.uniform(-2.0, 2.0));
    k.eta_inv_sq = std::pow(10.0, rng.uniform(-2.0, 2.0));
    k.rho_min = k.rho_max = 1.0;
    k.diameter = 1.0;
    const SectorParams at_xi = sector_params(k, sector_params(k, 1.0).xi);
    worst_gamma =
        std::max(worst_gamma, std::abs(at_xi.gamma) / std::max(1.0, k.eta_inv_sq));
    const double tan0 = std::tan(at_xi.theta0);
    worst_tan = std::max(worst_tan, std::abs(tan0 - 1.0 / at_xi.b) / tan0);
    pattern = pattern && sector_params(k, at_xi.xi * 0.5).gamma < 0.0 &&
              sector_params(k, at_xi.xi * 2.0).gamma >= 0.0;
  }
  const bool ok = worst_gamma <= 1e-12 && worst_tan <= 1e-10 && pattern;
  std::ostringstream d;
  d << "1000 fuzz cases: |gamma(xi)| <= " << worst_gamma << " (1e-12), tan mismatch <= "
    << worst_tan << " (1e-10), sign pattern " << (pattern ? "ok" : "broken");
  report_line(6, ok, d.str());
  CHECK(ok);
}

TEST_CASE("criterion 07: factorization identities") {
  bool ok = true;
  std::ostringstream d;
  for (auto [dim, n] : {std::pair{1, 400}, std::pair{2, 32}}) {
    Ref& rr = ref(dim, n);
    const SectorFactorization& f = rr.factor();
    const SectorFactorization ft = factorize_sector(rr.l.transpose(), rr.h);
    const double neg = (f.br + ft.br).norm() / f.br.norm();
    const Eigen::MatrixXd pred = resolvent_real_part_from_factorization(f);
    const double resid_v = (rr.v - pred).norm() / rr.v.norm();
    const bool here = f.resid_factorization <= 1e-8 && resid_v <= 1e-8 &&
                      f.b_norm <= std::tan(rr.theta_m) + 1e-8 &&
                      f.s_inv_norm <= 1.0 + 1e-10 && neg <= 1e-10;
    ok = ok && here;
    d << dim << "D: recon " << f.resid_factorization << ", V-identity " << resid_v
      << ", |B|-tan(theta) " << f.b_norm - std::tan(rr.theta_m) << ", |S^-1| "
      << f.s_inv_norm << ", negation " << neg << "; ";
  }
  report_line(7, ok, d.str());
  CHECK(ok);
}

TEST_CASE("criterion 08: eigenvalue decay of V and the spectral sandwich") {
  bool ok = true;
  std::ostringstream d;
  for (auto [dim, levels] :
       {std::pair<int, std::vector<int>>{1, {200, 400}},
        std::pair<int, std::vector<int>>{2, {16, 32}}}) {
    double prev_up = 1e300;
    for (int n : levels) {
      Ref& rr = ref(dim, n);
      if (n == levels.back()) {
        const ClaimRecord dec = check_resolvent_real_eig_decay(rr.v_desc, dim, 0.15);
        ok = ok && dec.passed();
        d << dim << "D slope " << dec.measured.at("slope").get<double>() << " (-"
          << 2.0 / dim << " +- 0.15); ";
      }
      const ClaimRecord sw = check_spectral_sandwich(rr.eig_h, rr.k, rr.grid, 0.02);
      const double up = sw.measured.at("upper_violation_discrete").get<double>();
      ok = ok && sw.passed() && std::max(0.0, up) <= std::max(0.0, prev_up) + 1e-12;
      prev_up = up;
      d << dim << "D N=" << n << " sandwich[lo "
        << sw.measured.at("lower_violation_discrete").get<double>() << ", up " << up
        << "]; ";
    }
  }
  report_line(8, ok, d.str());
  CHECK(ok);
}

TEST_CASE("criterion 09: s-number decay and membership boundary") {
  bool ok = true;
  std::ostringstream d;
  for (auto [dim, n] : {std::pair{1, 400}, std::pair{2, 32}}) {
    Ref& rr = ref(dim, n);
    const ClaimRecord dec = check_snumber_decay(rr.s_r, dim, 0.15);
    ok = ok && dec.passed();
    d << dim << "D s-slope " << dec.measured.at("slope").get<double>() << "; ";
  }
  // trace-class certificate on the segment
  {
    Ref& rr = ref(1, 400);
    const ClaimRecord cls = schatten_classify(rr.s_r, 1.0, 1);
    ok = ok && cls.passed() && cls.measured.at("member").get<bool>();
    d << "1D p=1 member " << cls.measured.at("member") << "; ";
  }
  // synthetic necessity boundary
  for (auto [nn, p, expected] :
       {std::tuple{1, 1.0, true}, std::tuple{2, 1.0, false}, std::tuple{2, 2.0, true},
        std::tuple{2, 3.0, true}}) {
    SNumberSequence s;
    s.values.resize(400);
    for (int i = 1; i <= 400; ++i) s.values[i - 1] = std::pow(double(i), -2.0 / nn);
    const ClaimRecord cls = schatten_classify(s, p, nn);
    const bool here = cls.passed() && cls.measured.at("member").get<bool>() == expected;
    ok = ok && here;
    d << "(n=" << nn << ",p=" << p << ") " << (here ? "ok" : "wrong") << "; ";
  }
  report_line(9, ok, d.str());
  CHECK(ok);
}

TEST_CASE("criterion 10: completeness condition") {
  bool ok = true;
  std::ostringstream d;
  for (auto [dim, n] : {std::pair{1, 400}, std::pair{2, 32}}) {
    Ref& rr = ref(dim, n);
    const ClaimRecord rec =
        completeness_condition(rr.params, rr.fovR(), rr.eig_r, dim, 0.05);
    const double cone = rec.measured.at("cone_angle").get<double>();
    const bool flag = rec.measured.at("completeness_flag").get<bool>();
    const int rank = rec.measured.at("eigenvector_rank").get<int>();
    const bool here = rec.passed() && flag && cone > 0.0 &&
                      cone <= 2.0 * rr.params.theta0 + 0.05 && rank == rr.grid.n_dof();
    ok = ok && here;
    d << dim << "D cone " << cone << " (<= " << 2.0 * rr.params.theta0 + 0.05
      << "), flag " << flag << ", rank " << rank << "/" << rr.grid.n_dof() << "; ";
  }
  report_line(10, ok, d.str());
  CHECK(ok);
}

TEST_CASE("criterion 11: eigenvalue sum bounds and tail decay") {
  bool ok = true;
  std::ostringstream d;
  auto run_case = [&](int dim, int n, double p) {
    Ref& rr = ref(dim, n);
    const ClaimRecord rec = eigenvalue_sum_bound(rr.eig_r, rr.v_desc, rr.factor(),
                                                 rr.params, rr.theta_m, p, rr.y0d,
                                                 nullptr);
    ok = ok && rec.passed();
    d << dim << "D N=" << n << " p=" << p << " ratios["
      << rec.measured.at("max_ratio_snumber_bound").get<double>() << ", "
      << rec.measured.at("max_ratio_comparison_bound").get<double>() << "]; ";
  };
  for (int n : {200, 400})
    for (double p : {1.0, 2.0}) run_case(1, n, p);
  run_case(2, 32, 2.0);
  for (auto [dim, n] : {std::pair{1, 400}, std::pair{2, 32}}) {
    Ref& rr = ref(dim, n);
    const ClaimRecord tail = check_eigenvalue_tail_decay(rr.eig_r, dim);
    ok = ok && tail.passed();
    d << dim << "D tail slope " << tail.measured.at("slope").get<double>() << " (<= "
      << -2.0 / dim + 0.1 << "); ";
  }
  report_line(11, ok, d.str());
  CHECK(ok);
}

TEST_CASE("criterion 12: subordination bound") {
  bool ok = true;
  std::ostringstream d;
  for (auto [dim, n] : {std::pair{1, 400}, std::pair{2, 32}}) {
    Ref& rr = ref(dim, n);
    const ClaimRecord rec = subordination_check(rr.l, rr.h, rr.grid.ip_weight(),
                                                rr.theta_m, 100, 12345);
    ok = ok && rec.passed() && rec.measured.at("violations").get<int>() == 0;
    d << dim << "D violations " << rec.measured.at("violations") << " lower ratio "
      << rec.measured.at("min_lower_ratio").get<double>() << "; ";
  }
  report_line(12, ok, d.str());
  CHECK(ok);
}

TEST_CASE("criterion 13: determinism and the exit-code contract") {
  const fs::path base = fs::temp_directory_path() / "fracspec_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);

  auto write_config = [&](const std::string& name, double alpha, double rho0,
                          double residual_tol, int n) {
    RunConfig c;
    c.n_list = {n};
    c.ray_cells = 16;
    c.fov_angles = 32;
    c.rho0 = rho0;
    c.residual_tol = residual_tol;
    c.out_dir = (base / (name + "_out")).string();
    nlohmann::ordered_json j = c.to_json();
    j["alpha"] = alpha;  // keep even out-of-range values in the file
    const fs::path p = base / (name + ".json");
    std::ofstream out(p);
    out << j.dump(2) << "\n";
    return p.string();
  };

  // the passing config needs fit windows long enough for the decay claims
  const std::string good = write_config("good", 0.5, 1.0, 1e-8, 64);
  const std::string claim_fail = write_config("claim_fail", 0.5, 1.0, 1e-30, 24);
  const std::string invalid = write_config("invalid", 1.5, 1.0, 1e-8, 24);
  const std::string aborting = write_config("aborting", 0.5, 0.0, 1e-8, 24);

  const int code_good_a =
      run_tool("report --config " + good + " --out " + (base / "run_a").string());
  const int code_good_b =
      run_tool("report --config " + good + " --out " + (base / "run_b").string());
  bool identical = code_good_a == 0 && code_good_b == 0;
  int files_compared = 0;
  if (identical) {
    for (const auto& entry : fs::directory_iterator(base / "run_a")) {
      const fs::path other = base / "run_b" / entry.path().filename();
      std::string sa = slurp(entry.path());
      std::string sb = slurp(other);
      if (entry.path().filename() == "report.json") {
        // the report embeds the config snapshot including out_dir
        auto ja = nlohmann::ordered_json::parse(sa);
        auto jb = nlohmann::ordered_json::parse(sb);
        ja["config"].erase("out_dir");
        jb["config"].erase("out_dir");
        sa = ja.dump();
        sb = jb.dump();
      }
      identical = identical && !sa.empty() && sa == sb;
      ++files_compared;
    }
  }

  const int code_fail = run_tool("report --config " + claim_fail);
  const int code_invalid = run_tool("report --config " + invalid);
  const int code_abort = run_tool("report --config " + aborting);

  const bool ok = identical && files_compared > 1 && code_fail == 1 &&
                  code_invalid == 3 && code_abort == 2;
  std::ostringstream d;
  d << "repeat runs byte-identical over " << files_compared << " files ("
    << (identical ? "yes" : "NO") << "), exit codes pass/fail/invalid/abort = "
    << code_good_a << "/" << code_fail << "/" << code_invalid << "/" << code_abort
    << " (0/1/3/2)";
  report_line(13, ok, d.str());
  CHECK(ok);
}
