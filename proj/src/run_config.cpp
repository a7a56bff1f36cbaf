#include "fracspec/run_config.hpp"

#include <fstream>

namespace fracspec {

using ojson = nlohmann::ordered_json;

namespace {

template <typename T>
T get_or(const ojson& j, const char* key, T fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(path, "has the wrong type");
  }
}

}  // namespace

RunConfig RunConfig::from_json(const ojson& j) {
  RunConfig c;
  c.dimension = get_or<int>(j, "dimension", c.dimension, "dimension");
  if (j.contains("domain")) {
    const ojson& d = j.at("domain");
    c.shape = get_or<std::string>(d, "shape", c.shape, "domain.shape");
    c.lengths = get_or<std::vector<double>>(d, "lengths", c.lengths, "domain.lengths");
    c.pole = get_or<std::vector<double>>(d, "pole", c.pole, "domain.pole");
  }
  c.alpha = get_or<double>(j, "alpha", c.alpha, "alpha");
  if (j.contains("coefficients")) {
    const ojson& co = j.at("coefficients");
    c.aij = get_or<std::vector<std::vector<double>>>(co, "aij", c.aij,
                                                     "coefficients.aij");
    c.rho0 = get_or<double>(co, "rho0", c.rho0, "coefficients.rho0");
    c.rho1 = get_or<double>(co, "rho1", c.rho1, "coefficients.rho1");
  }
  if (j.contains("grid"))
    c.n_list = get_or<std::vector<int>>(j.at("grid"), "N_list", c.n_list, "grid.N_list");
  if (j.contains("ray")) {
    c.ray_cells = get_or<int>(j.at("ray"), "M", c.ray_cells, "ray.M");
    c.ray_grading = get_or<double>(j.at("ray"), "q", c.ray_grading, "ray.q");
  }
  if (j.contains("schatten"))
    c.p_list = get_or<std::vector<double>>(j.at("schatten"), "p_list", c.p_list,
                                           "schatten.p_list");
  if (j.contains("fov"))
    c.fov_angles = get_or<int>(j.at("fov"), "n_angles", c.fov_angles, "fov.n_angles");
  if (j.contains("tolerances")) {
    const ojson& t = j.at("tolerances");
    c.sector_margin = get_or<double>(t, "sector_margin", c.sector_margin,
                                     "tolerances.sector_margin");
    c.residual_tol = get_or<double>(t, "residual", c.residual_tol, "tolerances.residual");
    c.sandwich_band = get_or<double>(t, "sandwich_band", c.sandwich_band,
                                     "tolerances.sandwich_band");
  }
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed, "seed");
  c.out_dir = get_or<std::string>(j, "out_dir", c.out_dir, "out_dir");
  c.validate();
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open file " + path);
  ojson j;
  try {
    j = ojson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config", std::string("JSON parse error: ") + e.what());
  }
  return from_json(j);
}

ojson RunConfig::to_json() const {
  return ojson{
      {"dimension", dimension},
      {"domain", {{"shape", shape}, {"lengths", lengths}, {"pole", pole}}},
      {"alpha", alpha},
      {"coefficients", {{"aij", aij}, {"rho0", rho0}, {"rho1", rho1}}},
      {"grid", {{"N_list", n_list}}},
      {"ray", {{"M", ray_cells}, {"q", ray_grading}}},
      {"schatten", {{"p_list", p_list}}},
      {"fov", {{"n_angles", fov_angles}}},
      {"tolerances",
       {{"sector_margin", sector_margin},
        {"residual", residual_tol},
        {"sandwich_band", sandwich_band}}},
      {"seed", seed},
      {"out_dir", out_dir}};
}

void RunConfig::validate() const {
  if (dimension != 1 && dimension != 2)
    throw ValidationError("dimension", "must be 1 or 2");
  if (shape != "interval" && shape != "rectangle")
    throw ValidationError("domain.shape", "must be 'interval' or 'rectangle'");
  if (dimension == 1 && shape != "interval")
    throw ValidationError("domain.shape", "dimension 1 requires an interval");
  if (dimension == 2 && shape != "rectangle")
    throw ValidationError("domain.shape", "dimension 2 requires a rectangle");
  if (static_cast<int>(lengths.size()) != dimension)
    throw ValidationError("domain.lengths", "needs one entry per dimension");
  for (double l : lengths)
    if (!(l > 0.0)) throw ValidationError("domain.lengths", "extents must be positive");
  if (static_cast<int>(pole.size()) != dimension)
    throw ValidationError("domain.pole", "needs one entry per dimension");
  if (!(alpha > 0.01 && alpha < 0.99))
    throw ValidationError("alpha", "must lie in (0.01, 0.99)");
  if (static_cast<int>(aij.size()) != dimension)
    throw ValidationError("coefficients.aij", "must be a " + std::to_string(dimension) +
                                                  "x" + std::to_string(dimension) +
                                                  " matrix");
  for (const auto& row : aij)
    if (static_cast<int>(row.size()) != dimension)
      throw ValidationError("coefficients.aij", "rows must have one entry per dimension");
  if (n_list.empty()) throw ValidationError("grid.N_list", "must not be empty");
  for (int n : n_list)
    if (n < 4) throw ValidationError("grid.N_list", "entries must be >= 4");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw ValidationError("grid.N_list", "entries must be strictly increasing");
  if (ray_cells < 8) throw ValidationError("ray.M", "must be >= 8");
  if (!(ray_grading >= 1.0)) throw ValidationError("ray.q", "must be >= 1");
  if (p_list.empty()) throw ValidationError("schatten.p_list", "must not be empty");
  for (double p : p_list)
    if (!(p >= 1.0)) throw ValidationError("schatten.p_list", "entries must be >= 1");
  if (fov_angles < 16) throw ValidationError("fov.n_angles", "must be >= 16");
  if (!(sector_margin >= 0.0))
    throw ValidationError("tolerances.sector_margin", "must be >= 0");
  if (!(residual_tol > 0.0)) throw ValidationError("tolerances.residual", "must be > 0");
  if (!(sandwich_band >= 0.0))
    throw ValidationError("tolerances.sandwich_band", "must be >= 0");
  if (out_dir.empty()) throw ValidationError("out_dir", "must not be empty");

  // cross-field checks that the modules would reject later, surfaced here
  // with field names
  try {
    domain();
  } catch (const std::invalid_argument& e) {
    throw ValidationError("domain", e.what());
  }
  try {
    coefficients().validate(domain(), alpha);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("coefficients", e.what());
  }
}

Domain RunConfig::domain() const {
  if (dimension == 1) return Domain::interval(lengths[0], pole[0]);
  return Domain::rectangle(lengths[0], lengths[1], {pole[0], pole[1]});
}

Coefficients RunConfig::coefficients() const {
  Coefficients c;
  c.aij = Eigen::Matrix2d::Identity();
  for (int i = 0; i < dimension; ++i)
    for (int j = 0; j < dimension; ++j) c.aij(i, j) = aij[i][j];
  c.rho0 = rho0;
  c.rho1 = rho1;
  return c;
}

FracConfig RunConfig::frac_config() const {
  FracConfig f;
  f.alpha = alpha;
  f.dimension = dimension;
  f.grading_q = ray_grading;
  f.cells_per_ray = ray_cells;
  f.truncation_eps = 0.0;
  return f;
}

}  // namespace fracspec
