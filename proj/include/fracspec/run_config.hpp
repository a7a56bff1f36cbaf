#pragma once

#include <cstdint>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracspec/domain_geometry.hpp"
#include "fracspec/frac_calculus.hpp"
#include "fracspec/operator_assembly.hpp"

namespace fracspec {

// Config rejected before any computation; carries the offending field.
struct ValidationError : std::runtime_error {
  std::string field;
  ValidationError(std::string fld, const std::string& message)
      : std::runtime_error(fld + ": " + message), field(std::move(fld)) {}
};

struct RunConfig {
  int dimension = 1;
  std::string shape = "interval";
  std::vector<double> lengths = {1.0};
  std::vector<double> pole = {0.0};
  double alpha = 0.5;
  std::vector<std::vector<double>> aij = {{1.0}};
  double rho0 = 1.0;
  double rho1 = 0.0;
  std::vector<int> n_list = {200};
  int ray_cells = 64;
  double ray_grading = 2.0;
  std::vector<double> p_list = {1.0};
  int fov_angles = 256;
  double sector_margin = 0.05;
  double residual_tol = 1e-8;
  double sandwich_band = 0.02;
  std::uint64_t seed = 12345;
  std::string out_dir = "out";

  static RunConfig from_json(const nlohmann::ordered_json& j);
  static RunConfig from_file(const std::string& path);
  nlohmann::ordered_json to_json() const;

  void validate() const;  // throws ValidationError with the field name
  Domain domain() const;
  Coefficients coefficients() const;
  FracConfig frac_config() const;
};

}  // namespace fracspec
