#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fracspec/run_config.hpp"
#include "fracspec/theory_verifier.hpp"

namespace fracspec {

// Full result of one command: config snapshot, per-level constants table,
// aggregated claim records and the emitted data series.
struct ReportDocument {
  nlohmann::ordered_json config_snapshot;
  nlohmann::ordered_json constants = nlohmann::ordered_json::array();
  std::vector<ClaimRecord> claims;
  std::vector<std::pair<std::string, std::string>> series;

  nlohmann::ordered_json to_json() const;
  // 0 when every claim passes or is not applicable, 1 otherwise
  int exit_code() const;
};

// Writes `<name>_<N>.csv` under dir (17 significant digits, LF endings);
// returns the file name relative to dir.
std::string emit_series(const std::string& name, const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& rows,
                        const std::string& dir, int n);

// command is one of: report, spectrum, sector, weyl, schatten, sumbound,
// oracle. With write_outputs the report JSON and CSV series go to
// cfg.out_dir. Throws ValidationError / ComputationError.
ReportDocument run_command(const std::string& command, const RunConfig& cfg,
                           bool write_outputs = true);

// Self-tests of the quadrature and spectral kernels against analytic
// values; no operator assembly.
std::vector<ClaimRecord> oracle_claims(std::uint64_t seed);

}  // namespace fracspec
