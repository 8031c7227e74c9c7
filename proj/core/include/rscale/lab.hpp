#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rscale/bvp.hpp"
#include "rscale/space_index.hpp"

namespace rscale::lab {

/// Flat key = value configuration with one section level ([bvp], [tolerances]).
struct ExperimentConfig {
  std::string suite;
  std::uint64_t seed = 20240817;
  int sample = 64;
  std::vector<int> truncations = {16, 32, 64};
  std::vector<SpaceIndex> indices;
  BvpSpec bvp = BvpSpec::dirichlet(1);
  std::string output;  // report file name; empty derives <suite>.csv
  std::map<std::string, double> tolerances;

  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig load(const std::string& path);

  /// Normalized text used for hashing and provenance.
  std::string canonical() const;
  std::uint64_t hash() const;

  double tol(const std::string& key, double fallback) const;
  std::string output_name() const;
  void validate() const;
};

struct ReportRow {
  std::string suite;
  std::string case_name;
  std::string param;  // human-readable parameter slot (s, phi, K, eps, ...)
  double measured = 0;
  double bound_lo = 0;
  double bound_hi = 0;
  bool pass = false;
};

struct SuiteResult {
  std::vector<ReportRow> rows;
  bool all_pass() const;
};

struct SuiteInfo {
  std::string name;
  std::string anchor;  // statement the suite exercises
};

/// The registered verification suites, in canonical order.
const std::vector<SuiteInfo>& suite_registry();

/// Execute one suite; throws on unknown suite or invalid config.
SuiteResult run_suite(const ExperimentConfig& config);

/// Run and write <output>.csv plus a <output>.summary sidecar into out_dir
/// (created if missing). Returns 0 when every row passes, 1 otherwise. No
/// partial output is left behind on error.
int run_suite_to_files(const ExperimentConfig& config, const std::string& out_dir,
                       std::ostream& log);

/// Re-validate a written report against its recorded bounds.
int check_report(const std::string& csv_path, std::ostream& log);

/// Helper shared with the CLI: append one row, bounds inclusive.
ReportRow make_row(std::string suite, std::string case_name, std::string param, double measured,
                   double lo, double hi);

}  // namespace rscale::lab
