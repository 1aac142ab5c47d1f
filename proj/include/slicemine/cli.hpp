#ifndef SLICEMINE_CLI_HPP_
#define SLICEMINE_CLI_HPP_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "slicemine/dataset.hpp"
#include "slicemine/report.hpp"
#include "slicemine/slicer.hpp"

namespace slicemine::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kDataError = 2 };

/// Prefix of the environment variables that back every flag,
/// e.g. SLICEMINE_PVALUE for --pvalue.
inline constexpr const char* kEnvPrefix = "SLICEMINE_";

struct RunConfig {
  std::string input;
  std::string ground_truth;
  std::string prediction;
  std::vector<std::string> heuristics{"categorical", "hpd", "dt"};
  int max_order = 2;
  double p_value_max = 0.05;
  double gap = 0.04;
  double support_fraction = 0.05;
  Index support_floor = 2;
  double epsilon = 0.05;
  double initial_density = 0.90;
  double min_density_floor = 0.10;
  double ci_level = 0.95;
  int max_depth = 5;
  std::vector<std::string> categorical;
  std::vector<std::string> continuous;
  Index categorical_threshold = 10;
  bool all_numeric = false;
  std::string delimiter = ",";
  std::string missing_token;
  std::string format = "json";
  std::string out;  // empty = stdout
  unsigned workers = 1;
  bool self_check = false;

  IngestConfig ingest_config() const;
  SlicerConfig slicer_config() const;
  report::ReportSettings report_settings() const;
  /// Range checks for every knob; throws ConfigError.
  void validate() const;
};

/// Loads, slices and writes the report. Returns an ExitCode; diagnostics and
/// per-group counts go to `log`.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Built-in worked examples and oracle agreement checks. One line per check.
bool self_check(std::ostream& out);

/// Full command-line entry point (flag parsing included).
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slicemine::cli

#endif  // SLICEMINE_CLI_HPP_
