#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "somf/autoseries.hpp"
#include "somf/report.hpp"

namespace somf {

enum class OutputFormat { json, csv, text };

/// Knobs shared by every suite. Tolerances are keyed "suite.check"; see default_tolerances().
struct RunConfig {
  std::map<std::string, double> tolerances;
  std::size_t q_order = 0;       // 0 grows expansions as needed
  std::int64_t c_max = 0;        // 0 keeps each check's default truncation
  std::size_t panels = 2048;     // quadrature panel cap for period polynomials
  Reduction mode = Reduction::repro;
  std::uint64_t seed = 2024;
  OutputFormat format = OutputFormat::json;
  std::int64_t max_level = 60;
  int k_min = -4;
  int k_max = 24;

  RunConfig();

  double tol(const std::string& key) const;
  /// Sets one option from its config-file spelling; throws ConfigError on bad keys or values.
  void set(const std::string& key, const std::string& value);
  nlohmann::json to_json() const;
};

std::map<std::string, double> default_tolerances();

/// Reads key = value lines ('#' comments, blank lines and [section] headers ignored).
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

std::vector<std::string> suite_names();

/// Runs one suite ("all" runs each in turn); reports carry a "suite" parameter and are
/// sorted by identity then parameters within each suite.
std::vector<VerificationReport> run_suite(const std::string& name, const RunConfig& cfg);

/// Failures that count against the exit code; known findings count only when strict.
std::vector<const VerificationReport*> failures(const std::vector<VerificationReport>& reports, bool strict);

std::string library_version();

/// Timing is omitted in repro mode so equal configs give identical bytes.
std::string render(const std::string& suite, const std::vector<VerificationReport>& reports, const RunConfig& cfg);

}  // namespace somf
