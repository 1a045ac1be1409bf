#pragma once

#include <chrono>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace somf {

/// Outcome of one identity check.
struct VerificationReport {
  std::string identity;
  std::map<std::string, std::string> params;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
  std::string note;
  /// Recorded discrepancy that is reported rather than patched.
  bool known_finding = false;

  VerificationReport& finish() {
    pass = residual <= tolerance;
    return *this;
  }
};

VerificationReport make_report(std::string identity, double residual, double tolerance,
                               std::map<std::string, std::string> params = {}, std::string note = "");

nlohmann::json to_json(const VerificationReport& r, bool with_timing = true);

std::string format_param(double x);
std::string format_param(std::complex<double> z);

/// Wall-clock helper for report timing.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace somf
