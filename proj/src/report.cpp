#include "somf/report.hpp"

#include <cmath>
#include <cstdio>

#include "somf/qseries.hpp"

namespace somf {

VerificationReport make_report(std::string identity, double residual, double tolerance,
                               std::map<std::string, std::string> params, std::string note) {
  VerificationReport r;
  r.identity = std::move(identity);
  r.residual = residual;
  r.tolerance = tolerance;
  r.params = std::move(params);
  r.note = std::move(note);
  // NaN residuals never pass.
  r.pass = residual <= tolerance;
  return r;
}

nlohmann::json to_json(const VerificationReport& r, bool with_timing) {
  nlohmann::json j;
  j["identity"] = r.identity;
  j["params"] = r.params;
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  if (r.known_finding) j["known_finding"] = true;
  if (!r.note.empty()) j["note"] = r.note;
  if (with_timing) j["seconds"] = r.seconds;
  return j;
}

std::string format_param(double x) { return format_double(x); }

std::string format_param(std::complex<double> z) {
  return format_double(z.real()) + (std::signbit(z.imag()) ? "" : "+") + format_double(z.imag()) + "i";
}

}  // namespace somf
