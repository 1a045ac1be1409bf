#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "somf/group.hpp"
#include "somf/qseries.hpp"

namespace somf {

inline constexpr std::size_t default_order = 512;

struct FormSpec {
  std::string label;
  std::vector<EtaFactor> recipe;  // empty for forms loaded from a file
  int weight = 0;
  std::int64_t level = 1;
  GroupKind group = GroupKind::gamma0;
  std::string note;
};

/// Shared handle to a holomorphic form given by its expansion at infinity.
/// Forms with an eta-quotient recipe extend their expansion on demand.
class Form {
 public:
  Form() = default;
  explicit Form(FormSpec spec, std::size_t order = default_order);
  /// A form known only through a fixed expansion.
  static Form from_series(FracQSeries series, std::string note = "");

  const std::string& label() const;
  int weight() const;
  std::int64_t level() const;
  GroupKind group() const;
  const FormSpec& spec() const;
  bool growable() const;
  /// True when every exponent is positive.
  bool cuspidal() const;

  /// Expansion with at least min_order terms (or the stored expansion if it cannot grow).
  std::shared_ptr<const FracQSeries> series(std::size_t min_order = 0) const;
  /// n-th antiderivative (n > 0) or |n|-th derivative (n < 0).
  std::shared_ptr<const FracQSeries> integrated(int n, std::size_t min_order = 0) const;
  std::size_t order() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// delta, f11, f11sq, kz, eta4.
Form builtin_form(const std::string& label, std::size_t order = default_order);
std::vector<std::string> builtin_labels();

/// Group the form is modular for.
GroupContext form_context(const Form& f);
Form load_form(const std::string& path);
/// A builtin label or a path to a q-expansion file.
Form resolve_form(const std::string& name, std::size_t order = default_order);

}  // namespace somf
