#include "somf/forms.hpp"

#include <filesystem>
#include <map>
#include <mutex>

namespace somf {

struct Form::Impl {
  FormSpec spec;
  mutable std::mutex mu;
  std::shared_ptr<const FracQSeries> base;
  mutable std::map<int, std::shared_ptr<const FracQSeries>> derived;

  void grow(std::size_t order) {
    auto s = std::make_shared<FracQSeries>(eta_quotient(spec.recipe, order));
    s->label = spec.label;
    s->weight = spec.weight;
    s->level = spec.level;
    base = std::move(s);
    derived.clear();
  }
};

Form::Form(FormSpec spec, std::size_t order) : impl_(std::make_shared<Impl>()) {
  if (spec.recipe.empty()) throw DomainError("form spec without eta-quotient recipe");
  int w2 = 0;
  for (const auto& f : spec.recipe) w2 += f.exponent;
  if (w2 != 2 * spec.weight) throw SchemaError("declared weight does not match eta-quotient recipe: " + spec.label);
  impl_->spec = std::move(spec);
  impl_->grow(std::max<std::size_t>(order, 1));
}

Form Form::from_series(FracQSeries series, std::string note) {
  Form f;
  f.impl_ = std::make_shared<Impl>();
  f.impl_->spec.label = series.label;
  f.impl_->spec.weight = series.weight;
  f.impl_->spec.level = series.level;
  f.impl_->spec.note = std::move(note);
  f.impl_->base = std::make_shared<const FracQSeries>(std::move(series));
  return f;
}

const std::string& Form::label() const { return impl_->spec.label; }
int Form::weight() const { return impl_->spec.weight; }
std::int64_t Form::level() const { return impl_->spec.level; }
GroupKind Form::group() const { return impl_->spec.group; }
const FormSpec& Form::spec() const { return impl_->spec; }
bool Form::growable() const { return !impl_->spec.recipe.empty(); }

bool Form::cuspidal() const {
  auto s = series();
  return s->is_zero() || s->exponent_exact(0) > 0;
}

std::size_t Form::order() const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  return impl_->base->order();
}

std::shared_ptr<const FracQSeries> Form::series(std::size_t min_order) const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  if (impl_->base->order() < min_order && growable()) {
    std::size_t n = impl_->base->order();
    while (n < min_order) n *= 2;
    impl_->grow(n);
  }
  return impl_->base;
}

std::shared_ptr<const FracQSeries> Form::integrated(int n, std::size_t min_order) const {
  if (n == 0) return series(min_order);
  auto b = series(min_order);
  std::lock_guard<std::mutex> lock(impl_->mu);
  auto it = impl_->derived.find(n);
  if (it != impl_->derived.end() && it->second->order() == b->order()) return it->second;
  auto s = std::make_shared<const FracQSeries>(antiderivative(*b, n));
  impl_->derived[n] = s;
  return s;
}

namespace {

FormSpec builtin_spec(const std::string& label) {
  FormSpec s;
  s.label = label;
  if (label == "delta") {
    s.recipe = {{1, 24}};
    s.weight = 12;
    s.level = 1;
    s.note = "discriminant, eta(z)^24";
  } else if (label == "f11") {
    s.recipe = {{1, 2}, {11, 2}};
    s.weight = 2;
    s.level = 11;
    s.note = "weight 2 newform of level 11, eta(z)^2 eta(11z)^2";
  } else if (label == "f11sq") {
    s.recipe = {{1, 4}, {11, 4}};
    s.weight = 4;
    s.level = 11;
    s.note = "weight 4 cusp form f11^2";
  } else if (label == "kz") {
    s.recipe = {{Rational(1, 2), 8}, {2, 8}, {1, -12}};
    s.weight = 2;
    s.level = 4;
    s.group = GroupKind::theta;
    s.note = "crossing-probability integrand eta(z/2)^8 eta(2z)^8 eta(z)^-12";
  } else if (label == "eta4") {
    s.recipe = {{1, 4}};
    s.weight = 2;
    s.level = 1;
    s.group = GroupKind::theta;
    s.note = "eta(z)^4, weight 2 with a character";
  } else {
    throw DomainError("unknown builtin form: " + label);
  }
  return s;
}

}  // namespace

std::vector<std::string> builtin_labels() { return {"delta", "f11", "f11sq", "kz", "eta4"}; }

Form builtin_form(const std::string& label, std::size_t order) { return Form(builtin_spec(label), order); }

Form load_form(const std::string& path) { return Form::from_series(load_series(path), "loaded from " + path); }

Form resolve_form(const std::string& name, std::size_t order) {
  for (const auto& l : builtin_labels())
    if (l == name) return builtin_form(name, order);
  if (std::filesystem::exists(name)) return load_form(name);
  throw DomainError("unknown form (neither builtin nor file): " + name);
}

GroupContext form_context(const Form& f) {
  return f.group() == GroupKind::theta ? theta_context() : gamma0_context(f.level());
}

}  // namespace somf
