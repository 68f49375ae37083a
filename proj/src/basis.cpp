#include "rrmc/basis.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <vector>

#include "rrmc/errors.h"

namespace rrmc {
namespace {

struct FamilyName {
  BasisFamily family;
  const char* name;
  const char* label;
};

constexpr std::array<FamilyName, 5> kFamilies{{
    {BasisFamily::constant_linear, "constant-linear", "1,X_i"},
    {BasisFamily::constant_linear_quadratic, "constant-linear-quadratic", "1,X_i,X_iX_j"},
    {BasisFamily::constant_linear_payoff, "constant-linear-payoff", "1,X_i,g(X)"},
    {BasisFamily::swap_order_stats, "swap-order-stats", "1,C,X_(i)"},
    {BasisFamily::swap_order_stats_quadratic, "swap-order-stats-quadratic", "1,C,X_(i),X_(i)X_(j)"},
}};

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

void quadratic_terms(const double* x, std::size_t d, double* out) {
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) *out++ = x[i] * x[j];
}

}  // namespace

std::size_t fixed_basis_size(BasisFamily family, std::size_t dim) {
  switch (family) {
    case BasisFamily::constant_linear:
      return 1 + dim;
    case BasisFamily::constant_linear_quadratic:
      return 1 + dim + dim * (dim + 1) / 2;
    case BasisFamily::constant_linear_payoff:
      return 2 + dim;
    case BasisFamily::swap_order_stats:
      return 2 + dim;
    case BasisFamily::swap_order_stats_quadratic:
      return 2 + dim + dim * (dim + 1) / 2;
  }
  return 0;
}

BasisSpec::BasisSpec(BasisFamily family, std::size_t dim, ReinforcementSpec reinforcement)
    : family_(family), dim_(dim), reinforcement_(reinforcement), fixed_size_(fixed_basis_size(family, dim)) {
  if (dim == 0) throw ConfigError("basis dimension must be at least 1");
  if (reinforcement_.count > 1) throw ConfigError("at most one reinforcing function is supported (b in {0, 1})");
}

void eval_fixed(const BasisSpec& spec, std::span<const double> state, double scalar, std::span<double> out) {
  const std::size_t d = spec.dim();
  if (state.size() != d)
    throw ConfigError("basis evaluation: state has " + std::to_string(state.size()) + " coordinates, basis expects " +
                      std::to_string(d));
  double* o = out.data();
  switch (spec.family()) {
    case BasisFamily::constant_linear:
      *o++ = 1.0;
      std::copy(state.begin(), state.end(), o);
      return;
    case BasisFamily::constant_linear_quadratic:
      *o++ = 1.0;
      std::copy(state.begin(), state.end(), o);
      quadratic_terms(state.data(), d, o + d);
      return;
    case BasisFamily::constant_linear_payoff:
      *o++ = 1.0;
      std::copy(state.begin(), state.end(), o);
      o[d] = scalar;
      return;
    case BasisFamily::swap_order_stats:
    case BasisFamily::swap_order_stats_quadratic: {
      *o++ = 1.0;
      *o++ = scalar;
      std::copy(state.begin(), state.end(), o);
      std::sort(o, o + d);
      if (spec.family() == BasisFamily::swap_order_stats_quadratic) quadratic_terms(o, d, o + d);
      return;
    }
  }
}

BasisFamily parse_basis_family(std::string_view name) {
  const std::string key = strip_spaces(name);
  for (const auto& f : kFamilies)
    if (key == f.name || key == f.label) return f.family;
  throw ConfigError("unknown basis family '" + std::string(name) + "'");
}

std::string basis_family_name(BasisFamily family) {
  for (const auto& f : kFamilies)
    if (f.family == family) return f.name;
  return "?";
}

std::string basis_family_label(BasisFamily family) {
  for (const auto& f : kFamilies)
    if (f.family == family) return f.label;
  return "?";
}

ReinforcementVariant parse_reinforcement_variant(std::string_view name) {
  if (name == "value") return ReinforcementVariant::value;
  if (name == "exercise-indicator" || name == "indicator") return ReinforcementVariant::exercise_indicator;
  throw ConfigError("unknown reinforcement variant '" + std::string(name) + "'");
}

std::string reinforcement_variant_name(ReinforcementVariant variant) {
  return variant == ReinforcementVariant::value ? "value" : "exercise-indicator";
}

}  // namespace rrmc
