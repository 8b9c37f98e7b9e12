#include "varcont/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "varcont/errors.hpp"

namespace varcont {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double signed_power(double s, double p) { return std::copysign(std::pow(std::abs(s), p), s); }

// x - log(1 + x) for x >= 0 without cancellation near 0.
double x_minus_log1p(double x) {
  if (x < 1e-2) {
    double term = -x;
    double sum = 0.0;
    for (int k = 2; k <= 12; ++k) {
      term *= -x;
      sum += term / k;
    }
    return sum;
  }
  return x - std::log1p(x);
}

}  // namespace

Nonlinearity Nonlinearity::power_sum(std::vector<PowerTerm> terms) {
  if (terms.empty()) throw InvalidArgument("PowerSum: need at least one term");
  for (const auto& t : terms) {
    if (!(t.exponent > 1.0)) throw InvalidArgument("PowerSum: every exponent must exceed 1");
    if (!std::isfinite(t.coefficient)) throw InvalidArgument("PowerSum: coefficient must be finite");
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
  return Nonlinearity(PowerSum{std::move(terms)});
}

Nonlinearity Nonlinearity::pure_power(double exponent, double coefficient) {
  return power_sum({{coefficient, exponent}});
}

Nonlinearity Nonlinearity::saturating_cubic(double amplitude) {
  if (!(amplitude > 0.0)) throw InvalidArgument("SaturatingCubic: amplitude must be positive");
  return Nonlinearity(SaturatingCubic{amplitude});
}

Nonlinearity Nonlinearity::positive_part_power(double exponent) {
  if (!(exponent > 1.0)) throw InvalidArgument("PositivePartPower: exponent must exceed 1");
  return Nonlinearity(PositivePartPower{exponent});
}

double Nonlinearity::g(double s) const noexcept {
  return std::visit(overloaded{
                        [&](const PowerSum& f) {
                          double sum = 0.0;
                          for (const auto& t : f.terms) sum += t.coefficient * signed_power(s, t.exponent);
                          return sum;
                        },
                        [&](const SaturatingCubic& f) { return f.amplitude * s * s * s / (1.0 + s * s); },
                        [&](const PositivePartPower& f) { return s > 0.0 ? std::pow(s, f.exponent) : 0.0; },
                    },
                    family_);
}

double Nonlinearity::primitive(double s) const noexcept {
  return std::visit(overloaded{
                        [&](const PowerSum& f) {
                          double sum = 0.0;
                          for (const auto& t : f.terms)
                            sum += t.coefficient * std::pow(std::abs(s), t.exponent + 1.0) / (t.exponent + 1.0);
                          return sum;
                        },
                        [&](const SaturatingCubic& f) { return 0.5 * f.amplitude * x_minus_log1p(s * s); },
                        [&](const PositivePartPower& f) {
                          return s > 0.0 ? std::pow(s, f.exponent + 1.0) / (f.exponent + 1.0) : 0.0;
                        },
                    },
                    family_);
}

double Nonlinearity::derivative(double s) const noexcept {
  return std::visit(overloaded{
                        [&](const PowerSum& f) {
                          double sum = 0.0;
                          for (const auto& t : f.terms)
                            sum += t.coefficient * t.exponent * std::pow(std::abs(s), t.exponent - 1.0);
                          return sum;
                        },
                        [&](const SaturatingCubic& f) {
                          const double s2 = s * s;
                          return f.amplitude * (3.0 * s2 + s2 * s2) / ((1.0 + s2) * (1.0 + s2));
                        },
                        [&](const PositivePartPower& f) {
                          return s > 0.0 ? f.exponent * std::pow(s, f.exponent - 1.0) : 0.0;
                        },
                    },
                    family_);
}

std::optional<double> Nonlinearity::pure_power_exponent() const noexcept {
  if (const auto* ps = std::get_if<PowerSum>(&family_)) {
    if (ps->terms.size() == 1 && ps->terms.front().coefficient > 0.0) return ps->terms.front().exponent;
    return std::nullopt;
  }
  if (const auto* pp = std::get_if<PositivePartPower>(&family_)) return pp->exponent;
  return std::nullopt;
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const PowerSum& f) {
                   os << "power_sum[";
                   for (std::size_t k = 0; k < f.terms.size(); ++k)
                     os << (k ? "," : "") << "(" << f.terms[k].coefficient << "," << f.terms[k].exponent << ")";
                   os << "]";
                 },
                 [&](const SaturatingCubic& f) { os << "saturating_cubic(" << f.amplitude << ")"; },
                 [&](const PositivePartPower& f) { os << "positive_part_power(" << f.exponent << ")"; },
             },
             family_);
  return os.str();
}

double critical_exponent(int dimension) { return (dimension + 2.0) / (dimension - 2.0); }

HypothesisReport check_hypotheses(const Nonlinearity& nl, int dimension) {
  if (dimension < 3) throw InvalidArgument("check_hypotheses: dimension must be >= 3");
  const double crit = critical_exponent(dimension);
  HypothesisReport rep;
  std::visit(overloaded{
                 [&](const PowerSum& f) {
                   const double p_min = f.terms.front().exponent;
                   const double p_max = f.terms.back().exponent;
                   rep.h1 = p_min > 1.0;
                   rep.p_used = p_max;
                   rep.subcritical = p_max < crit;
                   rep.h2 = rep.subcritical;
                   const bool all_positive = std::all_of(f.terms.begin(), f.terms.end(),
                                                         [](const PowerTerm& t) { return t.coefficient > 0.0; });
                   if (all_positive) {
                     rep.h3 = true;
                     rep.h4 = AmbrosettiRabinowitz::Holds;
                     rep.mu = 1.0 + p_min;
                   } else {
                     // Semi-decision: G(s0) > 0 somewhere on a log grid of [1e-3, 1e3].
                     rep.h4 = AmbrosettiRabinowitz::Unknown;
                     rep.h3 = false;
                     for (int k = 0; k <= 600 && !rep.h3; ++k) {
                       const double s0 = std::pow(10.0, -3.0 + 0.01 * k);
                       rep.h3 = nl.primitive(s0) > 0.0;
                     }
                   }
                 },
                 [&](const SaturatingCubic&) {
                   rep.h1 = rep.h2 = rep.h3 = true;
                   rep.p_used = 1.0;
                   rep.subcritical = true;
                   rep.h4 = AmbrosettiRabinowitz::Fails;
                 },
                 [&](const PositivePartPower& f) {
                   rep.h1 = rep.h3 = true;
                   rep.p_used = f.exponent;
                   rep.subcritical = f.exponent < crit;
                   rep.h2 = rep.subcritical;
                   rep.h4 = AmbrosettiRabinowitz::Holds;
                   rep.mu = f.exponent + 1.0;
                 },
             },
             nl.family());
  return rep;
}

bool LambdaStar::infinite() const noexcept { return std::isinf(value); }

LambdaStar lambda_star(const Nonlinearity& nl) {
  const bool superquadratic_leading = std::visit(
      overloaded{
          [](const PowerSum& f) { return f.terms.back().coefficient > 0.0; },
          [](const SaturatingCubic&) { return false; },
          [](const PositivePartPower&) { return true; },
      },
      nl.family());
  if (superquadratic_leading) return {std::numeric_limits<double>::infinity(), false};

  auto ratio = [&](double log_nu) {
    const double nu = std::exp(log_nu);
    return 2.0 * nl.primitive(nu) / (nu * nu);
  };
  const double lo = std::log(1e-6);
  const double hi = std::log(1e6);
  constexpr int samples = 2400;
  const double step = (hi - lo) / samples;
  int best = 0;
  double best_val = ratio(lo);
  for (int k = 1; k <= samples; ++k) {
    const double v = ratio(lo + k * step);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  if (!(best_val > 0.0)) throw HypothesisViolation("lambda_star: G <= 0 at every sampled point");
  if (best == 0 || best == samples) return {best_val, false};

  // Golden-section refinement on the bracketing cells.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo + (best - 1) * step;
  double b = lo + (best + 1) * step;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = ratio(c);
  double fd = ratio(d);
  for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = ratio(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = ratio(d);
    }
  }
  return {std::max({best_val, fc, fd}), true};
}

Potential Potential::one() { return Potential(); }

Potential Potential::radial(std::function<double(double)> profile, bool decays_at_infinity, std::string name) {
  Potential v;
  v.profile_ = std::move(profile);
  v.decays_ = decays_at_infinity;
  v.name_ = std::move(name);
  return v;
}

RadialField eval_potential(const Potential& v, const GridPtr& grid) {
  RadialField out(grid);
  bool any_positive = false;
  for (std::size_t i = 0; i + 1 < grid->size(); ++i) {
    const double value = v(grid->node(i));
    if (!(value >= 0.0) || !std::isfinite(value))
      throw NonAdmissiblePotential("potential '" + v.name() + "' is negative or not finite at r = " +
                                   std::to_string(grid->node(i)));
    any_positive = any_positive || value > 0.0;
    out[i] = value;
  }
  if (!any_positive) throw NonAdmissiblePotential("potential '" + v.name() + "' vanishes on the whole grid");
  return out;
}

}  // namespace varcont
