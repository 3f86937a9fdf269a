#include "ecf/distmodel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "ecf/errors.hpp"
#include "ecf/normal.hpp"
#include "ecf/quadrature.hpp"

namespace ecf {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_open_unit(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(what) + ": p must lie in (0,1)");
}

void require_closed_unit(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(what) + ": p must lie in [0,1]");
}

double quadrature_of_quantile(const DistributionModel& m, double a, double b) {
  const double lo = std::max(a, kEndpoint);
  const double hi = std::min(b, 1.0 - kEndpoint);
  if (!(hi > lo)) return 0.0;
  const auto r = adaptive_simpson([&m](double u) { return m.quantile(u); }, lo, hi);
  if (!r.converged)
    throw NumericalError("quantile quadrature did not converge (error estimate " +
                         std::to_string(r.error_estimate) + ")");
  return r.value;
}

std::vector<double> parse_numbers(std::string_view text, std::string_view spec) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    auto token = text.substr(0, comma);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty() ||
        !std::isfinite(v))
      throw ParseError("bad number in model spec '" + std::string(spec) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

DistributionModel::DistributionModel(Family f) : family_(std::move(f)) {
  mean_ = std::visit(
      overloaded{[](const NormalLaw& n) { return n.mean; },
                 [](const ExponentialLaw& e) { return 1.0 / e.rate; },
                 [](const UniformLaw& u) { return 0.5 * (u.lo + u.hi); },
                 [this](const CustomLaw&) { return quadrature_of_quantile(*this, 0.0, 1.0); }},
      family_);
}

DistributionModel DistributionModel::normal(double mean, double sd) {
  if (!std::isfinite(mean) || !(sd > 0.0) || !std::isfinite(sd))
    throw DomainError("normal: requires finite mean and sd > 0");
  return DistributionModel(NormalLaw{mean, sd});
}

DistributionModel DistributionModel::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("exponential: requires rate > 0");
  return DistributionModel(ExponentialLaw{rate});
}

DistributionModel DistributionModel::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
    throw DomainError("uniform: requires finite lo < hi");
  return DistributionModel(UniformLaw{lo, hi});
}

DistributionModel DistributionModel::custom(std::string name,
                                            std::function<double(double)> quantile,
                                            std::function<double(double)> pdf) {
  if (!quantile || !pdf) throw DomainError("custom model: quantile and pdf are required");
  return DistributionModel(CustomLaw{std::move(name), std::move(quantile), std::move(pdf)});
}

DistributionModel DistributionModel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("model spec '" + std::string(spec) + "' must look like family:params");
  const auto name = spec.substr(0, colon);
  const auto args = parse_numbers(spec.substr(colon + 1), spec);
  auto arity = [&](std::size_t k) {
    if (args.size() != k)
      throw ParseError("model '" + std::string(name) + "' takes " + std::to_string(k) +
                       " parameter(s)");
  };
  try {
    if (name == "normal") {
      arity(2);
      return normal(args[0], args[1]);
    }
    if (name == "exp" || name == "exponential") {
      arity(1);
      return exponential(args[0]);
    }
    if (name == "uniform") {
      arity(2);
      return uniform(args[0], args[1]);
    }
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown model family '" + std::string(name) + "'");
}

std::string DistributionModel::spec() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{[&](const NormalLaw& n) { os << "normal:" << n.mean << ',' << n.sd; },
                        [&](const ExponentialLaw& e) { os << "exp:" << e.rate; },
                        [&](const UniformLaw& u) { os << "uniform:" << u.lo << ',' << u.hi; },
                        [&](const CustomLaw& c) { os << "custom:" << c.name; }},
             family_);
  return os.str();
}

double DistributionModel::quantile(double p) const {
  require_open_unit(p, "quantile");
  return std::visit(
      overloaded{[p](const NormalLaw& n) { return n.mean + n.sd * normal::quantile(p); },
                 [p](const ExponentialLaw& e) { return -std::log1p(-p) / e.rate; },
                 [p](const UniformLaw& u) { return u.lo + (u.hi - u.lo) * p; },
                 [p](const CustomLaw& c) { return c.quantile(p); }},
      family_);
}

double DistributionModel::pdf(double x) const {
  return std::visit(
      overloaded{[x](const NormalLaw& n) { return normal::pdf((x - n.mean) / n.sd) / n.sd; },
                 [x](const ExponentialLaw& e) { return x < 0.0 ? 0.0 : e.rate * std::exp(-e.rate * x); },
                 [x](const UniformLaw& u) { return (x < u.lo || x > u.hi) ? 0.0 : 1.0 / (u.hi - u.lo); },
                 [x](const CustomLaw& c) { return c.pdf(x); }},
      family_);
}

double DistributionModel::cdf(double x) const {
  return std::visit(
      overloaded{[x](const NormalLaw& n) { return normal::cdf((x - n.mean) / n.sd); },
                 [x](const ExponentialLaw& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
                 [x](const UniformLaw& u) { return std::clamp((x - u.lo) / (u.hi - u.lo), 0.0, 1.0); },
                 [x](const CustomLaw& c) {
                   double lo = 0.0, hi = 1.0;
                   for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
                     const double mid = 0.5 * (lo + hi);
                     (c.quantile(mid) <= x ? lo : hi) = mid;
                   }
                   return 0.5 * (lo + hi);
                 }},
      family_);
}

double DistributionModel::partial_mean(double p) const {
  require_closed_unit(p, "partial_mean");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return mean_;
  return std::visit(
      overloaded{[p](const NormalLaw& n) {
                   return n.mean * p - n.sd * normal::pdf(normal::quantile(p));
                 },
                 [p](const ExponentialLaw& e) { return (p + (1.0 - p) * std::log1p(-p)) / e.rate; },
                 [p](const UniformLaw& u) { return u.lo * p + 0.5 * (u.hi - u.lo) * p * p; },
                 [this, p](const CustomLaw&) { return quadrature_of_quantile(*this, 0.0, p); }},
      family_);
}

double DistributionModel::upper_partial_mean(double p) const {
  require_closed_unit(p, "upper_partial_mean");
  if (p == 0.0) return mean_;
  if (p == 1.0) return 0.0;
  return std::visit(
      overloaded{[p](const NormalLaw& n) {
                   return n.mean * (1.0 - p) + n.sd * normal::pdf(normal::quantile(p));
                 },
                 [p](const ExponentialLaw& e) { return (1.0 - p) * (1.0 - std::log1p(-p)) / e.rate; },
                 [p](const UniformLaw& u) {
                   return u.lo * (1.0 - p) + 0.5 * (u.hi - u.lo) * (1.0 - p * p);
                 },
                 [this, p](const CustomLaw&) { return quadrature_of_quantile(*this, p, 1.0); }},
      family_);
}

double DistributionModel::partial_mean_quadrature(double p) const {
  require_closed_unit(p, "partial_mean_quadrature");
  return quadrature_of_quantile(*this, 0.0, p);
}

double mu_lower(const DistributionModel& m, double p) {
  require_open_unit(p, "mu_lower");
  return m.partial_mean(p) / p;
}

double mu_upper(const DistributionModel& m, double p) {
  require_open_unit(p, "mu_upper");
  return m.upper_partial_mean(p) / (1.0 - p);
}

double crossover(const DistributionModel& m, double p) {
  require_open_unit(p, "crossover");
  return mu_lower(m, p) + mu_upper(m, p) - 2.0 * m.quantile(p);
}

double split_function(const DistributionModel& m, double p) {
  require_open_unit(p, "split_function");
  const double lo = mu_lower(m, p);
  const double up = mu_upper(m, p);
  const double mean = m.mean();
  // Same quantity as p*lo^2 + (1-p)*up^2 - mean^2, written around the mean
  // so that it cannot go negative through cancellation.
  return p * (lo - mean) * (lo - mean) + (1.0 - p) * (up - mean) * (up - mean);
}

double split_derivative(const DistributionModel& m, double p) {
  require_open_unit(p, "split_derivative");
  return (mu_upper(m, p) - mu_lower(m, p)) * crossover(m, p);
}

double crossover_derivative(const DistributionModel& m, double p) {
  require_open_unit(p, "crossover_derivative");
  const double q = m.quantile(p);
  const double f = m.pdf(q);
  if (!(f > 0.0) || !std::isfinite(f))
    throw NumericalError("crossover_derivative: density vanishes at F^-1(" + std::to_string(p) +
                         ")");
  return (q - mu_lower(m, p)) / p + (mu_upper(m, p) - q) / (1.0 - p) - 2.0 / f;
}

SplitDiagnostics find_split_point(const DistributionModel& m, double lo, double hi,
                                  SplitSearchOptions opts) {
  if (!(lo > 0.0 && lo < hi && hi < 1.0))
    throw DomainError("find_split_point: bracket must satisfy 0 < lo < hi < 1");
  if (opts.grid_points < 2) throw DomainError("find_split_point: grid needs at least 2 points");

  const int n = opts.grid_points;
  std::vector<double> ps(n), gs(n);
  for (int i = 0; i < n; ++i) {
    ps[i] = i == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    gs[i] = crossover(m, ps[i]);
  }

  struct Root {
    double p, a, b;
  };
  std::vector<Root> roots;
  for (int i = 0; i < n; ++i) {
    if (gs[i] == 0.0) {
      roots.push_back({ps[i], ps[i], ps[i]});
      continue;
    }
    if (i + 1 >= n || gs[i + 1] == 0.0 || std::signbit(gs[i]) == std::signbit(gs[i + 1]))
      continue;
    double a = ps[i], b = ps[i + 1];
    double ga = gs[i];
    while (b - a > opts.width_tol) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const double gm = crossover(m, mid);
      if (gm == 0.0) {
        a = b = mid;
        break;
      }
      if (std::signbit(gm) == std::signbit(ga)) {
        a = mid;
        ga = gm;
      } else {
        b = mid;
      }
    }
    roots.push_back({0.5 * (a + b), a, b});
  }
  if (roots.empty())
    throw NumericalError("no crossing in bracket [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");

  SplitDiagnostics out;
  double best = -1.0;
  for (const auto& r : roots) {
    out.roots.push_back(r.p);
    const double b = split_function(m, r.p);
    if (b > best) {
      best = b;
      out.p0 = r.p;
      out.bracket_lo = r.a;
      out.bracket_hi = r.b;
    }
  }
  out.split_at_p0 = best;
  out.split_value = m.quantile(out.p0);
  out.derivative_residual = std::abs(split_derivative(m, out.p0));
  return out;
}

}  // namespace ecf
