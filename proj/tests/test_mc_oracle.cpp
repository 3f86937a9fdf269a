// Monte Carlo oracle for the quadrature variances and covariances. Draws come
// from std::mt19937_64 through the standard library distributions, and theta
// is evaluated inline from its definition.

#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "ecf/asymptotics.hpp"
#include "oracles.hpp"

using namespace ecf;

namespace {

constexpr std::size_t kDraws = 10'000'000;

// x approximates ref to t significant digits when |x - ref| / |ref| <= 5 * 10^-t.
bool agrees_to_digits(double x, double ref, int t) {
  return std::abs(x - ref) <= 5.0 * std::pow(10.0, -t) * std::abs(ref);
}

struct Law {
  DistributionModel model;
  int kind;  // 0 normal, 1 exponential, 2 uniform
};

double draw(oracle::Mt& rng, int kind) {
  return kind == 0 ? rng.normal() : kind == 1 ? rng.exponential() : rng.uniform();
}

double theta(double w, double p, double q, double f) {
  return w <= q ? (w - q) / p + 2.0 / f : (w - q) / (1.0 - p);
}

}  // namespace

TEST_CASE("quadrature variance matches a 10^7-draw Monte Carlo estimate") {
  const Law laws[] = {{DistributionModel::normal(0, 1), 0},
                      {DistributionModel::exponential(1), 1},
                      {DistributionModel::uniform(0, 1), 2}};
  std::uint64_t seed = 1000;
  for (const auto& law : laws) {
    for (double p : {0.25, 0.5, 0.75}) {
      const double q = law.model.quantile(p);
      const double f = law.model.pdf(q);
      oracle::Mt rng(seed++);
      oracle::Welford w, sq;
      for (std::size_t i = 0; i < kDraws; ++i) {
        const double t = theta(draw(rng, law.kind), p, q, f);
        w.add(t);
        sq.add(t * t);
      }
      const double quad = sigma_var(law.model, p);
      // Standard error of the variance estimate, from the spread of theta^2
      // (theta's mean is O(1), so this bounds the centred version's error).
      const double se = std::sqrt(sq.variance() / static_cast<double>(kDraws));
      std::printf("  %-12s p=%.2f quadrature=%.6f monte-carlo=%.6f se=%.4f\n", law.model.spec().c_str(), p,
                  quad, w.variance(), se);
      CAPTURE(law.model.spec());
      CAPTURE(p);
      CHECK(agrees_to_digits(w.variance(), quad, 3));
      CHECK(std::abs(w.variance() - quad) <= 4 * se);
    }
  }
}

TEST_CASE("quadrature covariance matches Monte Carlo for Uniform(0,1) at 0.3 and 0.7") {
  oracle::Mt rng(77);
  double s1 = 0, s2 = 0, s12 = 0;
  for (std::size_t i = 0; i < kDraws; ++i) {
    const double w = rng.uniform();
    const double a = theta(w, 0.3, 0.3, 1.0);
    const double b = theta(w, 0.7, 0.7, 1.0);
    s1 += a;
    s2 += b;
    s12 += a * b;
  }
  const double n = static_cast<double>(kDraws);
  const double mc = (s12 - s1 * s2 / n) / (n - 1);
  const double quad = cov_theta(DistributionModel::uniform(0, 1), 0.3, 0.7);
  std::printf("  uniform cov(0.3, 0.7) quadrature=%.6f monte-carlo=%.6f\n", quad, mc);
  CHECK(agrees_to_digits(mc, quad, 3));
}
