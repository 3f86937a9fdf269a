#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ecf/asymptotics.hpp"
#include "ecf/ecf.hpp"
#include "ecf/errors.hpp"
#include "ecf/simlab.hpp"
#include "oracles.hpp"

using namespace ecf;
using doctest::Approx;

namespace {

const double kTwoPiMinus4 = 2 * std::numbers::pi - 4;
const double kExpSigma = 8 * (1 - std::numbers::ln2);

std::vector<DistributionModel> standard_models() {
  return {DistributionModel::normal(0, 1), DistributionModel::exponential(1), DistributionModel::uniform(0, 1)};
}

// Mean and variance of g(F^-1(u)) by composite Gauss-Legendre on [eps, p] and [p, 1-eps].
struct Moments {
  double mean, var;
};
Moments gl_moments(const DistributionModel& m, double p, const std::function<double(double)>& g) {
  auto piece = [&](double a, double b, int pow) {
    return oracle::gauss_legendre([&](double u) { return std::pow(g(m.quantile(u)), pow); }, a, b, 4000);
  };
  const double lo = 1e-9, hi = 1 - 1e-9;
  // Moments of the law restricted to [lo, hi], so a constant shift moves only the mean.
  const double mass = hi - lo;
  const double e1 = (piece(lo, p, 1) + piece(p, hi, 1)) / mass;
  const double e2 = (piece(lo, p, 2) + piece(p, hi, 2)) / mass;
  return {e1, e2 - e1 * e1};
}

}  // namespace

TEST_CASE("influence function values") {
  const auto uni = DistributionModel::uniform(0, 1);
  CHECK(theta_eval(uni, 0.5, 0.25).theta == Approx(1.5).epsilon(1e-15));
  CHECK(theta_eval(uni, 0.5, 0.75).theta == Approx(0.5).epsilon(1e-15));
  for (const auto& m : standard_models()) {
    for (double p : {0.2, 0.5, 0.8}) {
      const double q = m.quantile(p);
      CHECK(theta_eval(m, p, q).theta == Approx(2.0 / m.pdf(q)).epsilon(1e-14));
    }
  }
  const auto flat = DistributionModel::custom("flat", [](double p) { return p; }, [](double) { return 0.0; });
  CHECK_THROWS_AS(theta_eval(flat, 0.5, 0.1), NumericalError);
}

TEST_CASE("direct and linearised forms differ by G(p) + 2p/f(q)") {
  oracle::Mt rng(8);
  for (const auto& m : standard_models()) {
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const double offset = theta_offset(m, p);
      CHECK(offset == Approx(crossover(m, p) + 2 * p / m.pdf(m.quantile(p))).epsilon(1e-14));
      for (int i = 0; i < 50; ++i) {
        const double w = m.quantile(0.001 + 0.998 * rng.uniform());
        const auto d = theta_eval(m, p, w);
        CHECK(d.theta - d.z() == Approx(offset).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("mean of the influence function") {
  for (const auto& m : standard_models()) {
    for (double p : {0.25, 0.5, 0.75}) {
      CAPTURE(m.spec());
      CAPTURE(p);
      CHECK(std::abs(theta_mean(m, p) - theta_offset(m, p)) <= 1e-8);
      // The linearised parts are mean zero.
      const auto zm = gl_moments(m, p, [&](double w) { return theta_eval(m, p, w).z(); });
      CHECK(std::abs(zm.mean) < 1e-5);
    }
  }
  // Uniform(0,1) at p = 1/4: G = 1/4 and 2p/f = 1/2.
  CHECK(theta_mean(DistributionModel::uniform(0, 1), 0.25) == Approx(0.75).epsilon(1e-9));
}

TEST_CASE("asymptotic variance") {
  CHECK(std::abs(sigma_var(DistributionModel::normal(0, 1), 0.5) - kTwoPiMinus4) <= 1e-6);
  CHECK(std::abs(sigma_var(DistributionModel::exponential(1), 0.5) - kExpSigma) <= 1e-6);
  CHECK(std::abs(sigma_var(DistributionModel::uniform(0, 1), 0.5) - 1.0 / 3) <= 1e-9);

  // mpmath tanh-sinh quadrature, 30 digits.
  CHECK(sigma_var(DistributionModel::normal(0, 1), 0.25) == Approx(2.798527133056164).epsilon(1e-7));
  CHECK(sigma_var(DistributionModel::normal(0, 1), 0.75) == Approx(2.798527133056164).epsilon(1e-7));
  CHECK(sigma_var(DistributionModel::exponential(1), 0.25) == Approx(1.460840348209677).epsilon(1e-7));
  CHECK(sigma_var(DistributionModel::exponential(1), 0.75) == Approx(5.737620049351500).epsilon(1e-7));
  CHECK(sigma_var(DistributionModel::uniform(0, 1), 0.25) == Approx(0.2708333333333333).epsilon(1e-8));
  CHECK(sigma_var(DistributionModel::uniform(0, 1), 0.75) == Approx(0.2708333333333333).epsilon(1e-8));
}

TEST_CASE("variance does not see the constant offset") {
  for (const auto& m : standard_models()) {
    for (double p : {0.3, 0.5, 0.7}) {
      const auto direct = gl_moments(m, p, [&](double w) { return theta_eval(m, p, w).theta; });
      const auto linear = gl_moments(m, p, [&](double w) { return theta_eval(m, p, w).z(); });
      CHECK(std::abs(direct.var - linear.var) <= 1e-10 * direct.var + 1e-10);
      CHECK(direct.var == Approx(sigma_var(m, p)).epsilon(1e-4));
    }
  }
}

TEST_CASE("variance scales with the square of the scale") {
  for (double c : {0.5, 2.0})
    CHECK(sigma_var(DistributionModel::normal(0, c), 0.5) == Approx(c * c * kTwoPiMinus4).epsilon(1e-8));
  CHECK(sigma_var(DistributionModel::normal(5, 1), 0.5) == Approx(kTwoPiMinus4).epsilon(1e-8));
}

TEST_CASE("covariance between levels") {
  for (const auto& m : standard_models()) {
    for (double p : {0.2, 0.5, 0.8}) CHECK(std::abs(cov_theta(m, p, p) - sigma_var(m, p)) <= 1e-10);
  }
  const auto nrm = DistributionModel::normal(0, 1);
  CHECK(cov_theta(nrm, 0.3, 0.7) == cov_theta(nrm, 0.7, 0.3));
  // exact piecewise-polynomial integration (sympy)
  CHECK(cov_theta(DistributionModel::uniform(0, 1), 0.3, 0.7) == Approx(-248.0 / 3675).epsilon(1e-8));
  // mpmath quadrature
  CHECK(cov_theta(nrm, 0.3, 0.7) == Approx(-0.182916516310138).epsilon(1e-7));
  CHECK(cov_theta(DistributionModel::exponential(1), 0.3, 0.7) == Approx(0.588202179385126).epsilon(1e-7));
}

TEST_CASE("theoretical covariance grid") {
  const double one[] = {0.5};
  const auto single = cov_grid_theoretical(DistributionModel::normal(0, 1), one);
  REQUIRE(single.dim() == 1);
  CHECK(std::abs(single.at(0, 0) - kTwoPiMinus4) <= 1e-6);

  const double three[] = {0.3, 0.5, 0.7};
  const auto ex = cov_grid_theoretical(DistributionModel::exponential(1), three);
  CHECK(ex.min_eigenvalue >= -1e-8);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(ex.at(i, j) == ex.at(j, i));

  std::vector<double> nine;
  for (int i = 1; i <= 9; ++i) nine.push_back(0.1 * i);
  for (const auto& m : standard_models()) {
    const auto par = cov_grid_theoretical(m, nine, Execution::parallel);
    const auto ser = cov_grid_theoretical(m, nine, Execution::serial);
    CHECK(par.matrix == ser.matrix);
    CHECK(par.min_eigenvalue >= -1e-8);
    for (std::size_t i = 0; i < 9; ++i) {
      CHECK(par.at(i, i) > 0.0);
      for (std::size_t j = 0; j < 9; ++j) CHECK(par.at(i, j) == par.at(j, i));
    }
  }

  const double unsorted[] = {0.5, 0.3};
  CHECK_THROWS_AS(cov_grid_theoretical(DistributionModel::normal(0, 1), unsorted), DomainError);
  CHECK_THROWS_AS(cov_grid_theoretical(DistributionModel::normal(0, 1), std::span<const double>{}), DomainError);

  // Density vanishing at the third level only.
  const auto holey = DistributionModel::custom(
      "holey", [](double p) { return p; }, [](double x) { return std::abs(x - 0.7) < 1e-12 ? 0.0 : 1.0; });
  try {
    cov_grid_theoretical(holey, three, Execution::serial);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("(0, 2)") != std::string::npos);
  }
}

TEST_CASE("minimum eigenvalue helper") {
  const double m[] = {2, 1, 1, 2};
  CHECK(min_eigenvalue(m, 2) == Approx(1.0));
  const double indefinite[] = {0, 1, 1, 0};
  CHECK(min_eigenvalue(indefinite, 2) == Approx(-1.0));
}

TEST_CASE("plug-in variance estimate") {
  const auto nrm = sample_iid(DistributionModel::normal(0, 1), 100000, 17, 0);
  CHECK(std::abs(empirical_sigma(nrm, 0.5) / kTwoPiMinus4 - 1) < 0.10);
  const auto ex = sample_iid(DistributionModel::exponential(1), 100000, 17, 0);
  CHECK(std::abs(empirical_sigma(ex, 0.5) / kExpSigma - 1) < 0.10);

  // Near-constant data: either a density error or a (huge) finite value.
  std::vector<double> tiny(1000, 3.0);
  oracle::Mt rng(1);
  for (std::size_t i = 0; i < tiny.size(); i += 97) tiny[i] += 1e-13 * rng.uniform();
  const SortedSample degenerate(tiny);
  try {
    const double v = empirical_sigma(degenerate, 0.5);
    CHECK(v >= 0.0);
  } catch (const NumericalError&) {
  }

  std::vector<double> small(19, 1.0);
  for (std::size_t i = 0; i < small.size(); ++i) small[i] = static_cast<double>(i);
  CHECK_THROWS_AS(empirical_sigma(SortedSample(small), 0.5), DomainError);
  CHECK_THROWS_AS(empirical_sigma(nrm, 0.05, 0.1), DomainError);
  CHECK_THROWS_AS(empirical_sigma(nrm, 0.5, -1.0), DomainError);
  CHECK(empirical_sigma(nrm, 0.5, 0.05) == Approx(kTwoPiMinus4).epsilon(0.1));
}

TEST_CASE("Newton step towards the empirical split point") {
  const auto uni = DistributionModel::uniform(0, 1);
  const double p0 = find_split_point(uni, 0.01, 0.99).p0;
  // G_n vanishes identically on constant data, so the step is zero.
  CHECK(newton_split_approx(uni, SortedSample(std::vector<double>(50, 1.0))) == p0);
  CHECK(newton_split_approx(uni, SortedSample({1, 2, 3, 4}), 0.5) == 0.5);

  const auto su = sample_iid(uni, 10000, 4242, 0);
  CHECK(std::abs(newton_split_approx(uni, su) - empirical_split_point(su).p_n) <= 0.02);
  const auto ex = DistributionModel::exponential(1);
  const auto se = sample_iid(ex, 10000, 4242, 0);
  CHECK(std::abs(newton_split_approx(ex, se) - empirical_split_point(se).p_n) <= 0.03);
}
