#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ecf/distmodel.hpp"
#include "ecf/ecf.hpp"
#include "ecf/errors.hpp"
#include "ecf/simlab.hpp"
#include "oracles.hpp"

using namespace ecf;
using doctest::Approx;

namespace {

std::vector<double> integer_sample(oracle::Mt& rng, std::size_t n) {
  std::vector<double> w(n);
  for (auto& x : w) x = std::floor(rng.uniform() * 2001.0) - 1000.0;
  return w;
}

std::vector<double> real_sample(oracle::Mt& rng, std::size_t n, int kind) {
  std::vector<double> w(n);
  for (auto& x : w) x = kind == 0 ? rng.normal() : kind == 1 ? rng.exponential() : rng.uniform();
  return w;
}

}  // namespace

TEST_CASE("bucket index") {
  CHECK(bucket_index(10, 0.1) == 1);
  CHECK(bucket_index(10, 0.95) == 9);
  CHECK(bucket_index(4, 0.5) == 2);
  CHECK(bucket_index(10, 1e-9) == 1);
  CHECK(bucket_index(10, 0.9) == 9);
  CHECK(bucket_index(10, 0.11) == 2);
  CHECK(bucket_index(2, 0.99) == 1);
  CHECK_THROWS_AS(bucket_index(1, 0.5), DomainError);
  CHECK_THROWS_AS(bucket_index(10, 1.0), DomainError);
}

TEST_CASE("sorted sample") {
  const SortedSample s({3.0, 1.0, 2.0, 4.0});
  CHECK(s.size() == 4);
  CHECK(s.at(1) == 1.0);
  CHECK(s.at(4) == 4.0);
  CHECK(s.lower_sum(1) == 1.0);
  CHECK(s.lower_sum(4) == 10.0);
  CHECK(s.upper_sum(3) == 4.0);
  CHECK(s.upper_sum(0) == 10.0);
  CHECK(s.total() == 10.0);

  CHECK_THROWS_AS(SortedSample({1.0}), DomainError);
  CHECK_THROWS_AS(SortedSample({1.0, std::nan("")}), DomainError);
  CHECK_THROWS_AS(SortedSample({2.0, 1.0}, true), DomainError);
  CHECK_NOTHROW(SortedSample({1.0, 1.0, 2.0}, true));
}

TEST_CASE("ECF at a level") {
  const SortedSample s({1, 2, 3, 4});
  CHECK(ecf_eval(s, 0.5) == 0.0);
  CHECK(ecf_eval(s, 0.2) == 1.0);
  const SortedSample flat({2.5, 2.5, 2.5, 2.5, 2.5, 2.5, 2.5});
  for (double p : {0.01, 0.3, 0.5, 0.99}) CHECK(ecf_eval(flat, p) == 0.0);
}

TEST_CASE("ECF curve") {
  const auto c = ecf_curve(SortedSample({0, 0, 0, 10, 10, 10}));
  CHECK(c.g == std::vector<double>{6, 7.5, 0, -7.5, -6});
  CHECK(c.crossing_k == 3);
  CHECK(c.p_hat == 0.5);

  const auto d = ecf_curve(SortedSample({4, 3, 2, 1}));
  CHECK(d.g == std::vector<double>{1, 0, -1});
  CHECK(d.crossing_k == 2);

  CHECK_THROWS_AS(make_curve(3, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(make_curve(3, {1.0}), DomainError);
}

TEST_CASE("curve entries equal single-level evaluation bit for bit") {
  oracle::Mt rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const SortedSample s(real_sample(rng, 5 + rep * 7, rep % 3));
    const auto c = ecf_curve(s);
    for (std::size_t k = 1; k < s.size(); ++k) {
      const double n = static_cast<double>(s.size());
      CHECK(c.at(k) == ecf_eval(s, (static_cast<double>(k) - 0.5) / n));
    }
  }
}

TEST_CASE("empirical split point and two-cluster split") {
  const SortedSample a({0, 0, 0, 10, 10, 10});
  const auto sp = empirical_split_point(a);
  CHECK(sp.k_star == 3);
  CHECK(sp.p_n == 0.5);
  const auto cut = two_cluster_split(a);
  CHECK(cut.split_value == 0.0);
  CHECK(std::vector<double>(cut.left.begin(), cut.left.end()) == std::vector<double>{0, 0, 0});
  CHECK(std::vector<double>(cut.right.begin(), cut.right.end()) == std::vector<double>{10, 10, 10});

  const SortedSample b({1, 2, 3, 4});
  CHECK(empirical_split_point(b).k_star == 2);
  const auto cb = two_cluster_split(b);
  CHECK(std::vector<double>(cb.left.begin(), cb.left.end()) == std::vector<double>{1, 2});
  CHECK(std::vector<double>(cb.right.begin(), cb.right.end()) == std::vector<double>{3, 4});

  const auto flat = empirical_split_point(SortedSample({5, 5, 5, 5, 5}));
  CHECK(flat.k_star == 1);
  CHECK(flat.p_n == Approx(0.2));

  const SortedSample two({7.0, -1.0});
  const auto pair = two_cluster_split(two);
  CHECK(pair.left.size() == 1);
  CHECK(pair.left[0] == -1.0);
  CHECK(pair.right[0] == 7.0);
  CHECK(pair.split_value == -1.0);
}

TEST_CASE("crossing: previous bucket positive, crossing bucket not") {
  oracle::Mt rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const SortedSample s(real_sample(rng, 2 + rep % 40, rep % 3));
    const auto c = ecf_curve(s);
    const auto sp = empirical_split_point(s);
    CHECK(sp.k_star == c.crossing_k);
    CHECK(c.at(sp.k_star) <= 0.0);
    if (sp.k_star > 1) CHECK(c.at(sp.k_star - 1) > 0.0);
    CHECK(c.at(1) >= 0.0);
    CHECK(c.at(s.size() - 1) <= 0.0);
  }
}

TEST_CASE("agrees with direct re-summation") {
  oracle::Mt rng(2024);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 199);
    auto w = real_sample(rng, n, rep % 3);
    for (auto& x : w) x = x * 3.0 + 1.0;
    const SortedSample s(w);
    std::vector<double> sorted(s.values().begin(), s.values().end());
    const double scale = std::max(std::abs(sorted.front()), std::abs(sorted.back()));
    const auto c = ecf_curve(s);
    for (std::size_t k = 1; k < n; ++k) CHECK(std::abs(c.at(k) - oracle::naive_ecf(sorted, k)) <= 1e-12 * scale);
  }
}

TEST_CASE("shift invariance and scale equivariance") {
  oracle::Mt rng(77);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 2 + rep * 3;
    // Integer data: every intermediate is exact, so the shift leaves the curve bit-identical.
    const auto w = integer_sample(rng, n);
    const auto base = ecf_curve(SortedSample(w));
    auto shifted = w;
    const double c = std::floor(rng.uniform() * 1e6) - 5e5;
    for (auto& x : shifted) x += c;
    const auto sc = ecf_curve(SortedSample(shifted));
    CHECK(sc.g == base.g);
    CHECK(sc.crossing_k == base.crossing_k);

    auto scaled = w;
    const double f = 0.1 + 10 * rng.uniform();
    for (auto& x : scaled) x *= f;
    const auto ss = ecf_curve(SortedSample(scaled));
    const double mag = 1000.0 * f;
    for (std::size_t k = 1; k < n; ++k) CHECK(std::abs(ss.at(k) - f * base.at(k)) <= 1e-12 * mag);
    CHECK(ss.crossing_k == base.crossing_k);
  }
}

TEST_CASE("trimmed sum at a random level equals the truncated sum") {
  oracle::Mt rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const auto w = integer_sample(rng, 10 + rep);
    const SortedSample s(w);
    const double threshold = std::floor(rng.uniform() * 2001.0) - 1000.0;
    const auto m = static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [&](double x) { return x <= threshold; }));
    double truncated = 0.0;
    for (double x : w) truncated += x <= threshold ? x : 0.0;
    CHECK(s.lower_sum(m) == truncated);
  }
}

TEST_CASE("law of large numbers against the population cross-over function") {
  for (const auto& m : {DistributionModel::normal(0, 1), DistributionModel::exponential(1)}) {
    for (double p : {0.3, 0.5, 0.7}) {
      const double target = crossover(m, p);
      const double err = std::abs(ecf_eval(sample_iid(m, 100000, 99, 0), p) - target);
      CAPTURE(m.spec());
      CAPTURE(p);
      CHECK(err < 0.05);
    }
  }
}

TEST_CASE("data ingestion") {
  std::istringstream in("# header\n1.5\n\n  -2 \n3e2 # trailing comment\n+4\n");
  CHECK(read_values(in) == std::vector<double>{1.5, -2, 300, 4});

  std::istringstream nan_in("1\n2\nnan\n");
  try {
    read_values(nan_in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream inf_in("inf\n");
  CHECK_THROWS_AS(read_values(inf_in), ParseError);
  std::istringstream junk("1\n2x\n");
  try {
    read_values(junk);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}
