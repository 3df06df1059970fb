#include <doctest.h>

#include <cmath>
#include <vector>

#include "meixner/error.hpp"
#include "meixner/series.hpp"

using namespace meixner;

TEST_CASE("constant and linear series") {
  const auto k = TruncatedSeries::constant(2, 3, 2.5);
  CHECK(k.coeff(MultiIndex{0, 0}) == 2.5);
  CHECK(k.coeff(MultiIndex{1, 2}) == 0.0);
  const std::vector<double> a{3.0, -1.0};
  const auto l = TruncatedSeries::linear(2, 3, 1.0, a);
  CHECK(l.coeff(MultiIndex{1, 0}) == 3.0);
  CHECK(l.coeff(MultiIndex{0, 1}) == -1.0);
  CHECK_THROWS_AS((void)l.coeff(MultiIndex{2, 2}), Error);
}

TEST_CASE("products truncate at the degree cap") {
  const std::vector<double> plus{1.0}, minus{-1.0};
  const auto p = TruncatedSeries::linear(1, 4, 1.0, plus) * TruncatedSeries::linear(1, 4, 1.0, minus);
  CHECK(p.coeff(MultiIndex{0}) == 1.0);
  CHECK(p.coeff(MultiIndex{1}) == 0.0);
  CHECK(p.coeff(MultiIndex{2}) == -1.0);

  // (1 + t1 + t2)^5 at cap 3 keeps multinomial coefficients up to degree 3
  const std::vector<double> ones{1.0, 1.0};
  const auto l = TruncatedSeries::linear(2, 3, 1.0, ones);
  auto q = TruncatedSeries::constant(2, 3, 1.0);
  for (int i = 0; i < 5; ++i) q = q * l;
  CHECK(q.coeff(MultiIndex{2, 1}) == 5.0 * 4.0 * 3.0 / 2.0);
  CHECK(q.coeff(MultiIndex{0, 3}) == 10.0);
  CHECK(q.coeff(MultiIndex{1, 1}) == 20.0);
}

TEST_CASE("negative and fractional powers follow the binomial series") {
  const std::vector<double> a{0.5};
  const double alpha = -2.7;
  const auto s = TruncatedSeries::power_one_minus(1, 8, a, alpha);
  // (1 - t/2)^alpha = sum_k binom(alpha, k) (-1/2)^k t^k
  double binom = 1.0;
  for (int k = 0; k <= 8; ++k) {
    CHECK(s.coeff(MultiIndex{k}) == doctest::Approx(binom * std::pow(-0.5, k)).epsilon(1e-14));
    binom *= (alpha - k) / (k + 1);
  }

  // positive integer powers terminate
  const std::vector<double> b{1.0, 2.0};
  const auto cube = TruncatedSeries::power_one_minus(2, 6, b, 3.0);
  CHECK(cube.coeff(MultiIndex{0, 3}) == -8.0);
  CHECK(cube.coeff(MultiIndex{1, 2}) == -12.0);
  CHECK(cube.coeff(MultiIndex{2, 2}) == 0.0);

  // x^a x^b = x^{a+b}
  const std::vector<double> c{0.3, -0.2};
  const auto lhs = TruncatedSeries::power_one_minus(2, 5, c, -1.3) * TruncatedSeries::power_one_minus(2, 5, c, 0.4);
  const auto rhs = TruncatedSeries::power_one_minus(2, 5, c, -0.9);
  for (std::size_t r = 0; r < lhs.coefficients().size(); ++r) {
    CHECK(lhs.coefficients()[r] == doctest::Approx(rhs.coefficients()[r]).epsilon(1e-13));
  }
}

TEST_CASE("addition and scaling") {
  const std::vector<double> a{1.0, 2.0};
  auto s = TruncatedSeries::linear(2, 2, 1.0, a);
  s += TruncatedSeries::constant(2, 2, -1.0);
  s *= 2.0;
  CHECK(s.coeff(MultiIndex{0, 0}) == 0.0);
  CHECK(s.coeff(MultiIndex{0, 1}) == 4.0);
  CHECK_THROWS_AS(s += TruncatedSeries::constant(2, 3, 1.0), Error);
}
