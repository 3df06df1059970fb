#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "meixner/error.hpp"
#include "meixner/model.hpp"
#include "meixner/rng.hpp"
#include "oracles.hpp"

using namespace meixner;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ConfigError;
}

}  // namespace

TEST_CASE("validate_params accepts valid input and flags coincident c") {
  const auto p = validate_params(1.5, {0.2, 0.3});
  CHECK(p.n() == 2);
  CHECK_FALSE(p.degenerate);
  CHECK(p.c_mass() == doctest::Approx(0.5));

  CHECK(validate_params(1.0, {0.4, 0.4}).degenerate);
  CHECK(validate_params(1.0, {0.4, 0.4 + 1e-14}).degenerate);
  CHECK_FALSE(validate_params(1.0, {0.4, 0.4 + 1e-9}).degenerate);
  CHECK(validate_params(ModelParams{1.0, {0.1, 0.3, 0.1}, false}).degenerate);
}

TEST_CASE("validate_params rejects each violated bound") {
  CHECK(code_of([] { validate_params(1.0, {0.6, 0.6}); }) == ErrorCode::CMassNotBelowOne);
  CHECK(code_of([] { validate_params(0.0, {0.2}); }) == ErrorCode::NonPositiveBeta);
  CHECK(code_of([] { validate_params(-1.0, {0.2}); }) == ErrorCode::NonPositiveBeta);
  CHECK(code_of([] { validate_params(1.0, {0.2, 0.0}); }) == ErrorCode::NonPositiveC);
  CHECK(code_of([] { validate_params(1.0, {}); }) == ErrorCode::InvalidDimension);
  CHECK(code_of([] { validate_params(std::nan(""), {0.2}); }) == ErrorCode::NonPositiveBeta);

  try {
    validate_params(1.0, {0.6, 0.6});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("1.2") != std::string::npos);
  }
}

TEST_CASE("shifted factorial") {
  CHECK(shifted_factorial(3.0, 0) == 1.0);
  CHECK(shifted_factorial(1.5, 2) == 3.75);
  CHECK(shifted_factorial(-2.0, 3) == 0.0);
  CHECK(shifted_factorial(-2.0, 2) == 2.0);

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ua(0.1, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = ua(gen);
    const int k = static_cast<int>(gen() % 30);
    CHECK(shifted_factorial(a, k + 1) == doctest::Approx(shifted_factorial(a, k) * (a + k)).epsilon(1e-14));
    CHECK(log_shifted_factorial(a, k) == doctest::Approx(std::log(shifted_factorial(a, k))).epsilon(1e-12));
  }
  // far past the double range of (a)_k
  CHECK(std::isfinite(log_shifted_factorial(1.5, 400)));
  CHECK(log_shifted_factorial(1.5, 400) ==
        doctest::Approx(std::lgamma(401.5) - std::lgamma(1.5)).epsilon(1e-13));
}

TEST_CASE("MultiIndex arithmetic") {
  const MultiIndex x{2, 0, 1};
  CHECK(x.total() == 3);
  CHECK(x.plus(1) == MultiIndex{2, 1, 1});
  CHECK(x.minus(0) == MultiIndex{1, 0, 1});
  CHECK(code_of([&] { (void)x.minus(1); }) == ErrorCode::InvalidIndex);
  CHECK(code_of([] { MultiIndex{1, -1}; }) == ErrorCode::InvalidIndex);
  CHECK(x.to_string() == "2;0;1");
  CHECK(MultiIndex::unit(3, 2) == MultiIndex{0, 0, 1});
}

TEST_CASE("enumerate_lattice examples and order") {
  const auto a = enumerate_lattice(1, 3);
  REQUIRE(a.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(a[static_cast<std::size_t>(i)] == MultiIndex{i});

  const auto b = enumerate_lattice(2, 1);
  REQUIRE(b.size() == 3);
  CHECK(b[0] == MultiIndex{0, 0});
  CHECK(b[1] == MultiIndex{1, 0});
  CHECK(b[2] == MultiIndex{0, 1});

  CHECK(enumerate_lattice(3, 2).size() == 10);
}

TEST_CASE("lattice count, uniqueness, closure and rank") {
  for (int n = 1; n <= 4; ++n) {
    for (int S = 0; S <= 7; ++S) {
      const auto pts = enumerate_lattice(n, S);
      CHECK(static_cast<double>(pts.size()) == binomial(S + n, n));
      const std::set<MultiIndex> uniq(pts.begin(), pts.end());
      CHECK(uniq.size() == pts.size());
      CHECK(std::is_sorted(pts.begin(), pts.end(), graded_lex_less));
      for (const auto& x : pts) {
        CHECK(x.total() <= S);
        for (int j = 0; j < n; ++j) {
          if (x[j] > 0) CHECK(uniq.count(x.minus(j)) == 1);
        }
      }
      const Lattice lat(n, S);
      for (std::size_t r = 0; r < lat.size(); ++r) CHECK(*lat.rank(lat.point(r)) == r);
      MultiIndex outside(n);
      outside[0] = S + 1;
      CHECK_FALSE(lat.rank(outside).has_value());
      CHECK_FALSE(lat.contains(outside));
      std::size_t shell_total = 0;
      for (int s = 0; s <= S; ++s) shell_total += enumerate_shell(n, s).size();
      CHECK(shell_total == pts.size());
    }
  }
}

TEST_CASE("weight matches the closed form and stays finite at large |x|") {
  const auto p = validate_params(1.5, {0.2, 0.3});
  for (const auto& x : enumerate_lattice(2, 12)) {
    const double ref = static_cast<double>(oracle::weight(p.beta, p.c, x.entries()));
    CHECK(weight(p, x) == doctest::Approx(ref).epsilon(1e-12));
  }
  const double far = weight(p, MultiIndex{150, 150});
  CHECK(std::isfinite(far));
  CHECK(far >= 0.0);
  CHECK(std::isfinite(log_weight(p, MultiIndex{400, 300})));
}

TEST_CASE("tail_bound") {
  const auto p = validate_params(1.0, {0.2, 0.3});
  CHECK(tail_bound(p, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tail_bound(p, 40) < 1e-11);

  for (double beta : {0.7, 1.5, 4.0}) {
    for (const auto& c : std::vector<std::vector<double>>{{0.3}, {0.2, 0.3}, {0.1, 0.2, 0.3}, {0.5, 0.45}}) {
      const auto q = validate_params(beta, c);
      double prev = 1.0;
      for (int S : {0, 1, 5, 20, 60, 150}) {
        const double tb = tail_bound(q, S);
        CHECK(tb == doctest::Approx(oracle::tail(beta, q.c_mass(), S)).epsilon(1e-12));
        CHECK(tb <= prev);
        prev = tb;
      }
    }
  }
}

TEST_CASE("lattice mass plus tail is one") {
  for (const auto& c : std::vector<std::vector<double>>{{0.5}, {0.2, 0.3}, {0.1, 0.2, 0.3}}) {
    const auto p = validate_params(1.5, c);
    for (int S : {0, 3, 10, 25}) {
      const auto pts = enumerate_lattice(p.n(), S);
      double mass = 0.0;
      for (const auto& x : pts) mass += weight(p, x);
      const double eps = 4 * std::numeric_limits<double>::epsilon() * static_cast<double>(pts.size());
      CHECK(std::abs(mass + tail_bound(p, S) - 1.0) <= eps);
    }
  }
}

TEST_CASE("cutoff_for_tail") {
  const auto p = validate_params(1.5, {0.2, 0.3});
  const int S = cutoff_for_tail(p, 1e-10);
  CHECK(tail_bound(p, S) <= 1e-10);
  CHECK(tail_bound(p, S - 1) > 1e-10);
  CHECK(cutoff_for_tail(p, 1e-10, 1.0, S + 7) == S + 7);
  const auto tr = make_truncation(p, S);
  CHECK(tr.cutoff == S);
  CHECK(tr.tail == tail_bound(p, S));
}

TEST_CASE("rng streams are reproducible and distinct") {
  Xoshiro256 a(42, 3), b(42, 3), c(42, 4);
  bool differs = false;
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto va = a();
    CHECK(va == b());
    differs = differs || va != c();
    const double u = Xoshiro256(9, static_cast<std::uint64_t>(i)).uniform_open0();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    mean += u;
  }
  CHECK(differs);
  CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
}
