#include <doctest.h>

#include <cmath>

#include "meixner/bd_process.hpp"
#include "meixner/error.hpp"
#include "meixner/operators.hpp"
#include "oracles.hpp"

using namespace meixner;

namespace {

struct Instance {
  ModelParams p;
  SpectralData sd;
};

Instance make(double beta, std::vector<double> c) {
  auto p = validate_params(beta, std::move(c));
  return {p, build_spectral(p)};
}

}  // namespace

TEST_CASE("dual weight sums to (1 - |cbar|)^(-beta)") {
  for (const auto& in : {make(1.5, {0.2, 0.3}), make(0.7, {0.5})}) {
    const auto s = dual_weight_sum(in.p, in.sd, 400);
    CHECK(s.cbar_mass < 1.0);
    CHECK(s.partial == doctest::Approx(s.limit).epsilon(1e-10));
  }
  const auto in = make(1.5, {0.2, 0.3});
  CHECK(dual_weight(in.p, in.sd, MultiIndex{0, 0}) == 1.0);
  CHECK(dual_weight(in.p, in.sd, MultiIndex{0, 1}) == doctest::Approx(1.5 * in.sd.cbar[1]));
}

TEST_CASE("orthogonality relation") {
  for (const auto& in : {make(1.5, {0.2, 0.3}), make(0.7, {0.3})}) {
    const int S = orthogonality_cutoff(in.p, in.sd, 3, 1e-8);
    const auto rep = orthogonality_check(in.p, in.sd, 3, S, 1e-8);
    CHECK(rep.max_offdiag <= 1e-6);
    CHECK(rep.max_diag_rel <= 1e-6);
    CHECK(rep.residuals(0, 0) <= 1e-12);
    // degree-one norms 1/(beta cbar_j)
    const int n = in.p.n();
    for (int j = 0; j < n; ++j) {
      CHECK(1.0 / dual_weight(in.p, in.sd, MultiIndex::unit(n, j)) ==
            doctest::Approx(1.0 / (in.p.beta * in.sd.cbar[j])).epsilon(1e-14));
    }
    CHECK_THROWS_AS(orthogonality_check(in.p, in.sd, 3, 5, 1e-8), Error);
  }
}

TEST_CASE("orthogonality notices a perturbed u") {
  auto in = make(1.5, {0.2, 0.3});
  in.sd.u(0, 1) += 1e-3;
  in.sd.b = Eigen::MatrixXd::Ones(2, 2) - in.sd.u;
  const int S = orthogonality_cutoff(in.p, in.sd, 3, 1e-8);
  const auto rep = orthogonality_check(in.p, in.sd, 3, S, 1e-8);
  CHECK(std::max(rep.max_offdiag, rep.max_diag_rel) > 1e-5);
}

TEST_CASE("moments") {
  const auto one = validate_params(1.0, {0.5});
  const auto m1 = moment_check(one, 120);
  CHECK(m1.mean(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m1.mean_residual <= 1e-10);

  const auto two = validate_params(1.5, {0.2, 0.3});
  const auto m2 = moment_check(two, 80);
  CHECK(m2.mean(0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(m2.second_residual <= 1e-8);
  CHECK(m2.second(0, 1) == doctest::Approx(1.5 * 2.5 * 0.06 / 0.25).epsilon(1e-10));
  CHECK(m2.mass == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("orthonormal vectors and completeness") {
  const auto in = make(1.5, {0.2, 0.3});
  const auto pts = enumerate_lattice(2, 90);
  double n0 = 0.0, cross = 0.0;
  for (const auto& x : pts) {
    n0 += phi_hat(in.p, in.sd, MultiIndex{0, 0}, x) * phi_hat(in.p, in.sd, MultiIndex{0, 0}, x);
    cross += phi_hat(in.p, in.sd, MultiIndex{1, 0}, x) * phi_hat(in.p, in.sd, MultiIndex{0, 1}, x);
  }
  CHECK(n0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(cross) <= 1e-10);

  const MultiIndex x{1, 0}, y{1, 0}, z{0, 2};
  double prev_same = 1.0, prev_diff = 1.0;
  for (int M : {4, 8, 16, 32}) {
    const double same = completeness_residual(in.p, in.sd, x, y, M);
    const double diff = completeness_residual(in.p, in.sd, x, z, M);
    CHECK(same < prev_same);
    CHECK(diff <= prev_diff + 1e-12);
    prev_same = same;
    prev_diff = diff;
  }
  CHECK(prev_same <= 1e-6);
}

TEST_CASE("transition probability: forms, limits and the generator oracle") {
  const auto in = make(1.5, {0.2, 0.3});
  const MultiIndex x{1, 0}, y{0, 1};
  const auto r = transition_prob(in.p, in.sd, x, y, 0.5, 20);
  CHECK(r.form_gap <= 1e-10);
  CHECK(std::abs(r.spectral_value - r.reduced_value) <= 1e-10);
  CHECK(r.spectral_value >= 0.0);
  CHECK_THROWS_AS(transition_prob(in.p, in.sd, x, y, -0.1, 20), Error);

  // stationary limit
  const double t_inf = 50.0 / in.sd.lambda[0];
  CHECK(std::abs(transition_prob(in.p, in.sd, x, y, t_inf, 6).spectral_value - weight(in.p, x)) <= 1e-6);

  // initial condition approached as M grows
  double prev = 1.0;
  for (int M : {5, 10, 20, 40}) {
    const double gap = std::abs(transition_prob(in.p, in.sd, x, x, 0.02, M).spectral_value - 1.0);
    CHECK(gap <= prev + 1e-12);
    prev = gap;
  }

  // against exp(L t) of the truncated chain, built independently
  const oracle::TruncatedChain chain(1.5, {0.2, 0.3}, 45);
  const Eigen::MatrixXd P = chain.propagator(0.7);
  for (const auto& xs : enumerate_lattice(2, 3)) {
    for (const auto& ys : enumerate_lattice(2, 3)) {
      const double ref = P(chain.index_of(xs.entries()), chain.index_of(ys.entries()));
      const auto ad = transition_prob_adaptive(in.p, in.sd, xs, ys, 0.7, 1e-13, 80);
      CHECK(ad.spectral_value == doctest::Approx(ref).epsilon(1e-8).scale(1e-3));
    }
  }

  // T sums to one over the destination
  double total = 0.0;
  for (const auto& xs : enumerate_lattice(2, 40)) total += transition_prob_adaptive(in.p, in.sd, xs, y, 0.7, 1e-13, 80).spectral_value;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("kernel and Chapman-Kolmogorov") {
  const auto one = make(1.0, {0.5});
  const auto ck1 = chapman_kolmogorov_check(one.p, one.sd, MultiIndex{0}, MultiIndex{1}, 0.3, 0.3, 40, 25);
  CHECK(ck1.residual <= 1e-6);
  const auto two = make(1.5, {0.2, 0.3});
  const auto ck2 = chapman_kolmogorov_check(two.p, two.sd, MultiIndex{1, 0}, MultiIndex{0, 1}, 0.3, 0.3, 25, 12);
  CHECK(ck2.residual <= 1e-5);

  const SpectralKernel K(one.p, one.sd, 30, 25);
  const Eigen::MatrixXd T = K.matrix(0.4);
  const double direct = transition_prob(one.p, one.sd, MultiIndex{3}, MultiIndex{1}, 0.4, 25).spectral_value;
  CHECK(T(3, 1) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("simulator") {
  const auto p = validate_params(1.0, {0.5});
  const auto at0 = simulate(p, MultiIndex{2}, 0.0, 5, 1000);
  CHECK(at0.counts.size() == 1);
  CHECK(at0.counts.at(MultiIndex{2}) == 1000);
  CHECK(at0.stderr_of(MultiIndex{2}) == 0.0);

  const auto a = simulate(p, MultiIndex{0}, 1.0, 77, 20000);
  const auto b = simulate(p, MultiIndex{0}, 1.0, 77, 20000);
  CHECK(a.counts == b.counts);
  CHECK(a.cap_hits == 0);
  long total = 0;
  for (const auto& [y, k] : a.counts) total += k;
  CHECK(total == 20000);

  // long time: the empirical law approaches W
  const auto sd = build_spectral(p);
  const auto emp = simulate(p, MultiIndex{3}, 30.0, 3, 40000);
  const auto cmp = compare_with_spectral(p, sd, emp);
  CHECK(cmp.p_value > 1e-3);
  CHECK(cmp.max_abs_z <= 4.0);
  for (const auto& row : cmp.bins) {
    if (row.state.size() == 1 && row.state[0] <= 3) CHECK(row.spectral == doctest::Approx(weight(p, row.state)).epsilon(1e-6));
  }
}
