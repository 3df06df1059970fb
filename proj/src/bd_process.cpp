#include "meixner/bd_process.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <sstream>

#include "meixner/error.hpp"
#include "meixner/operators.hpp"
#include "meixner/rng.hpp"

namespace meixner {

namespace {

double log_dual_weight(const ModelParams& p, const SpectralData& sd, const MultiIndex& m) {
  double lw = log_shifted_factorial(p.beta, m.total());
  for (int j = 0; j < m.size(); ++j) lw += m[j] * std::log(sd.cbar(j)) - std::lgamma(m[j] + 1.0);
  return lw;
}

}  // namespace

double dual_weight(const ModelParams& p, const SpectralData& sd, const MultiIndex& m) {
  return std::exp(log_dual_weight(p, sd, m));
}

DualWeightSum dual_weight_sum(const ModelParams& p, const SpectralData& sd, int M) {
  DualWeightSum s;
  s.cbar_mass = sd.cbar.sum();
  for (const auto& m : enumerate_lattice(p.n(), M)) s.partial += dual_weight(p, sd, m);
  s.limit = std::pow(1.0 - s.cbar_mass, -p.beta);
  return s;
}

// ---------------------------------------------------------------------------

OrthogonalityReport orthogonality_check(const ModelParams& p, const SpectralData& sd, int max_deg, int S,
                                        double eps) {
  const PolyTable table = poly_table(p, sd, max_deg, S);
  OrthogonalityReport rep;
  rep.degrees = table.degrees;
  rep.cutoff = S;
  rep.tail = tail_bound(p, S);
  rep.max_abs_poly = table.values.cwiseAbs().maxCoeff();
  if (rep.tail * rep.max_abs_poly * rep.max_abs_poly > eps) {
    std::ostringstream os;
    os << "tail_bound(" << S << ") * max|P|^2 = " << rep.tail * rep.max_abs_poly * rep.max_abs_poly
       << " exceeds " << eps;
    throw Error(ErrorCode::TailTooLarge, os.str());
  }
  Eigen::VectorXd w(static_cast<Eigen::Index>(table.points.size()));
  for (std::size_t r = 0; r < table.points.size(); ++r) w(static_cast<Eigen::Index>(r)) = weight(p, table.points[r]);
  const Eigen::MatrixXd gram = table.values * w.asDiagonal() * table.values.transpose();
  const auto K = static_cast<Eigen::Index>(table.degrees.size());
  rep.residuals.resize(K, K);
  for (Eigen::Index a = 0; a < K; ++a) {
    for (Eigen::Index b = 0; b < K; ++b) {
      if (a == b) {
        const double norm = 1.0 / dual_weight(p, sd, table.degrees[static_cast<std::size_t>(a)]);
        rep.residuals(a, b) = std::abs(gram(a, b) - norm) / norm;
        rep.max_diag_rel = std::max(rep.max_diag_rel, rep.residuals(a, b));
      } else {
        rep.residuals(a, b) = std::abs(gram(a, b));
        rep.max_offdiag = std::max(rep.max_offdiag, rep.residuals(a, b));
      }
    }
  }
  return rep;
}

int orthogonality_cutoff(const ModelParams& p, const SpectralData& sd, int max_deg, double eps, int S_min) {
  const auto degrees = enumerate_lattice(p.n(), max_deg);
  double maxp = 0.0;
  for (int S = 0; S <= 2000; ++S) {
    for (const auto& x : enumerate_shell(p.n(), S)) {
      for (const auto& m : degrees) maxp = std::max(maxp, std::abs(meixner_eval(p, sd, m, x)));
    }
    if (S >= S_min && tail_bound(p, S) * maxp * maxp <= eps) return S;
  }
  throw Error(ErrorCode::TailTooLarge, "no cutoff up to 2000 reaches the requested tail target");
}

MomentReport moment_check(const ModelParams& p, int S) {
  const int n = p.n();
  MomentReport rep;
  rep.mean = Eigen::VectorXd::Zero(n);
  rep.second = Eigen::MatrixXd::Zero(n, n);
  // shells summed from the outside in keep the small terms from being swamped
  auto pts = enumerate_lattice(n, S);
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    const double w = weight(p, *it);
    rep.mass += w;
    for (int j = 0; j < n; ++j) {
      rep.mean(j) += w * (*it)[j];
      for (int k = 0; k < n; ++k) rep.second(j, k) += w * (*it)[j] * (*it)[k];
    }
  }
  const double om = 1.0 - p.c_mass();
  for (int j = 0; j < n; ++j) {
    const double cj = p.c[static_cast<std::size_t>(j)];
    rep.mean_residual = std::max(rep.mean_residual, std::abs(rep.mean(j) - cj * p.beta / om));
    for (int k = 0; k < n; ++k) {
      const double ck = p.c[static_cast<std::size_t>(k)];
      double expect = p.beta * (p.beta + 1.0) * cj * ck / (om * om);
      if (j == k) expect += p.beta * cj / om;
      rep.second_residual = std::max(rep.second_residual, std::abs(rep.second(j, k) - expect));
    }
  }
  return rep;
}

double phi_hat(const ModelParams& p, const SpectralData& sd, const MultiIndex& m, const MultiIndex& x) {
  return std::exp(0.5 * (log_weight(p, x) + log_dual_weight(p, sd, m))) * meixner_eval(p, sd, m, x);
}

double completeness_residual(const ModelParams& p, const SpectralData& sd, const MultiIndex& x,
                             const MultiIndex& y, int M) {
  double s = 0.0;
  for (const auto& m : enumerate_lattice(p.n(), M)) s += phi_hat(p, sd, m, x) * phi_hat(p, sd, m, y);
  return std::abs(s - (x == y ? 1.0 : 0.0));
}

// ---------------------------------------------------------------------------

namespace {

struct ShellSums {
  double phi = 0.0;
  double reduced = 0.0;
};

// Contribution of the shell |m| = s to both forms of T(x, y; t), without
// the prefactors sqrt(W(x)/W(y)) and W(x).
ShellSums shell_sum(const ModelParams& p, const SpectralData& sd, const MultiIndex& x, const MultiIndex& y,
                    double t, int s) {
  ShellSums out;
  const double sx = 0.5 * log_weight(p, x);
  const double sy = 0.5 * log_weight(p, y);
  for (const auto& m : enumerate_shell(p.n(), s)) {
    const double ld = log_dual_weight(p, sd, m);
    const double decay = std::exp(-eigenvalue_of(sd, m) * t);
    const double px = meixner_eval(p, sd, m, x);
    const double py = meixner_eval(p, sd, m, y);
    const double phx = std::exp(sx + 0.5 * ld) * px;
    const double phy = std::exp(sy + 0.5 * ld) * py;
    out.phi += decay * phx * phy;
    out.reduced += std::exp(ld) * decay * px * py;
  }
  return out;
}

void finish_report(const ModelParams& p, TransitionReport& rep, double phi_sum, double reduced_sum) {
  const double lx = log_weight(p, rep.x);
  const double ly = log_weight(p, rep.y);
  rep.spectral_value = std::exp(0.5 * (lx - ly)) * phi_sum;
  rep.reduced_value = std::exp(lx) * reduced_sum;
  rep.form_gap = std::abs(rep.spectral_value - rep.reduced_value);
}

void check_time(double t) {
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "t must be nonnegative, got " + std::to_string(t));
}

}  // namespace

TransitionReport transition_prob(const ModelParams& p, const SpectralData& sd, const MultiIndex& x,
                                 const MultiIndex& y, double t, int M) {
  check_time(t);
  TransitionReport rep;
  rep.x = x;
  rep.y = y;
  rep.t = t;
  rep.M_cutoff = M;
  double phi = 0.0;
  double reduced = 0.0;
  for (int s = 0; s <= M; ++s) {
    const auto sh = shell_sum(p, sd, x, y, t, s);
    phi += sh.phi;
    reduced += sh.reduced;
    if (s == M) rep.last_shell = std::abs(std::exp(log_weight(p, x)) * sh.reduced);
  }
  finish_report(p, rep, phi, reduced);
  return rep;
}

TransitionReport transition_prob_adaptive(const ModelParams& p, const SpectralData& sd, const MultiIndex& x,
                                          const MultiIndex& y, double t, double eps, int M_max) {
  check_time(t);
  TransitionReport rep;
  rep.x = x;
  rep.y = y;
  rep.t = t;
  double phi = 0.0;
  double reduced = 0.0;
  int quiet = 0;
  int s = 0;
  for (; s <= M_max; ++s) {
    const auto sh = shell_sum(p, sd, x, y, t, s);
    phi += sh.phi;
    reduced += sh.reduced;
    rep.last_shell = std::abs(std::exp(log_weight(p, x)) * sh.reduced);
    quiet = std::abs(sh.reduced) <= eps * std::abs(reduced) ? quiet + 1 : 0;
    if (s > 0 && quiet >= 2) break;
  }
  rep.M_cutoff = std::min(s, M_max);
  finish_report(p, rep, phi, reduced);
  return rep;
}

SpectralKernel::SpectralKernel(const ModelParams& p, const SpectralData& sd, int S, int M)
    : lattice_(p.n(), S), table_(poly_table(p, sd, M, S)) {
  weight_.resize(static_cast<Eigen::Index>(lattice_.size()));
  for (std::size_t r = 0; r < lattice_.size(); ++r) weight_(static_cast<Eigen::Index>(r)) = weight(p, lattice_.point(r));
  const auto K = static_cast<Eigen::Index>(table_.degrees.size());
  dual_.resize(K);
  energy_.resize(K);
  for (Eigen::Index a = 0; a < K; ++a) {
    dual_(a) = dual_weight(p, sd, table_.degrees[static_cast<std::size_t>(a)]);
    energy_(a) = eigenvalue_of(sd, table_.degrees[static_cast<std::size_t>(a)]);
  }
}

Eigen::MatrixXd SpectralKernel::matrix(double t) const {
  check_time(t);
  const Eigen::VectorXd coef = (dual_.array() * (-energy_.array() * t).exp()).matrix();
  return weight_.asDiagonal() * (table_.values.transpose() * coef.asDiagonal() * table_.values);
}

ChapmanKolmogorovReport chapman_kolmogorov_check(const ModelParams& p, const SpectralData& sd, const MultiIndex& x,
                                                 const MultiIndex& y, double t, double t_prime, int S, int M) {
  check_time(t);
  check_time(t_prime);
  const SpectralKernel kernel(p, sd, S, M);
  const auto rx = kernel.lattice().rank(x);
  const auto ry = kernel.lattice().rank(y);
  if (!rx || !ry) throw Error(ErrorCode::TruncationBoundary, "x and y must lie inside |x| <= S");
  const auto ix = static_cast<Eigen::Index>(*rx);
  const auto iy = static_cast<Eigen::Index>(*ry);
  ChapmanKolmogorovReport rep;
  rep.lhs = kernel.matrix(t + t_prime)(ix, iy);
  const Eigen::MatrixXd Ta = kernel.matrix(t);
  const Eigen::MatrixXd Tb = kernel.matrix(t_prime);
  rep.rhs = Ta.row(ix).dot(Tb.col(iy));
  rep.residual = std::abs(rep.lhs - rep.rhs);
  rep.truncation_estimate = tail_bound(p, S) + transition_prob(p, sd, x, y, t + t_prime, M).last_shell;
  return rep;
}

// ---------------------------------------------------------------------------

double EmpiricalDistribution::frequency(const MultiIndex& y) const {
  auto it = counts.find(y);
  if (it == counts.end() || n_traj == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(n_traj);
}

double EmpiricalDistribution::stderr_of(const MultiIndex& y) const {
  if (n_traj == 0) return 0.0;
  const double f = frequency(y);
  return std::sqrt(f * (1.0 - f) / static_cast<double>(n_traj));
}

EmpiricalDistribution simulate(const ModelParams& p, const MultiIndex& x0, double t, std::uint64_t seed,
                               long n_traj) {
  check_time(t);
  if (x0.size() != p.n()) throw Error(ErrorCode::InvalidDimension, "x0 must have n entries");
  const int n = p.n();
  EmpiricalDistribution emp;
  emp.x0 = x0;
  emp.t = t;
  emp.seed = seed;
  emp.n_traj = n_traj;
  std::vector<double> rates(static_cast<std::size_t>(2 * n));
  for (long k = 0; k < n_traj; ++k) {
    Xoshiro256 rng(seed, static_cast<std::uint64_t>(k));
    MultiIndex x = x0;
    double clock = 0.0;
    long events = 0;
    for (;;) {
      double total = 0.0;
      const double birth = p.beta + x.total();
      for (int j = 0; j < n; ++j) {
        rates[static_cast<std::size_t>(j)] = birth;
        rates[static_cast<std::size_t>(n + j)] = death_rate(p, x, j);
        total += birth + rates[static_cast<std::size_t>(n + j)];
      }
      clock += -std::log(rng.uniform_open0()) / total;
      if (clock > t) break;
      if (events == kEventCap) {
        ++emp.cap_hits;
        break;
      }
      double target = rng.uniform_open0() * total;
      int event = 2 * n - 1;
      for (int e = 0; e < 2 * n; ++e) {
        target -= rates[static_cast<std::size_t>(e)];
        if (target <= 0.0) {
          event = e;
          break;
        }
      }
      // guard the rounding edge: never fire a zero-rate death
      while (rates[static_cast<std::size_t>(event)] == 0.0) --event;
      if (event < n) {
        ++x[event];
      } else {
        --x[event - n];
      }
      ++events;
    }
    ++emp.counts[x];
  }
  return emp;
}

SimulationComparison compare_with_spectral(const ModelParams& p, const SpectralData& sd,
                                           const EmpiricalDistribution& emp, double eps, int M_max) {
  SimulationComparison cmp;
  const auto N = static_cast<double>(emp.n_traj);
  int max_total = 0;
  for (const auto& [y, cnt] : emp.counts) max_total = std::max(max_total, y.total());
  const int scan = max_total + 5;

  ComparisonRow pooled;
  double big_mass = 0.0;
  long big_count = 0;
  for (const auto& y : enumerate_lattice(p.n(), scan)) {
    const auto it = emp.counts.find(y);
    const long cnt = it == emp.counts.end() ? 0 : it->second;
    const double prob = std::max(0.0, transition_prob_adaptive(p, sd, y, emp.x0, emp.t, eps, M_max).reduced_value);
    if (cnt == 0 && N * prob < 5.0) continue;
    ComparisonRow row;
    row.state = y;
    row.count = cnt;
    row.frequency = emp.frequency(y);
    row.stderr_value = emp.stderr_of(y);
    row.spectral = prob;
    const double var = N * prob * (1.0 - prob);
    row.z = var > 0.0 ? (static_cast<double>(cnt) - N * prob) / std::sqrt(var) : (cnt == 0 ? 0.0 : INFINITY);
    cmp.rows.push_back(row);
    if (N * prob >= 5.0) {
      cmp.bins.push_back(row);
      big_mass += prob;
      big_count += cnt;
    }
  }
  pooled.count = emp.n_traj - big_count;
  pooled.spectral = std::max(0.0, 1.0 - big_mass);
  pooled.frequency = static_cast<double>(pooled.count) / N;
  pooled.stderr_value = std::sqrt(pooled.frequency * (1.0 - pooled.frequency) / N);
  if (N * pooled.spectral >= 5.0) {
    const double var = N * pooled.spectral * (1.0 - pooled.spectral);
    pooled.z = (static_cast<double>(pooled.count) - N * pooled.spectral) / std::sqrt(var);
    cmp.bins.push_back(pooled);
  } else if (!cmp.bins.empty()) {
    // too thin for its own bin: fold into the last one
    auto& last = cmp.bins.back();
    last.count += pooled.count;
    last.spectral += pooled.spectral;
    last.frequency = static_cast<double>(last.count) / N;
    const double var = N * last.spectral * (1.0 - last.spectral);
    last.z = (static_cast<double>(last.count) - N * last.spectral) / std::sqrt(var);
  }
  for (const auto& b : cmp.bins) {
    const double expected = N * b.spectral;
    const double diff = static_cast<double>(b.count) - expected;
    cmp.chi2 += diff * diff / expected;
    cmp.max_abs_z = std::max(cmp.max_abs_z, std::abs(b.z));
  }
  cmp.dof = static_cast<int>(cmp.bins.size()) - 1;
  if (cmp.dof > 0) {
    const boost::math::chi_squared dist(cmp.dof);
    cmp.p_value = boost::math::cdf(boost::math::complement(dist, cmp.chi2));
  }
  return cmp;
}

}  // namespace meixner
