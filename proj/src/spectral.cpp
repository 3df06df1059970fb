#include "meixner/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "meixner/error.hpp"

namespace meixner {

namespace {

/// Pole 1/c_g with weight w_g: the secular function is
/// sum_g w_g c_g/(c_g lambda - 1) + 1.
struct Pole {
  double c;
  double weight;
  double at() const { return 1.0 / c; }
};

double weighted_secular(const std::vector<Pole>& poles, double lambda) {
  double s = 1.0;
  for (const auto& q : poles) s += q.weight * q.c / (q.c * lambda - 1.0);
  return s;
}

double weighted_secular_derivative(const std::vector<Pole>& poles, double lambda) {
  double d = 0.0;
  for (const auto& q : poles) {
    const double den = q.c * lambda - 1.0;
    d -= q.weight * q.c * q.c / (den * den);
  }
  return d;
}

// The secular function is strictly decreasing between poles, positive at the
// left end of each bracket and negative at the right end.
double bracketed_root(const std::vector<Pole>& poles, double lo, double hi) {
  constexpr int kBisection = 80;
  constexpr int kNewton = 3;
  const double left = lo;
  const double right = hi;
  for (int it = 0; it < kBisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (weighted_secular(poles, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < kNewton; ++it) {
    const double f = weighted_secular(poles, x);
    const double df = weighted_secular_derivative(poles, x);
    if (f == 0.0 || df == 0.0) break;
    const double next = x - f / df;
    if (!(next > left && next < right)) break;
    if (std::abs(weighted_secular(poles, next)) > std::abs(f)) break;
    x = next;
  }
  // keep whichever nearby double gives the smallest residual
  double best = x;
  double best_f = std::abs(weighted_secular(poles, x));
  double probe = x;
  for (int k = 0; k < 4; ++k) {
    probe = std::nextafter(probe, left);
    if (probe <= left) break;
    if (const double f = std::abs(weighted_secular(poles, probe)); f < best_f) best = probe, best_f = f;
  }
  probe = x;
  for (int k = 0; k < 4; ++k) {
    probe = std::nextafter(probe, right);
    if (probe >= right) break;
    if (const double f = std::abs(weighted_secular(poles, probe)); f < best_f) best = probe, best_f = f;
  }
  return best;
}

// Poles sorted by location, i.e. c descending.
std::vector<double> secular_roots(std::vector<Pole> poles) {
  std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) { return a.at() < b.at(); });
  std::vector<double> roots;
  roots.reserve(poles.size());
  double lo = 0.0;
  for (const auto& q : poles) {
    const double hi = q.at();
    roots.push_back(bracketed_root(poles, lo, hi));
    lo = hi;
  }
  return roots;
}

std::vector<std::vector<double>> coincident_groups(const ModelParams& p) {
  std::vector<double> sorted = p.c;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::vector<double>> groups;
  for (double c : sorted) {
    if (!groups.empty() && coincident(groups.back().front(), c)) {
      groups.back().push_back(c);
    } else {
      groups.push_back({c});
    }
  }
  return groups;
}

}  // namespace

double ConstraintResiduals::max() const noexcept {
  return std::max({secular, u_linear, u_quadratic, b_linear, b_quadratic});
}

Eigen::MatrixXd characteristic_matrix(const ModelParams& p) {
  const int n = p.n();
  Eigen::MatrixXd F = Eigen::MatrixXd::Constant(n, n, -1.0);
  for (int i = 0; i < n; ++i) F(i, i) += 1.0 / p.c[static_cast<std::size_t>(i)];
  return F;
}

double secular_function(const ModelParams& p, double lambda) {
  double s = 1.0;
  for (double c : p.c) s += c / (c * lambda - 1.0);
  return s;
}

double secular_residual(const ModelParams& p, double lambda) {
  double s = 1.0;
  double scale = 1.0;
  for (double c : p.c) {
    const double term = c / (c * lambda - 1.0);
    s += term;
    scale += std::abs(term);
  }
  return std::abs(s) / scale;
}

std::vector<double> solve_spectrum(const ModelParams& p) {
  if (p.degenerate) {
    throw Error(ErrorCode::DegenerateParameters,
                "the rate parameters c_j must be distinct for the secular solver; coincident c collapse "
                "its pole structure, use degenerate_spectrum");
  }
  std::vector<Pole> poles;
  poles.reserve(p.c.size());
  for (double c : p.c) poles.push_back({c, 1.0});
  auto roots = secular_roots(std::move(poles));
  for (double r : roots) {
    const double res = secular_residual(p, r);
    if (res > kSecularTolerance) {
      std::ostringstream os;
      os << "secular root " << r << " has residual " << res;
      throw Error(ErrorCode::ConstraintViolation, os.str());
    }
  }
  return roots;
}

std::vector<SpectrumRoot> degenerate_spectrum(const ModelParams& p) {
  if (!p.degenerate) {
    throw Error(ErrorCode::NotDegenerate, "all c_j are distinct; use solve_spectrum");
  }
  const auto groups = coincident_groups(p);
  std::vector<Pole> poles;
  std::vector<SpectrumRoot> out;
  for (const auto& g : groups) {
    const double c = g.front();
    poles.push_back({c, static_cast<double>(g.size())});
    if (g.size() > 1) out.push_back({1.0 / c, static_cast<int>(g.size()) - 1});
  }
  for (double r : secular_roots(std::move(poles))) out.push_back({r, 1});
  std::sort(out.begin(), out.end(), [](const SpectrumRoot& a, const SpectrumRoot& b) { return a.value < b.value; });
  return out;
}

std::vector<double> dense_spectrum(const ModelParams& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(characteristic_matrix(p), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

ConstraintResiduals constraint_residuals(const ModelParams& p, const Eigen::VectorXd& lambda,
                                         const Eigen::MatrixXd& u) {
  const int n = p.n();
  const double cm1 = p.c_mass() - 1.0;
  ConstraintResiduals r;
  for (int j = 0; j < n; ++j) {
    r.secular = std::max(r.secular, secular_residual(p, lambda(j)));
    double su = 0.0;
    double sb = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ci = p.c[static_cast<std::size_t>(i)];
      su += ci * u(i, j);
      sb += ci * (1.0 - u(i, j));
    }
    r.u_linear = std::max(r.u_linear, std::abs(su - cm1));
    r.b_linear = std::max(r.b_linear, std::abs(sb - 1.0));
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      double suu = 0.0;
      double sbb = 0.0;
      for (int i = 0; i < n; ++i) {
        const double ci = p.c[static_cast<std::size_t>(i)];
        suu += ci * u(i, j) * u(i, k);
        sbb += ci * (1.0 - u(i, j)) * (1.0 - u(i, k));
      }
      r.u_quadratic = std::max(r.u_quadratic, std::abs(suu - cm1));
      r.b_quadratic = std::max(r.b_quadratic, std::abs(sbb - 1.0));
    }
  }
  return r;
}

SpectralData build_u(const ModelParams& p, const std::vector<double>& lambda) {
  if (p.degenerate) {
    throw Error(ErrorCode::DegenerateParameters,
                "all c_j must be distinct for the hypergeometric formula; it does not apply to coincident c");
  }
  const int n = p.n();
  if (static_cast<int>(lambda.size()) != n) {
    throw Error(ErrorCode::InvalidDimension, "need one eigenvalue per rate parameter");
  }
  SpectralData sd;
  sd.lambda = Eigen::Map<const Eigen::VectorXd>(lambda.data(), n);
  sd.u.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const double ci = p.c[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) sd.u(i, j) = ci * lambda[static_cast<std::size_t>(j)] / (ci * lambda[static_cast<std::size_t>(j)] - 1.0);
  }
  sd.b = Eigen::MatrixXd::Ones(n, n) - sd.u;
  const double one_minus = 1.0 - p.c_mass();
  sd.cbar.resize(n);
  for (int j = 0; j < n; ++j) {
    double s = one_minus;
    for (int i = 0; i < n; ++i) s += p.c[static_cast<std::size_t>(i)] * sd.u(i, j) * sd.u(i, j);
    sd.cbar(j) = one_minus / s;
  }
  sd.residuals = constraint_residuals(p, sd.lambda, sd.u);
  if (sd.residuals.max() > kConstraintTolerance) {
    std::ostringstream os;
    os << "constraint residual " << sd.residuals.max() << " exceeds " << kConstraintTolerance;
    throw Error(ErrorCode::ConstraintViolation, os.str());
  }
  return sd;
}

SpectralData build_spectral(const ModelParams& p) { return build_u(p, solve_spectrum(p)); }

}  // namespace meixner
