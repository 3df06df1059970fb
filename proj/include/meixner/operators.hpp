#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "meixner/error.hpp"
#include "meixner/model.hpp"
#include "meixner/spectral.hpp"

namespace meixner {

/// Meixner birth rate B_j(x) = beta + |x| (independent of j).
inline double birth_rate(const ModelParams& p, const MultiIndex& x, int /*j*/) { return p.beta + x.total(); }
/// Meixner death rate D_j(x) = x_j / c_j; zero on the face x_j = 0.
inline double death_rate(const ModelParams& p, const MultiIndex& x, int j) {
  return x[j] / p.c[static_cast<std::size_t>(j)];
}

/// Function on a truncated lattice, stored in graded-lex order.
struct LatticeFunction {
  std::shared_ptr<const Lattice> lattice;
  std::vector<double> values;

  template <class F>
  static LatticeFunction sample(std::shared_ptr<const Lattice> lat, F&& f) {
    LatticeFunction out{std::move(lat), {}};
    out.values.reserve(out.lattice->size());
    for (const auto& x : out.lattice->points()) out.values.push_back(f(x));
    return out;
  }

  /// Throws TruncationBoundary outside the truncation.
  double operator()(const MultiIndex& x) const;
};

/// (H~ f)(x) = sum_j (beta+|x|)(f(x) - f(x+e_j)) + sum_j (x_j/c_j)(f(x) - f(x-e_j)).
/// The death term is skipped when x_j = 0, so f is never read off N_0^n.
template <class F>
double apply_htilde(const ModelParams& p, F&& f, const MultiIndex& x) {
  const int n = p.n();
  const double fx = f(x);
  const double B = p.beta + x.total();
  double out = 0.0;
  for (int j = 0; j < n; ++j) out += B * (fx - f(x.plus(j)));
  for (int j = 0; j < n; ++j) {
    if (x[j] == 0) continue;
    out += death_rate(p, x, j) * (fx - f(x.minus(j)));
  }
  return out;
}

/// Lattice-function form; x + e_j must stay inside the truncation
/// (TruncationBoundary otherwise).
double apply_Htilde(const ModelParams& p, const LatticeFunction& f, const MultiIndex& x);

/// max over the sample of |H~P_m(x) - E(m) P_m(x)| / (1 + |P_m(x)|),
/// E(m) = sum_j m_j lambda_j.
double eigen_check(const ModelParams& p, const SpectralData& sd, const MultiIndex& m,
                   std::span<const MultiIndex> sample);

double eigenvalue_of(const SpectralData& sd, const MultiIndex& m);

/// Nearest-neighbour operator on {|x| <= S}: a diagonal plus, for every
/// direction j, one band coupling x to x+e_j and one coupling x to x-e_j.
/// Couplings that leave the truncation are dropped.
class NearestNeighbourMatrix {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  explicit NearestNeighbourMatrix(std::shared_ptr<const Lattice> lattice);

  const Lattice& lattice() const noexcept { return *lattice_; }
  std::shared_ptr<const Lattice> lattice_ptr() const noexcept { return lattice_; }
  std::size_t size() const noexcept { return diag_.size(); }

  double& diag(std::size_t r) { return diag_[r]; }
  double diag(std::size_t r) const { return diag_[r]; }
  /// coefficient of f(x + e_j) in row x; index npos when x + e_j is outside.
  std::size_t up_index(int j, std::size_t r) const { return up_index_[static_cast<std::size_t>(j)][r]; }
  double& up(int j, std::size_t r) { return up_[static_cast<std::size_t>(j)][r]; }
  double up(int j, std::size_t r) const { return up_[static_cast<std::size_t>(j)][r]; }
  /// coefficient of f(x - e_j) in row x; index npos when x_j = 0.
  std::size_t down_index(int j, std::size_t r) const { return down_index_[static_cast<std::size_t>(j)][r]; }
  double& down(int j, std::size_t r) { return down_[static_cast<std::size_t>(j)][r]; }
  double down(int j, std::size_t r) const { return down_[static_cast<std::size_t>(j)][r]; }

  Eigen::VectorXd multiply(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd to_dense() const;

 private:
  std::shared_ptr<const Lattice> lattice_;
  std::vector<double> diag_;
  std::vector<std::vector<std::size_t>> up_index_, down_index_;
  std::vector<std::vector<double>> up_, down_;
};

/// H_xy = sum_j (B_j+D_j) delta_xy - sqrt(B_j(x) D_j(x+e_j)) delta_{x+e_j,y}
///        - sqrt(B_j(x-e_j) D_j(x)) delta_{x-e_j,y}.
/// Each edge weight is computed once and written to both triangles, so the
/// result is bitwise symmetric.
NearestNeighbourMatrix build_H(const ModelParams& p, int S);

/// Generator of the birth-death chain:
/// (L f)(x) = -sum_j (B_j+D_j)(x) f(x) + sum_j B_j(x-e_j) f(x-e_j) + sum_j D_j(x+e_j) f(x+e_j).
NearestNeighbourMatrix build_LBD(const ModelParams& p, int S);

/// A_j = sqrt(B_j(x)) - e^{d_j} sqrt(D_j(x)) as a dense matrix: rows are the
/// points with |x| <= S-1 (those whose x+e_j exists), columns all of {|x| <= S}.
Eigen::MatrixXd build_A(const ModelParams& p, const Lattice& lattice, int j);

struct FactorizationReport {
  double factorization = 0.0;  ///< max |H - sum_j A_j^T A_j| over interior rows
  double zero_mode_A = 0.0;  ///< max_j max_x |(A_j sqrt W)(x)|
};

FactorizationReport factorization_check(const ModelParams& p, int S);

/// max over interior rows of |(H sqrt W)(x)| divided by ||sqrt W||_2.
double zero_mode_residual(const ModelParams& p, int S);

/// Smallest eigenvalue of H restricted to the interior points |x| <= S-1.
double min_interior_eigenvalue(const ModelParams& p, int S);

/// Both sides of H~ G = (sum_k lambda_k t_k d/dt_k) G at one (x, t).
/// The derivative uses central differences with step h and h/2, and the
/// Richardson combination of the two.
/// The right side uses central differences at h and h/2 combined by
/// Richardson extrapolation; `residual` is measured against that combination.
/// The plain residuals at h and h/2 are kept so their ratio shows the O(h^2)
/// behaviour of the underlying difference.
struct GenfunIdentityResult {
  double lhs = 0.0;
  double rhs = 0.0;  ///< (4 D(h/2) - D(h)) / 3
  double rhs_plain = 0.0;  ///< central difference at step h
  double rhs_half = 0.0;  ///< central difference at step h/2
  double residual = 0.0;  ///< |lhs - rhs|
  double residual_plain = 0.0;
  double residual_half = 0.0;
};

GenfunIdentityResult genfun_identity_check(const ModelParams& p, const SpectralData& sd, const MultiIndex& x,
                                           std::span<const double> t, double h);

/// `count` reproducible points (x, t) with x_i in 0..4, |t_j| < 0.15/n and
/// every factor of G at least 0.05 away from zero.
std::vector<std::pair<MultiIndex, std::vector<double>>> genfun_sample_points(const ModelParams& p,
                                                                             const SpectralData& sd, int count,
                                                                             std::uint64_t seed);

/// Observed convergence order log2(e(H)/e(H/2)) of the plain central
/// difference at a step H large enough for truncation error to dominate
/// rounding. Returns NaN when both errors sit below `noise_floor`.
double genfun_fd_order(const ModelParams& p, const SpectralData& sd, const MultiIndex& x, std::span<const double> t,
                       double H, double noise_floor = 1e-9);

}  // namespace meixner
