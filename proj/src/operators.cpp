#include "meixner/operators.hpp"

#include <algorithm>
#include <cmath>

#include "meixner/error.hpp"
#include "meixner/polynomials.hpp"
#include "meixner/rng.hpp"

namespace meixner {

double LatticeFunction::operator()(const MultiIndex& x) const {
  auto r = lattice->rank(x);
  if (!r) {
    throw Error(ErrorCode::TruncationBoundary, "x = (" + x.to_string() + ") lies outside the truncation");
  }
  return values[*r];
}

double apply_Htilde(const ModelParams& p, const LatticeFunction& f, const MultiIndex& x) {
  if (!f.lattice->interior(x)) {
    throw Error(ErrorCode::TruncationBoundary,
                "x + e_j leaves |x| <= " + std::to_string(f.lattice->cutoff()) + " at x = (" + x.to_string() + ")");
  }
  return apply_htilde(p, f, x);
}

double eigenvalue_of(const SpectralData& sd, const MultiIndex& m) {
  double e = 0.0;
  for (int j = 0; j < m.size(); ++j) e += m[j] * sd.lambda(j);
  return e;
}

double eigen_check(const ModelParams& p, const SpectralData& sd, const MultiIndex& m,
                   std::span<const MultiIndex> sample) {
  const double E = eigenvalue_of(sd, m);
  auto P = [&](const MultiIndex& y) { return meixner_eval(p, sd, m, y); };
  double worst = 0.0;
  for (const auto& x : sample) {
    const double px = P(x);
    const double r = std::abs(apply_htilde(p, P, x) - E * px) / (1.0 + std::abs(px));
    worst = std::max(worst, r);
  }
  return worst;
}

// ---------------------------------------------------------------------------

NearestNeighbourMatrix::NearestNeighbourMatrix(std::shared_ptr<const Lattice> lattice)
    : lattice_(std::move(lattice)), diag_(lattice_->size(), 0.0) {
  const int n = lattice_->dim();
  const std::size_t N = lattice_->size();
  up_index_.assign(static_cast<std::size_t>(n), std::vector<std::size_t>(N, npos));
  down_index_.assign(static_cast<std::size_t>(n), std::vector<std::size_t>(N, npos));
  up_.assign(static_cast<std::size_t>(n), std::vector<double>(N, 0.0));
  down_.assign(static_cast<std::size_t>(n), std::vector<double>(N, 0.0));
  for (std::size_t r = 0; r < N; ++r) {
    const auto& x = lattice_->point(r);
    for (int j = 0; j < n; ++j) {
      if (auto up = lattice_->rank(x.plus(j))) up_index_[static_cast<std::size_t>(j)][r] = *up;
      if (x[j] > 0) down_index_[static_cast<std::size_t>(j)][r] = *lattice_->rank(x.minus(j));
    }
  }
}

Eigen::VectorXd NearestNeighbourMatrix::multiply(const Eigen::VectorXd& v) const {
  const int n = lattice_->dim();
  Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
  for (std::size_t r = 0; r < size(); ++r) {
    double s = diag_[r] * v(static_cast<Eigen::Index>(r));
    for (int j = 0; j < n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (up_index_[ju][r] != npos) s += up_[ju][r] * v(static_cast<Eigen::Index>(up_index_[ju][r]));
      if (down_index_[ju][r] != npos) s += down_[ju][r] * v(static_cast<Eigen::Index>(down_index_[ju][r]));
    }
    out(static_cast<Eigen::Index>(r)) = s;
  }
  return out;
}

Eigen::MatrixXd NearestNeighbourMatrix::to_dense() const {
  const auto N = static_cast<Eigen::Index>(size());
  const int n = lattice_->dim();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t r = 0; r < size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    M(row, row) = diag_[r];
    for (int j = 0; j < n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (up_index_[ju][r] != npos) M(row, static_cast<Eigen::Index>(up_index_[ju][r])) = up_[ju][r];
      if (down_index_[ju][r] != npos) M(row, static_cast<Eigen::Index>(down_index_[ju][r])) = down_[ju][r];
    }
  }
  return M;
}

NearestNeighbourMatrix build_H(const ModelParams& p, int S) {
  NearestNeighbourMatrix H(std::make_shared<const Lattice>(p.n(), S));
  const auto& lat = H.lattice();
  const int n = p.n();
  for (std::size_t r = 0; r < lat.size(); ++r) {
    const auto& x = lat.point(r);
    double d = 0.0;
    for (int j = 0; j < n; ++j) d += birth_rate(p, x, j) + death_rate(p, x, j);
    H.diag(r) = d;
    for (int j = 0; j < n; ++j) {
      const std::size_t up = H.up_index(j, r);
      if (up == NearestNeighbourMatrix::npos) continue;
      const double w = -std::sqrt(birth_rate(p, x, j) * death_rate(p, lat.point(up), j));
      H.up(j, r) = w;
      H.down(j, up) = w;
    }
  }
  return H;
}

NearestNeighbourMatrix build_LBD(const ModelParams& p, int S) {
  NearestNeighbourMatrix L(std::make_shared<const Lattice>(p.n(), S));
  const auto& lat = L.lattice();
  const int n = p.n();
  for (std::size_t r = 0; r < lat.size(); ++r) {
    const auto& x = lat.point(r);
    double d = 0.0;
    for (int j = 0; j < n; ++j) d -= birth_rate(p, x, j) + death_rate(p, x, j);
    L.diag(r) = d;
    for (int j = 0; j < n; ++j) {
      if (const auto up = L.up_index(j, r); up != NearestNeighbourMatrix::npos) {
        L.up(j, r) = death_rate(p, lat.point(up), j);
      }
      if (const auto down = L.down_index(j, r); down != NearestNeighbourMatrix::npos) {
        L.down(j, r) = birth_rate(p, lat.point(down), j);
      }
    }
  }
  return L;
}

Eigen::MatrixXd build_A(const ModelParams& p, const Lattice& lattice, int j) {
  const auto N = static_cast<Eigen::Index>(lattice.size());
  Eigen::Index rows = 0;
  for (const auto& x : lattice.points()) rows += lattice.interior(x) ? 1 : 0;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, N);
  // graded order puts every interior point before the outer shell
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& x = lattice.point(static_cast<std::size_t>(r));
    const MultiIndex xu = x.plus(j);
    A(r, r) = std::sqrt(birth_rate(p, x, j));
    A(r, static_cast<Eigen::Index>(*lattice.rank(xu))) = -std::sqrt(death_rate(p, xu, j));
  }
  return A;
}

namespace {

Eigen::VectorXd sqrt_weight(const ModelParams& p, const Lattice& lat) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(lat.size()));
  for (std::size_t r = 0; r < lat.size(); ++r) {
    w(static_cast<Eigen::Index>(r)) = std::exp(0.5 * log_weight(p, lat.point(r)));
  }
  return w;
}

Eigen::Index interior_count(const Lattice& lat) {
  return lat.cutoff() == 0 ? 0 : static_cast<Eigen::Index>(binomial(lat.cutoff() - 1 + lat.dim(), lat.dim()));
}

}  // namespace

FactorizationReport factorization_check(const ModelParams& p, int S) {
  const auto H = build_H(p, S);
  const auto& lat = H.lattice();
  const Eigen::MatrixXd Hd = H.to_dense();
  const auto N = static_cast<Eigen::Index>(lat.size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(N, N);
  const Eigen::VectorXd sw = sqrt_weight(p, lat);
  FactorizationReport rep;
  for (int j = 0; j < p.n(); ++j) {
    const Eigen::MatrixXd A = build_A(p, lat, j);
    sum.noalias() += A.transpose() * A;
    if (A.rows() > 0) rep.zero_mode_A = std::max(rep.zero_mode_A, (A * sw).cwiseAbs().maxCoeff());
  }
  const Eigen::Index K = interior_count(lat);
  if (K > 0) rep.factorization = (Hd.topRows(K) - sum.topRows(K)).cwiseAbs().maxCoeff();
  return rep;
}

double zero_mode_residual(const ModelParams& p, int S) {
  const auto H = build_H(p, S);
  const Eigen::VectorXd sw = sqrt_weight(p, H.lattice());
  const Eigen::VectorXd hw = H.multiply(sw);
  const Eigen::Index K = interior_count(H.lattice());
  if (K == 0) return 0.0;
  return hw.head(K).cwiseAbs().maxCoeff() / sw.norm();
}

double min_interior_eigenvalue(const ModelParams& p, int S) {
  const auto H = build_H(p, S);
  const Eigen::Index K = interior_count(H.lattice());
  if (K == 0) return 0.0;
  const Eigen::MatrixXd Hi = H.to_dense().topLeftCorner(K, K);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Hi, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kSingularMargin = 1e-8;

double central_difference_rhs(const ModelParams& p, const SpectralData& sd, const MultiIndex& x,
                              std::span<const double> t, double h) {
  std::vector<double> tp(t.begin(), t.end());
  double rhs = 0.0;
  for (int k = 0; k < p.n(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (t[ku] == 0.0) continue;
    tp[ku] = t[ku] + h;
    const double gp = genfun_value(p.beta, sd.b, x, tp, kSingularMargin);
    tp[ku] = t[ku] - h;
    const double gm = genfun_value(p.beta, sd.b, x, tp, kSingularMargin);
    tp[ku] = t[ku];
    rhs += sd.lambda(k) * t[ku] * (gp - gm) / (2.0 * h);
  }
  return rhs;
}

double genfun_lhs(const ModelParams& p, const SpectralData& sd, const MultiIndex& x, std::span<const double> t) {
  auto G = [&](const MultiIndex& y) { return genfun_value(p.beta, sd.b, y, t, kSingularMargin); };
  return apply_htilde(p, G, x);
}

}  // namespace

GenfunIdentityResult genfun_identity_check(const ModelParams& p, const SpectralData& sd, const MultiIndex& x,
                                           std::span<const double> t, double h) {
  if (static_cast<int>(t.size()) != p.n()) throw Error(ErrorCode::InvalidDimension, "t must have n entries");
  GenfunIdentityResult r;
  r.lhs = genfun_lhs(p, sd, x, t);
  r.rhs_plain = central_difference_rhs(p, sd, x, t, h);
  r.rhs_half = central_difference_rhs(p, sd, x, t, 0.5 * h);
  r.rhs = (4.0 * r.rhs_half - r.rhs_plain) / 3.0;
  r.residual = std::abs(r.lhs - r.rhs);
  r.residual_plain = std::abs(r.lhs - r.rhs_plain);
  r.residual_half = std::abs(r.lhs - r.rhs_half);
  return r;
}

double genfun_fd_order(const ModelParams& p, const SpectralData& sd, const MultiIndex& x, std::span<const double> t,
                       double H, double noise_floor) {
  const double lhs = genfun_lhs(p, sd, x, t);
  const double e1 = std::abs(lhs - central_difference_rhs(p, sd, x, t, H));
  const double e2 = std::abs(lhs - central_difference_rhs(p, sd, x, t, 0.5 * H));
  if (e1 < noise_floor && e2 < noise_floor) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(e1 / e2);
}

std::vector<std::pair<MultiIndex, std::vector<double>>> genfun_sample_points(const ModelParams& p,
                                                                             const SpectralData& sd, int count,
                                                                             std::uint64_t seed) {
  const int n = p.n();
  Xoshiro256 rng(seed, static_cast<std::uint64_t>(n));
  std::vector<std::pair<MultiIndex, std::vector<double>>> out;
  while (static_cast<int>(out.size()) < count) {
    MultiIndex x(n);
    for (int i = 0; i < n; ++i) x[i] = static_cast<int>(rng.uniform_open0() * 5.0);
    std::vector<double> t(static_cast<std::size_t>(n));
    for (auto& tj : t) tj = (rng.uniform_open0() - 0.5) * 0.3 / n;
    bool inside = true;
    try {
      genfun_value(p.beta, sd.b, x, t, 0.05);
    } catch (const Error&) {
      inside = false;
    }
    if (inside) out.emplace_back(std::move(x), std::move(t));
  }
  return out;
}

}  // namespace meixner
