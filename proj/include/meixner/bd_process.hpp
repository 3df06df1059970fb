#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "meixner/model.hpp"
#include "meixner/polynomials.hpp"
#include "meixner/spectral.hpp"

namespace meixner {

/// Dual weight Wbar(beta, cbar; m) = (beta)_{|m|} cbar^m / m!.
double dual_weight(const ModelParams& p, const SpectralData& sd, const MultiIndex& m);

/// Partial sum of the dual weight over |m| <= M and the closed form
/// (1 - |cbar|)^{-beta} it converges to.
struct DualWeightSum {
  double partial = 0.0;
  double limit = 0.0;
  double cbar_mass = 0.0;
};
DualWeightSum dual_weight_sum(const ModelParams& p, const SpectralData& sd, int M);

/// Sum_{|x|<=S} W P_m P_m' against delta_{mm'} / Wbar(m).
struct OrthogonalityReport {
  std::vector<MultiIndex> degrees;
  /// absolute error off the diagonal, relative error on it
  Eigen::MatrixXd residuals;
  double max_offdiag = 0.0;
  double max_diag_rel = 0.0;
  int cutoff = 0;
  double tail = 0.0;
  double max_abs_poly = 0.0;
};

/// Throws TailTooLarge when tail_bound(S) * max|P|^2 > eps.
OrthogonalityReport orthogonality_check(const ModelParams& p, const SpectralData& sd, int max_deg, int S,
                                        double eps);

/// Smallest S >= S_min with tail_bound(S) * max|P|^2 <= eps, growing the
/// lattice one shell at a time.
int orthogonality_cutoff(const ModelParams& p, const SpectralData& sd, int max_deg, double eps, int S_min = 10);

/// First and second moments of W over |x| <= S against
/// E[x_j] = c_j beta/(1-|c|) and
/// E[x_j x_k] = beta(beta+1) c_j c_k/(1-|c|)^2 + beta c_j/(1-|c|) delta_jk.
struct MomentReport {
  Eigen::VectorXd mean;
  Eigen::MatrixXd second;
  double mean_residual = 0.0;
  double second_residual = 0.0;
  double mass = 0.0;
};
MomentReport moment_check(const ModelParams& p, int S);

/// Orthonormal vector entry sqrt(W(x)) P_m(x) sqrt(Wbar(m)).
double phi_hat(const ModelParams& p, const SpectralData& sd, const MultiIndex& m, const MultiIndex& x);

/// |sum_{|m|<=M} phi_m(x) phi_m(y) - delta_xy|.
double completeness_residual(const ModelParams& p, const SpectralData& sd, const MultiIndex& x,
                             const MultiIndex& y, int M);

/// T(x, y; t) is the probability of sitting at x at time t after starting at
/// y; it sums to one over x.
struct TransitionReport {
  MultiIndex x;
  MultiIndex y;
  double t = 0.0;
  double spectral_value = 0.0;  ///< phi-hat form
  double reduced_value = 0.0;  ///< W(x) sum_m Wbar(m) e^{-E t} P_m(x) P_m(y)
  double form_gap = 0.0;  ///< |spectral_value - reduced_value|
  double last_shell = 0.0;  ///< contribution of the |m| = M shell
  int M_cutoff = 0;
  double simulated_value = 0.0;
  double simulated_stderr = 0.0;
};

/// Truncated spectral sum over |m| <= M. Throws NegativeTime for t < 0.
TransitionReport transition_prob(const ModelParams& p, const SpectralData& sd, const MultiIndex& x,
                                 const MultiIndex& y, double t, int M);

/// Adds shells |m| = 0, 1, ... until two consecutive shells each change the
/// sum by less than eps relative, or M_max is reached.
TransitionReport transition_prob_adaptive(const ModelParams& p, const SpectralData& sd, const MultiIndex& x,
                                          const MultiIndex& y, double t, double eps, int M_max);

/// Dense kernel T(x, y; t) for x, y in {|x| <= S} from a spectral sum over
/// |m| <= M. Rows are destinations x, columns starting points y.
class SpectralKernel {
 public:
  SpectralKernel(const ModelParams& p, const SpectralData& sd, int S, int M);

  Eigen::MatrixXd matrix(double t) const;
  const Lattice& lattice() const noexcept { return lattice_; }

 private:
  Lattice lattice_;
  PolyTable table_;
  Eigen::VectorXd weight_;  // W on points
  Eigen::VectorXd dual_;  // Wbar on degrees
  Eigen::VectorXd energy_;  // E(m) on degrees
};

struct ChapmanKolmogorovReport {
  double lhs = 0.0;  ///< T(x, y; t + t')
  double rhs = 0.0;  ///< sum_{|z|<=S} T(x, z; t) T(z, y; t')
  double residual = 0.0;
  double truncation_estimate = 0.0;
};

ChapmanKolmogorovReport chapman_kolmogorov_check(const ModelParams& p, const SpectralData& sd, const MultiIndex& x,
                                                 const MultiIndex& y, double t, double t_prime, int S, int M);

/// Empirical distribution of X(t) over n_traj exact-jump trajectories.
struct EmpiricalDistribution {
  MultiIndex x0;
  double t = 0.0;
  std::uint64_t seed = 0;
  long n_traj = 0;
  long cap_hits = 0;  ///< trajectories stopped at the event cap
  std::map<MultiIndex, long, GradedLexLess> counts;

  double frequency(const MultiIndex& y) const;
  /// binomial standard error sqrt(f (1 - f) / n_traj)
  double stderr_of(const MultiIndex& y) const;
};

inline constexpr long kEventCap = 1'000'000;

/// Gillespie simulation of the chain with rates B_j = beta + |x|,
/// D_j = x_j / c_j. Trajectory k draws from Xoshiro256(seed, k).
EmpiricalDistribution simulate(const ModelParams& p, const MultiIndex& x0, double t, std::uint64_t seed,
                               long n_traj);

struct ComparisonRow {
  MultiIndex state;
  long count = 0;
  double frequency = 0.0;
  double stderr_value = 0.0;
  double spectral = 0.0;
  double z = 0.0;
};

/// Per-state z-scores and a pooled chi-square. States with expected count
/// >= 5 form their own bins; every other state goes into one pooled bin.
struct SimulationComparison {
  std::vector<ComparisonRow> rows;  ///< every observed state and every state with expected count >= 5
  std::vector<ComparisonRow> bins;  ///< chi-square bins; the last is the pooled remainder when present
  double max_abs_z = 0.0;  ///< over the chi-square bins
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

SimulationComparison compare_with_spectral(const ModelParams& p, const SpectralData& sd,
                                           const EmpiricalDistribution& emp, double eps = 1e-12, int M_max = 80);

}  // namespace meixner
