#pragma once

#include <Eigen/Dense>
#include <vector>

#include "meixner/model.hpp"

namespace meixner {

/// Worst-case violations of the defining relations of u, b and cbar.
struct ConstraintResiduals {
  double secular = 0.0;  ///< max_j |sum_i c_i/(c_i lambda_j - 1) + 1|
  double u_linear = 0.0;  ///< max_j |sum_i c_i u_ij - (|c| - 1)|
  double u_quadratic = 0.0;  ///< max_{j!=k} |sum_i c_i u_ij u_ik - (|c| - 1)|
  double b_linear = 0.0;  ///< max_j |sum_i c_i b_ij - 1|
  double b_quadratic = 0.0;  ///< max_{j!=k} |sum_i c_i b_ij b_ik - 1|

  double max() const noexcept;
};

/// Degree-one eigendata: lambda sorted ascending, u_ij = lambda_j/(lambda_j - 1/c_i),
/// b = 1 - u and the dual parameters cbar.
struct SpectralData {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd u;
  Eigen::MatrixXd b;
  Eigen::VectorXd cbar;
  ConstraintResiduals residuals;

  int n() const noexcept { return static_cast<int>(lambda.size()); }
};

struct SpectrumRoot {
  double value = 0.0;
  int multiplicity = 1;
};

/// Residual limit for a secular root.
inline constexpr double kSecularTolerance = 1e-12;
/// build_u refuses u whose constraint residual exceeds this.
inline constexpr double kConstraintTolerance = 1e-9;

/// F_ij = -1 + delta_ij / c_i.
Eigen::MatrixXd characteristic_matrix(const ModelParams& p);

/// sum_i c_i/(c_i lambda - 1) + 1; zero at every eigenvalue.
double secular_function(const ModelParams& p, double lambda);

/// Same as secular_function but scaled by 1 + sum_i |c_i/(c_i lambda - 1)|,
/// which is what the 1e-12 tolerance is measured against.
double secular_residual(const ModelParams& p, double lambda);

/// The n roots of sum_i c_i/(c_i lambda - 1) = -1, ascending.
/// One root is bracketed in (0, min 1/c_i) and one between each pair of
/// consecutive poles; each bracket gets 80 bisection steps, 3 guarded Newton
/// steps and a search over the neighbouring doubles. Throws
/// DegenerateParameters for coincident c.
std::vector<double> solve_spectrum(const ModelParams& p);

/// Root multiset for coincident c: a group of k equal c contributes the pole
/// 1/c with multiplicity k-1; the simple roots solve the secular equation
/// over the distinct values with summed weights. Throws NotDegenerate when
/// all c are distinct.
std::vector<SpectrumRoot> degenerate_spectrum(const ModelParams& p);

/// Eigenvalues of the symmetric matrix F(c) by a dense solver; a
/// cross-check for the secular route.
std::vector<double> dense_spectrum(const ModelParams& p);

/// Fills u, b and cbar from lambda and records the constraint residuals.
/// Throws ConstraintViolation when any residual exceeds kConstraintTolerance.
SpectralData build_u(const ModelParams& p, const std::vector<double>& lambda);

/// Recomputes the residual record for arbitrary (possibly perturbed) u.
ConstraintResiduals constraint_residuals(const ModelParams& p, const Eigen::VectorXd& lambda,
                                         const Eigen::MatrixXd& u);

/// solve_spectrum followed by build_u.
SpectralData build_spectral(const ModelParams& p);

}  // namespace meixner
