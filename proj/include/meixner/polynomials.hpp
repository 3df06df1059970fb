#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <vector>

#include "meixner/model.hpp"
#include "meixner/series.hpp"
#include "meixner/spectral.hpp"

namespace meixner {

/// Default degree cap for the generating-function route.
inline constexpr int kDefaultDegreeCap = 8;

/// Walks the n x n nonnegative integer matrices whose column sums are at most
/// m_j and whose row sums are at most x_i. Every other matrix carries a
/// vanishing shifted factorial in the hypergeometric sum, so this is exactly
/// its support.
///
/// Columns form the outer loop and rows the inner one; each column steps
/// through the compositions of 0..m_j into n parts in graded-lex order, so
/// the per-column candidate lists depend on m only.
class CoefficientMatrixIterator {
 public:
  CoefficientMatrixIterator(const MultiIndex& column_bounds, const MultiIndex& row_bounds);

  /// Advances to the next admissible matrix; false once exhausted. The
  /// iterator starts on the zero matrix.
  bool next();

  int entry(int i, int j) const { return columns_[static_cast<std::size_t>(j)]->operator[](i); }
  int row_sum(int i) const { return row_used_[static_cast<std::size_t>(i)]; }
  int column_sum(int j) const { return columns_[static_cast<std::size_t>(j)]->total(); }
  int total() const;
  int dim() const noexcept { return n_; }

 private:
  bool fits(const MultiIndex& comp) const;
  void add_column(const MultiIndex& comp, int sign);

  int n_;
  MultiIndex rows_;
  std::vector<std::vector<MultiIndex>> candidates_;
  std::vector<std::size_t> pos_;
  std::vector<const MultiIndex*> columns_;
  std::vector<int> row_used_;
};

/// P_m(beta, u; x) as the terminating Aomoto-Gelfand matrix sum, accumulated
/// with compensated summation in iterator order.
double meixner_eval(double beta, const Eigen::MatrixXd& u, const MultiIndex& m, const MultiIndex& x);
double meixner_eval(const ModelParams& p, const SpectralData& sd, const MultiIndex& m, const MultiIndex& x);

/// Generating function G(beta, u, x; t) = (1-|t|)^{-beta-|x|} prod_i (1 - sum_j b_ij t_j)^{x_i}
/// expanded to total degree D in t.
TruncatedSeries genfun_series(double beta, const Eigen::MatrixXd& b, const MultiIndex& x, int D);

/// Coefficient of t^m in G divided by (beta)_{|m|}/m!. Throws DegreeCapExceeded
/// when |m| > degree_cap.
double genfun_eval(const ModelParams& p, const SpectralData& sd, const MultiIndex& m, const MultiIndex& x,
                   int degree_cap = kDefaultDegreeCap);

/// Extracts P_m for every |m| <= D from one expansion of G at x.
std::vector<double> genfun_all(double beta, const Eigen::MatrixXd& b, const MultiIndex& x, int D);

/// Closed-form value of G at a point t. Throws SingularGenfun if 1-|t| or any
/// factor 1 - sum_j b_ij t_j is within `singular_margin` of zero.
double genfun_value(double beta, const Eigen::MatrixXd& b, const MultiIndex& x, std::span<const double> t,
                    double singular_margin = 0.0);

/// Single-variable Meixner polynomial 2F1(-m, -x; beta | 1 - 1/c).
double meixner_1d(double beta, double c, int m, int x);

/// P_m(x) for |m| <= max_deg (rows) and |x| <= S (columns), both in
/// graded-lex order.
struct PolyTable {
  std::vector<MultiIndex> degrees;
  std::vector<MultiIndex> points;
  Eigen::MatrixXd values;
};

PolyTable poly_table(const ModelParams& p, const SpectralData& sd, int max_deg, int S);
PolyTable poly_table(double beta, const Eigen::MatrixXd& u, int max_deg, int S);

/// Header row of x indices, one row per m, cells with 17 significant digits.
void write_csv(const PolyTable& table, std::ostream& os);

}  // namespace meixner
