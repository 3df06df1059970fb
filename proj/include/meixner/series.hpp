#pragma once

#include <memory>
#include <span>
#include <vector>

#include "meixner/model.hpp"

namespace meixner {

/// Power series in t_1..t_n truncated at total degree D. Coefficients are
/// stored densely in graded-lex order; everything above degree D is dropped,
/// which is exact for every coefficient of degree <= D.
class TruncatedSeries {
 public:
  TruncatedSeries(int n_vars, int max_degree);

  static TruncatedSeries constant(int n_vars, int max_degree, double value);
  /// c0 + sum_j a_j t_j
  static TruncatedSeries linear(int n_vars, int max_degree, double c0, std::span<const double> a);

  int n_vars() const noexcept { return layout_->dim(); }
  int max_degree() const noexcept { return layout_->cutoff(); }

  /// Coefficient of t^m. Throws DegreeCapExceeded when |m| > D.
  double coeff(const MultiIndex& m) const;
  void set(const MultiIndex& m, double value);
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  const Lattice& layout() const noexcept { return *layout_; }

  TruncatedSeries& operator+=(const TruncatedSeries& other);
  TruncatedSeries& operator*=(double s);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(TruncatedSeries a, double s) { return a *= s; }

  /// (1 - sum_j a_j t_j)^alpha expanded as sum_k (-alpha)_k / k! L^k.
  /// Terminates by itself for nonnegative integer alpha; for any other
  /// alpha this is the 1F0 series cut at degree D.
  static TruncatedSeries power_one_minus(int n_vars, int max_degree, std::span<const double> a, double alpha);

 private:
  explicit TruncatedSeries(std::shared_ptr<const Lattice> layout);
  std::size_t rank_of(const MultiIndex& m) const;
  void check_compatible(const TruncatedSeries& other) const;

  std::shared_ptr<const Lattice> layout_;
  std::vector<double> coeffs_;
};

}  // namespace meixner
