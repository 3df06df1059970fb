#include "meixner/series.hpp"

#include "meixner/error.hpp"

namespace meixner {

TruncatedSeries::TruncatedSeries(int n_vars, int max_degree)
    : layout_(std::make_shared<const Lattice>(n_vars, max_degree)), coeffs_(layout_->size(), 0.0) {}

TruncatedSeries::TruncatedSeries(std::shared_ptr<const Lattice> layout)
    : layout_(std::move(layout)), coeffs_(layout_->size(), 0.0) {}

TruncatedSeries TruncatedSeries::constant(int n_vars, int max_degree, double value) {
  TruncatedSeries s(n_vars, max_degree);
  s.coeffs_[0] = value;
  return s;
}

TruncatedSeries TruncatedSeries::linear(int n_vars, int max_degree, double c0, std::span<const double> a) {
  TruncatedSeries s = constant(n_vars, max_degree, c0);
  if (max_degree >= 1) {
    for (int j = 0; j < n_vars; ++j) s.set(MultiIndex::unit(n_vars, j), a[static_cast<std::size_t>(j)]);
  }
  return s;
}

std::size_t TruncatedSeries::rank_of(const MultiIndex& m) const {
  if (m.size() != n_vars()) throw Error(ErrorCode::InvalidDimension, "series index has wrong length");
  if (m.total() > max_degree()) {
    throw Error(ErrorCode::DegreeCapExceeded,
                "requested degree " + std::to_string(m.total()) + " above cap " + std::to_string(max_degree()));
  }
  return *layout_->rank(m);
}

double TruncatedSeries::coeff(const MultiIndex& m) const { return coeffs_[rank_of(m)]; }

void TruncatedSeries::set(const MultiIndex& m, double value) { coeffs_[rank_of(m)] = value; }

void TruncatedSeries::check_compatible(const TruncatedSeries& other) const {
  if (other.n_vars() != n_vars() || other.max_degree() != max_degree()) {
    throw Error(ErrorCode::InvalidDimension, "series with different variable count or degree cap");
  }
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
  check_compatible(other);
  for (std::size_t r = 0; r < coeffs_.size(); ++r) coeffs_[r] += other.coeffs_[r];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.check_compatible(b);
  TruncatedSeries out(a.layout_);
  const auto& pts = a.layout_->points();
  const int D = a.max_degree();
  const int n = a.n_vars();
  std::vector<int> sum(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double ai = a.coeffs_[i];
    if (ai == 0.0) continue;
    const int di = pts[i].total();
    // graded order: once degrees overflow the cap, later j only get larger
    for (std::size_t j = 0; j < pts.size() && di + pts[j].total() <= D; ++j) {
      const double bj = b.coeffs_[j];
      if (bj == 0.0) continue;
      for (int k = 0; k < n; ++k) sum[static_cast<std::size_t>(k)] = pts[i][k] + pts[j][k];
      out.coeffs_[*a.layout_->rank(MultiIndex(sum))] += ai * bj;
    }
  }
  return out;
}

TruncatedSeries TruncatedSeries::power_one_minus(int n_vars, int max_degree, std::span<const double> a,
                                                 double alpha) {
  const TruncatedSeries L = linear(n_vars, max_degree, 0.0, a);
  TruncatedSeries result = constant(n_vars, max_degree, 1.0);
  TruncatedSeries Lk = constant(n_vars, max_degree, 1.0);
  double coef = 1.0;  // (-alpha)_k / k!
  for (int k = 1; k <= max_degree; ++k) {
    coef *= (-alpha + (k - 1)) / k;
    if (coef == 0.0) break;
    Lk = Lk * L;
    result += Lk * coef;
  }
  return result;
}

}  // namespace meixner
