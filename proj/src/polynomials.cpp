#include "meixner/polynomials.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "meixner/error.hpp"

namespace meixner {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_dims(const Eigen::MatrixXd& u, const MultiIndex& m, const MultiIndex& x) {
  if (u.rows() != u.cols() || m.size() != u.rows() || x.size() != u.rows()) {
    throw Error(ErrorCode::InvalidDimension, "u, m and x must share the dimension n");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

CoefficientMatrixIterator::CoefficientMatrixIterator(const MultiIndex& column_bounds, const MultiIndex& row_bounds)
    : n_(column_bounds.size()),
      rows_(row_bounds),
      pos_(static_cast<std::size_t>(n_), 0),
      row_used_(static_cast<std::size_t>(n_), 0) {
  if (row_bounds.size() != n_) throw Error(ErrorCode::InvalidDimension, "row and column bounds differ in length");
  candidates_.reserve(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) candidates_.push_back(enumerate_lattice(n_, column_bounds[j]));
  for (int j = 0; j < n_; ++j) columns_.push_back(&candidates_[static_cast<std::size_t>(j)].front());
}

int CoefficientMatrixIterator::total() const {
  int t = 0;
  for (int v : row_used_) t += v;
  return t;
}

bool CoefficientMatrixIterator::fits(const MultiIndex& comp) const {
  for (int i = 0; i < n_; ++i) {
    if (row_used_[static_cast<std::size_t>(i)] + comp[i] > rows_[i]) return false;
  }
  return true;
}

void CoefficientMatrixIterator::add_column(const MultiIndex& comp, int sign) {
  for (int i = 0; i < n_; ++i) row_used_[static_cast<std::size_t>(i)] += sign * comp[i];
}

bool CoefficientMatrixIterator::next() {
  for (int j = n_ - 1; j >= 0; --j) {
    const auto col = static_cast<std::size_t>(j);
    const auto& cands = candidates_[col];
    add_column(*columns_[col], -1);
    for (std::size_t k = pos_[col] + 1; k < cands.size(); ++k) {
      if (fits(cands[k])) {
        pos_[col] = k;
        columns_[col] = &cands[k];
        add_column(cands[k], +1);
        return true;
      }
    }
    pos_[col] = 0;
    columns_[col] = &cands.front();
  }
  return false;
}

// ---------------------------------------------------------------------------

double meixner_eval(double beta, const Eigen::MatrixXd& u, const MultiIndex& m, const MultiIndex& x) {
  check_dims(u, m, x);
  const int n = m.size();
  const auto un = static_cast<std::size_t>(n);

  // (-x_i)_k, (-m_j)_k, (beta)_N, u_ij^k and k! tables
  std::vector<std::vector<double>> neg_x(un), neg_m(un);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k <= x[i]; ++k) neg_x[static_cast<std::size_t>(i)].push_back(shifted_factorial(-x[i], k));
    for (int k = 0; k <= m[i]; ++k) neg_m[static_cast<std::size_t>(i)].push_back(shifted_factorial(-m[i], k));
  }
  const int max_total = std::min(x.total(), m.total());
  std::vector<double> beta_poch(static_cast<std::size_t>(max_total) + 1);
  for (int N = 0; N <= max_total; ++N) beta_poch[static_cast<std::size_t>(N)] = shifted_factorial(beta, N);
  std::vector<std::vector<double>> upow(un * un);
  std::vector<double> factorial(1, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto& tab = upow[static_cast<std::size_t>(i * n + j)];
      const int kmax = std::min(x[i], m[j]);
      double v = 1.0;
      for (int k = 0; k <= kmax; ++k) {
        tab.push_back(v);
        v *= u(i, j);
      }
      while (static_cast<int>(factorial.size()) <= kmax) {
        factorial.push_back(factorial.back() * static_cast<double>(factorial.size()));
      }
    }
  }

  CompensatedSum sum;
  CoefficientMatrixIterator it(m, x);
  do {
    double num = 1.0;
    double den = beta_poch[static_cast<std::size_t>(it.total())];
    for (int i = 0; i < n; ++i) num *= neg_x[static_cast<std::size_t>(i)][static_cast<std::size_t>(it.row_sum(i))];
    for (int j = 0; j < n; ++j) {
      num *= neg_m[static_cast<std::size_t>(j)][static_cast<std::size_t>(it.column_sum(j))];
      for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(it.entry(i, j));
        num *= upow[static_cast<std::size_t>(i * n + j)][k];
        den *= factorial[k];
      }
    }
    sum.add(num / den);
  } while (it.next());
  return sum.value();
}

double meixner_eval(const ModelParams& p, const SpectralData& sd, const MultiIndex& m, const MultiIndex& x) {
  return meixner_eval(p.beta, sd.u, m, x);
}

// ---------------------------------------------------------------------------

TruncatedSeries genfun_series(double beta, const Eigen::MatrixXd& b, const MultiIndex& x, int D) {
  const int n = x.size();
  if (b.rows() != n || b.cols() != n) throw Error(ErrorCode::InvalidDimension, "b must be n x n");
  const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  TruncatedSeries g = TruncatedSeries::power_one_minus(n, D, ones, -beta - x.total());
  std::vector<double> row(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = b(i, j);
    g = g * TruncatedSeries::power_one_minus(n, D, row, x[i]);
  }
  return g;
}

namespace {

double series_normalizer(double beta, const MultiIndex& m) {
  double r = shifted_factorial(beta, m.total());
  for (int j = 0; j < m.size(); ++j) r /= std::tgamma(m[j] + 1.0);
  return r;
}

}  // namespace

double genfun_eval(const ModelParams& p, const SpectralData& sd, const MultiIndex& m, const MultiIndex& x,
                   int degree_cap) {
  if (m.total() > degree_cap) {
    throw Error(ErrorCode::DegreeCapExceeded,
                "|m| = " + std::to_string(m.total()) + " exceeds the series cap " + std::to_string(degree_cap));
  }
  const TruncatedSeries g = genfun_series(p.beta, sd.b, x, m.total());
  return g.coeff(m) / series_normalizer(p.beta, m);
}

std::vector<double> genfun_all(double beta, const Eigen::MatrixXd& b, const MultiIndex& x, int D) {
  const TruncatedSeries g = genfun_series(beta, b, x, D);
  const auto& pts = g.layout().points();
  std::vector<double> out(pts.size());
  for (std::size_t r = 0; r < pts.size(); ++r) out[r] = g.coefficients()[r] / series_normalizer(beta, pts[r]);
  return out;
}

double genfun_value(double beta, const Eigen::MatrixXd& b, const MultiIndex& x, std::span<const double> t,
                    double singular_margin) {
  const int n = x.size();
  double tsum = 0.0;
  for (double v : t) tsum += v;
  const double base = 1.0 - tsum;
  if (!(base > singular_margin)) throw Error(ErrorCode::SingularGenfun, "1 - |t| must stay positive");
  double g = std::pow(base, -beta - x.total());
  for (int i = 0; i < n; ++i) {
    double f = 1.0;
    for (int j = 0; j < n; ++j) f -= b(i, j) * t[static_cast<std::size_t>(j)];
    if (std::abs(f) <= singular_margin) {
      throw Error(ErrorCode::SingularGenfun, "factor 1 - sum_j b_ij t_j vanishes for i = " + std::to_string(i + 1));
    }
    for (int k = 0; k < x[i]; ++k) g *= f;
  }
  return g;
}

double meixner_1d(double beta, double c, int m, int x) {
  const double z = 1.0 - 1.0 / c;
  // integer numerators and k! stay exact; only z^k and (beta)_k round
  CompensatedSum sum;
  double num = 1.0;
  double zk = 1.0;
  double den = 1.0;
  sum.add(1.0);
  for (int k = 0; k < std::min(m, x); ++k) {
    num *= static_cast<double>(k - m) * (k - x);
    zk *= z;
    den *= (beta + k) * (k + 1);
    sum.add(num * zk / den);
  }
  return sum.value();
}

// ---------------------------------------------------------------------------

PolyTable poly_table(double beta, const Eigen::MatrixXd& u, int max_deg, int S) {
  const int n = static_cast<int>(u.rows());
  PolyTable t;
  t.degrees = enumerate_lattice(n, max_deg);
  t.points = enumerate_lattice(n, S);
  t.values.resize(static_cast<Eigen::Index>(t.degrees.size()), static_cast<Eigen::Index>(t.points.size()));
  for (std::size_t r = 0; r < t.degrees.size(); ++r) {
    for (std::size_t c = 0; c < t.points.size(); ++c) {
      t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          meixner_eval(beta, u, t.degrees[r], t.points[c]);
    }
  }
  return t;
}

PolyTable poly_table(const ModelParams& p, const SpectralData& sd, int max_deg, int S) {
  return poly_table(p.beta, sd.u, max_deg, S);
}

void write_csv(const PolyTable& table, std::ostream& os) {
  char buf[64];
  os << "m\\x";
  for (const auto& x : table.points) os << ',' << x.to_string();
  os << '\n';
  for (std::size_t r = 0; r < table.degrees.size(); ++r) {
    os << table.degrees[r].to_string();
    for (std::size_t c = 0; c < table.points.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g",
                    table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace meixner
