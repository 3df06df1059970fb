#include "meixner/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "meixner/error.hpp"

namespace meixner {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorCode::NonPositiveC: return "NonPositiveC";
    case ErrorCode::CMassNotBelowOne: return "CMassNotBelowOne";
    case ErrorCode::DegenerateParameters: return "DegenerateParameters";
    case ErrorCode::NotDegenerate: return "NotDegenerate";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorCode::TruncationBoundary: return "TruncationBoundary";
    case ErrorCode::SingularGenfun: return "SingularGenfun";
    case ErrorCode::TailTooLarge: return "TailTooLarge";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

double ModelParams::c_mass() const noexcept { return std::accumulate(c.begin(), c.end(), 0.0); }

bool coincident(double a, double b) noexcept {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= kDegeneracyTolerance * scale;
}

ModelParams validate_params(double beta, std::vector<double> c) {
  if (c.empty()) {
    throw Error(ErrorCode::InvalidDimension, "need at least one rate parameter c_j (n >= 1)");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    std::ostringstream os;
    os << "beta must satisfy beta > 0, got " << beta;
    throw Error(ErrorCode::NonPositiveBeta, os.str());
  }
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (!(c[j] > 0.0) || !std::isfinite(c[j])) {
      std::ostringstream os;
      os << "c_" << j + 1 << " must satisfy c_j > 0, got " << c[j];
      throw Error(ErrorCode::NonPositiveC, os.str());
    }
  }
  ModelParams p;
  p.beta = beta;
  p.c = std::move(c);
  const double mass = p.c_mass();
  if (!(mass < 1.0)) {
    std::ostringstream os;
    os << "|c| = sum c_j must satisfy |c| < 1, got " << mass;
    throw Error(ErrorCode::CMassNotBelowOne, os.str());
  }
  for (std::size_t i = 0; i < p.c.size() && !p.degenerate; ++i) {
    for (std::size_t j = i + 1; j < p.c.size(); ++j) {
      if (coincident(p.c[i], p.c[j])) {
        p.degenerate = true;
        break;
      }
    }
  }
  return p;
}

ModelParams validate_params(const ModelParams& p) { return validate_params(p.beta, p.c); }

// ---------------------------------------------------------------------------

MultiIndex::MultiIndex(std::vector<int> entries) : v_(std::move(entries)) {
  for (int e : v_) {
    if (e < 0) throw Error(ErrorCode::InvalidIndex, "multi-index entries must be nonnegative");
  }
}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

MultiIndex MultiIndex::unit(int n, int j) {
  MultiIndex e(n);
  e[j] = 1;
  return e;
}

int MultiIndex::total() const noexcept { return std::accumulate(v_.begin(), v_.end(), 0); }

MultiIndex MultiIndex::plus(int j) const {
  MultiIndex r = *this;
  ++r[j];
  return r;
}

MultiIndex MultiIndex::minus(int j) const {
  if ((*this)[j] < 1) {
    throw Error(ErrorCode::InvalidIndex, "x - e_j requires x_j >= 1");
  }
  MultiIndex r = *this;
  --r[j];
  return r;
}

std::string MultiIndex::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(v_[i]);
  }
  return s;
}

std::size_t MultiIndexHash::operator()(const MultiIndex& x) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int e : x.entries()) {
    h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  const int ta = a.total();
  const int tb = b.total();
  if (ta != tb) return ta < tb;
  // larger leading entries come first
  return a.entries() > b.entries();
}

namespace {

void fill_shell(int n, int s, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  const int pos = static_cast<int>(prefix.size());
  if (pos == n - 1) {
    prefix.push_back(s);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int first = s; first >= 0; --first) {
    prefix.push_back(first);
    fill_shell(n, s - first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_shell(int n, int s) {
  std::vector<MultiIndex> out;
  if (n < 1 || s < 0) return out;
  std::vector<int> prefix;
  prefix.reserve(static_cast<std::size_t>(n));
  fill_shell(n, s, prefix, out);
  return out;
}

std::vector<MultiIndex> enumerate_lattice(int n, int S) {
  std::vector<MultiIndex> out;
  if (n < 1 || S < 0) return out;
  out.reserve(static_cast<std::size_t>(binomial(S + n, n)));
  for (int s = 0; s <= S; ++s) {
    auto shell = enumerate_shell(n, s);
    out.insert(out.end(), std::make_move_iterator(shell.begin()), std::make_move_iterator(shell.end()));
  }
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

Lattice::Lattice(int n, int S) : n_(n), S_(S), points_(enumerate_lattice(n, S)) {
  if (n < 1 || S < 0) throw Error(ErrorCode::InvalidDimension, "lattice needs n >= 1 and S >= 0");
  index_.reserve(points_.size());
  for (std::size_t r = 0; r < points_.size(); ++r) index_.emplace(points_[r], r);
}

std::optional<std::size_t> Lattice::rank(const MultiIndex& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------

double shifted_factorial(double a, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= a + i;
  return r;
}

double log_shifted_factorial(double a, int k) {
  if (k == 0) return 0.0;
  if (k <= 30) return std::log(shifted_factorial(a, k));
  return std::lgamma(a + k) - std::lgamma(a);
}

double log_weight(const ModelParams& p, const MultiIndex& x) {
  double lw = log_shifted_factorial(p.beta, x.total()) + p.beta * std::log1p(-p.c_mass());
  for (int i = 0; i < x.size(); ++i) {
    lw += x[i] * std::log(p.c[static_cast<std::size_t>(i)]) - std::lgamma(x[i] + 1.0);
  }
  return lw;
}

double weight(const ModelParams& p, const MultiIndex& x) { return std::exp(log_weight(p, x)); }

double tail_bound(const ModelParams& p, int S) {
  const double mass = p.c_mass();
  const int s0 = S + 1;
  double term = std::exp(log_shifted_factorial(p.beta, s0) + s0 * std::log(mass) - std::lgamma(s0 + 1.0) +
                         p.beta * std::log1p(-mass));
  double sum = 0.0;
  for (int s = s0; term > 0.0; ++s) {
    sum += term;
    const double ratio = (p.beta + s) * mass / (s + 1.0);
    // the ratio moves monotonically towards |c|, so max(ratio, |c|) bounds
    // every later ratio
    const double bound = std::max(ratio, mass);
    term *= ratio;
    if (bound < 1.0 && term / (1.0 - bound) <= std::numeric_limits<double>::epsilon() * 0.1 * sum) {
      sum += term;
      break;
    }
  }
  return sum;
}

LatticeTruncation make_truncation(const ModelParams& p, int S) { return {S, tail_bound(p, S)}; }

int cutoff_for_tail(const ModelParams& p, double eps, double scale, int S_min) {
  int S = std::max(S_min, 0);
  while (tail_bound(p, S) * scale > eps) {
    ++S;
    if (S > 100000) throw Error(ErrorCode::TailTooLarge, "no cutoff below 100000 meets the tail target");
  }
  return S;
}

}  // namespace meixner
