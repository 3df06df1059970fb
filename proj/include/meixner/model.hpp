#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace meixner {

/// Relative tolerance under which two rate parameters count as coincident.
inline constexpr double kDegeneracyTolerance = 1e-12;

/// Problem data: shape beta and rate parameters c_1..c_n.
/// Only construct through validate_params(); the invariants
/// (beta > 0, c_j > 0, sum c < 1) are assumed everywhere downstream.
struct ModelParams {
  double beta = 1.0;
  std::vector<double> c;
  bool degenerate = false;

  int n() const noexcept { return static_cast<int>(c.size()); }
  double c_mass() const noexcept;
};

/// Checks the parameter ranges and sets the degeneracy flag.
/// Throws Error with NonPositiveBeta, NonPositiveC, CMassNotBelowOne or
/// InvalidDimension.
ModelParams validate_params(double beta, std::vector<double> c);
ModelParams validate_params(const ModelParams& p);

bool coincident(double a, double b) noexcept;

/// Element of N_0^n: a lattice point x or a polynomial degree m.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int n) : v_(static_cast<std::size_t>(n), 0) {}
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries);

  static MultiIndex unit(int n, int j);

  int size() const noexcept { return static_cast<int>(v_.size()); }
  int operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& entries() const noexcept { return v_; }

  int total() const noexcept;

  MultiIndex plus(int j) const;
  /// x - e_j; throws InvalidIndex when x_j == 0.
  MultiIndex minus(int j) const;

  /// "1;0;2" style rendering used in CSV output.
  std::string to_string() const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<int> v_;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& x) const noexcept;
};

/// Graded lexicographic order: smaller total first, then larger leading
/// entries first. (n=2, S=1) gives (0,0),(1,0),(0,1).
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const { return graded_lex_less(a, b); }
};

/// All x in N_0^n with |x| <= S in graded lexicographic order.
std::vector<MultiIndex> enumerate_lattice(int n, int S);

/// All x in N_0^n with |x| == s, same order as enumerate_lattice.
std::vector<MultiIndex> enumerate_shell(int n, int s);

double binomial(int n, int k);

/// Truncated lattice {|x| <= S} with a rank lookup. Ranks follow the
/// graded-lex order, which is the serialization order of every vector and
/// matrix over the lattice.
class Lattice {
 public:
  Lattice(int n, int S);

  int dim() const noexcept { return n_; }
  int cutoff() const noexcept { return S_; }
  std::size_t size() const noexcept { return points_.size(); }
  const MultiIndex& point(std::size_t r) const { return points_[r]; }
  const std::vector<MultiIndex>& points() const noexcept { return points_; }

  std::optional<std::size_t> rank(const MultiIndex& x) const;
  bool contains(const MultiIndex& x) const { return x.total() <= S_ && x.size() == n_; }
  /// All shifts x +/- e_j stay inside.
  bool interior(const MultiIndex& x) const { return x.total() + 1 <= S_; }

 private:
  int n_;
  int S_;
  std::vector<MultiIndex> points_;
  std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> index_;
};

/// Pochhammer symbol (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1.
double shifted_factorial(double a, int k);

/// log (a)_k for a > 0, via lgamma. Used wherever k reaches the hundreds.
double log_shifted_factorial(double a, int k);

/// log W(beta, c; x) = log[(beta)_{|x|} c^x / x! (1-|c|)^beta].
double log_weight(const ModelParams& p, const MultiIndex& x);
double weight(const ModelParams& p, const MultiIndex& x);

/// Exact mass of W outside {|x| <= S}:
///   sum_{s>S} (beta)_s |c|^s / s! (1-|c|)^beta.
double tail_bound(const ModelParams& p, int S);

struct LatticeTruncation {
  int cutoff = 0;
  double tail = 0.0;
};

LatticeTruncation make_truncation(const ModelParams& p, int S);

/// Smallest S >= S_min for which tail_bound(p, S) * scale <= eps.
int cutoff_for_tail(const ModelParams& p, double eps, double scale = 1.0, int S_min = 0);

}  // namespace meixner
