#pragma once

// Strictly monotone scalar functions with closed-form inverses. These are the
// generators of Kolmogorov-Nagumo means and the entropy transforms.
//
// Text syntax (round-trips with to_string):
//   affine(a,b) | log | exp | qlog(q) | qexp(q) | power(r) | negate
//   | compose(outer, inner[, ...])            identity / id = affine(1,0)

#include <limits>
#include <memory>
#include <string>
#include <string_view>

namespace kncond {

namespace syntax {
class Cursor;
}

// Open interval (lo, hi); infinite ends allowed.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double t) const { return t > lo && t < hi; }
  bool empty() const { return !(lo < hi); }
  static Interval real() { return {}; }
  static Interval positive() { return {0.0, std::numeric_limits<double>::infinity()}; }
};

// Below this distance from q = 1 the q-logarithm uses the exact log branch.
inline constexpr double kQOneThreshold = 1e-9;

// ln_q t: log t when |q-1| < kQOneThreshold, else (t^{1-q}-1)/(1-q). Throws
// DomainError for t <= 0.
double q_log(double t, double q);
// Inverse of q_log in u.
double q_exp(double u, double q);

class MonotoneFn {
 public:
  enum class Kind { affine, log, exp, qlog, qexp, power, negate, compose };

  static MonotoneFn affine(double a, double b);
  static MonotoneFn identity() { return affine(1.0, 0.0); }
  static MonotoneFn log();
  static MonotoneFn exp();
  static MonotoneFn qlog(double q);
  static MonotoneFn qexp(double q);
  static MonotoneFn power(double r);
  static MonotoneFn negate();
  // outer o inner; throws InputError when inner's range misses outer's domain.
  static MonotoneFn compose(const MonotoneFn& outer, const MonotoneFn& inner);

  static MonotoneFn parse(std::string_view text);
  static MonotoneFn parse(syntax::Cursor& cur);

  Kind kind() const;
  // affine: (a, b); qlog/qexp: (q, _); power: (r, _).
  double param0() const;
  double param1() const;
  // Only meaningful for Kind::compose.
  MonotoneFn outer() const;
  MonotoneFn inner() const;

  // Checked evaluation: DomainError outside domain() / range().
  double operator()(double t) const;
  double inverse(double u) const;
  double derivative(double t) const;

  // Extended-real evaluation with IEEE limits, no checks. Used at interval
  // endpoints and in optimizer inner loops after ranges are validated.
  double apply_unchecked(double t) const;
  double inverse_unchecked(double u) const;
  double derivative_unchecked(double t) const;

  MonotoneFn inverted() const;
  bool increasing() const;
  const Interval& domain() const;
  const Interval& range() const;
  bool is_identity() const;

  std::string to_string() const;

 private:
  struct Node;
  explicit MonotoneFn(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static double apply_node(const Node& n, double t);
  static double inverse_node(const Node& n, double u);
  static double derivative_node(const Node& n, double t);
  std::shared_ptr<const Node> node_;
};

}  // namespace kncond
