#include "kncond/monotone.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "kncond/error.hpp"
#include "kncond/text_syntax.hpp"

namespace kncond {

namespace {

bool near_one(double q) { return std::abs(q - 1.0) < kQOneThreshold; }

// ln_q with IEEE limits at t = 0 and t = inf.
double qlog_raw(double t, double q) {
  if (near_one(q)) return std::log(t);
  const double k = 1.0 - q;
  return std::expm1(k * std::log(t)) / k;
}

double qexp_raw(double u, double q) {
  if (near_one(q)) return std::exp(u);
  const double k = 1.0 - q;
  double z = k * u;
  if (z < -1.0) z = -1.0;
  return std::exp(std::log1p(z) / k);
}

}  // namespace

double q_log(double t, double q) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("q-logarithm needs a positive finite argument, got " + std::to_string(t));
  }
  return qlog_raw(t, q);
}

double q_exp(double u, double q) {
  if (!near_one(q)) {
    const double k = 1.0 - q;
    if (!(1.0 + k * u > 0.0)) throw DomainError("q-exponential argument outside its domain");
  }
  return qexp_raw(u, q);
}

struct MonotoneFn::Node {
  Kind kind;
  double p0 = 0.0;
  double p1 = 0.0;
  std::shared_ptr<const Node> outer;
  std::shared_ptr<const Node> inner;
  Interval domain;
  Interval range;
  bool increasing = true;
};

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InputError(std::string(what) + " parameter must be finite");
}

}  // namespace

MonotoneFn MonotoneFn::affine(double a, double b) {
  require_finite(a, "affine");
  require_finite(b, "affine");
  if (a == 0.0) throw InputError("affine slope must be nonzero");
  auto n = std::make_shared<Node>(Node{Kind::affine, a, b, nullptr, nullptr, Interval::real(),
                                       Interval::real(), a > 0.0});
  return MonotoneFn(std::move(n));
}

MonotoneFn MonotoneFn::log() {
  return MonotoneFn(std::make_shared<Node>(
      Node{Kind::log, 0, 0, nullptr, nullptr, Interval::positive(), Interval::real(), true}));
}

MonotoneFn MonotoneFn::exp() {
  return MonotoneFn(std::make_shared<Node>(
      Node{Kind::exp, 0, 0, nullptr, nullptr, Interval::real(), Interval::positive(), true}));
}

MonotoneFn MonotoneFn::qlog(double q) {
  require_finite(q, "qlog");
  Interval range{qlog_raw(0.0, q), qlog_raw(std::numeric_limits<double>::infinity(), q)};
  return MonotoneFn(std::make_shared<Node>(
      Node{Kind::qlog, q, 0, nullptr, nullptr, Interval::positive(), range, true}));
}

MonotoneFn MonotoneFn::qexp(double q) {
  require_finite(q, "qexp");
  Interval domain{qlog_raw(0.0, q), qlog_raw(std::numeric_limits<double>::infinity(), q)};
  return MonotoneFn(std::make_shared<Node>(
      Node{Kind::qexp, q, 0, nullptr, nullptr, domain, Interval::positive(), true}));
}

MonotoneFn MonotoneFn::power(double r) {
  require_finite(r, "power");
  if (r == 0.0) throw InputError("power exponent must be nonzero");
  return MonotoneFn(std::make_shared<Node>(
      Node{Kind::power, r, 0, nullptr, nullptr, Interval::positive(), Interval::positive(), r > 0.0}));
}

MonotoneFn MonotoneFn::negate() {
  return MonotoneFn(std::make_shared<Node>(
      Node{Kind::negate, 0, 0, nullptr, nullptr, Interval::real(), Interval::real(), false}));
}

MonotoneFn MonotoneFn::compose(const MonotoneFn& outer, const MonotoneFn& inner) {
  // Values of inner that outer accepts.
  Interval mid{std::max(inner.range().lo, outer.domain().lo),
               std::min(inner.range().hi, outer.domain().hi)};
  if (mid.empty()) {
    throw InputError("cannot compose " + outer.to_string() + " after " + inner.to_string() +
                     ": ranges do not overlap");
  }
  double d0 = inner.inverse_unchecked(mid.lo);
  double d1 = inner.inverse_unchecked(mid.hi);
  if (!inner.increasing()) std::swap(d0, d1);
  double r0 = outer.apply_unchecked(mid.lo);
  double r1 = outer.apply_unchecked(mid.hi);
  if (!outer.increasing()) std::swap(r0, r1);
  auto n = std::make_shared<Node>(Node{Kind::compose, 0, 0, outer.node_, inner.node_, Interval{d0, d1},
                                       Interval{r0, r1}, outer.increasing() == inner.increasing()});
  return MonotoneFn(std::move(n));
}

MonotoneFn::Kind MonotoneFn::kind() const { return node_->kind; }
double MonotoneFn::param0() const { return node_->p0; }
double MonotoneFn::param1() const { return node_->p1; }

MonotoneFn MonotoneFn::outer() const {
  if (node_->kind != Kind::compose) throw InputError("outer() on a non-composite function");
  return MonotoneFn(node_->outer);
}

MonotoneFn MonotoneFn::inner() const {
  if (node_->kind != Kind::compose) throw InputError("inner() on a non-composite function");
  return MonotoneFn(node_->inner);
}

double MonotoneFn::apply_unchecked(double t) const { return apply_node(*node_, t); }
double MonotoneFn::inverse_unchecked(double u) const { return inverse_node(*node_, u); }
double MonotoneFn::derivative_unchecked(double t) const { return derivative_node(*node_, t); }

double MonotoneFn::apply_node(const Node& n, double t) {
  switch (n.kind) {
    case Kind::affine: return n.p0 * t + n.p1;
    case Kind::log: return std::log(t);
    case Kind::exp: return std::exp(t);
    case Kind::qlog: return qlog_raw(t, n.p0);
    case Kind::qexp: return qexp_raw(t, n.p0);
    case Kind::power: return std::pow(t, n.p0);
    case Kind::negate: return -t;
    case Kind::compose:
      return apply_node(*n.outer, apply_node(*n.inner, t));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double MonotoneFn::inverse_node(const Node& n, double u) {
  switch (n.kind) {
    case Kind::affine: return (u - n.p1) / n.p0;
    case Kind::log: return std::exp(u);
    case Kind::exp: return std::log(u);
    case Kind::qlog: return qexp_raw(u, n.p0);
    case Kind::qexp: return qlog_raw(u, n.p0);
    case Kind::power: return std::pow(u, 1.0 / n.p0);
    case Kind::negate: return -u;
    case Kind::compose:
      return inverse_node(*n.inner, inverse_node(*n.outer, u));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double MonotoneFn::derivative_node(const Node& n, double t) {
  switch (n.kind) {
    case Kind::affine: return n.p0;
    case Kind::log: return 1.0 / t;
    case Kind::exp: return std::exp(t);
    case Kind::qlog: return std::exp(-n.p0 * std::log(t));
    case Kind::qexp: {
      if (near_one(n.p0)) return std::exp(t);
      const double k = 1.0 - n.p0;
      double z = k * t;
      if (z < -1.0) z = -1.0;
      return std::exp(n.p0 * std::log1p(z) / k);
    }
    case Kind::power: return n.p0 * std::pow(t, n.p0 - 1.0);
    case Kind::negate: return -1.0;
    case Kind::compose:
      return derivative_node(*n.outer, apply_node(*n.inner, t)) * derivative_node(*n.inner, t);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double MonotoneFn::operator()(double t) const {
  if (!domain().contains(t)) {
    throw DomainError(to_string() + " evaluated at " + syntax::format_number(t) + " outside its domain");
  }
  return apply_unchecked(t);
}

double MonotoneFn::inverse(double u) const {
  if (!range().contains(u)) {
    throw DomainError("inverse of " + to_string() + " evaluated at " + syntax::format_number(u) +
                      " outside its range");
  }
  return inverse_unchecked(u);
}

double MonotoneFn::derivative(double t) const {
  if (!domain().contains(t)) {
    throw DomainError("derivative of " + to_string() + " at " + syntax::format_number(t) +
                      " outside its domain");
  }
  return derivative_unchecked(t);
}

MonotoneFn MonotoneFn::inverted() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::affine: return affine(1.0 / n.p0, -n.p1 / n.p0);
    case Kind::log: return exp();
    case Kind::exp: return log();
    case Kind::qlog: return qexp(n.p0);
    case Kind::qexp: return qlog(n.p0);
    case Kind::power: return power(1.0 / n.p0);
    case Kind::negate: return negate();
    case Kind::compose: return compose(MonotoneFn(n.inner).inverted(), MonotoneFn(n.outer).inverted());
  }
  throw InputError("unknown function kind");
}

bool MonotoneFn::increasing() const { return node_->increasing; }
const Interval& MonotoneFn::domain() const { return node_->domain; }
const Interval& MonotoneFn::range() const { return node_->range; }

bool MonotoneFn::is_identity() const {
  return node_->kind == Kind::affine && node_->p0 == 1.0 && node_->p1 == 0.0;
}

std::string MonotoneFn::to_string() const {
  using syntax::format_number;
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::affine: return "affine(" + format_number(n.p0) + "," + format_number(n.p1) + ")";
    case Kind::log: return "log";
    case Kind::exp: return "exp";
    case Kind::qlog: return "qlog(" + format_number(n.p0) + ")";
    case Kind::qexp: return "qexp(" + format_number(n.p0) + ")";
    case Kind::power: return "power(" + format_number(n.p0) + ")";
    case Kind::negate: return "negate";
    case Kind::compose:
      return "compose(" + MonotoneFn(n.outer).to_string() + "," + MonotoneFn(n.inner).to_string() + ")";
  }
  return "?";
}

MonotoneFn MonotoneFn::parse(syntax::Cursor& cur) {
  const std::string name = cur.identifier();
  auto one_arg = [&cur]() {
    cur.expect('(');
    const double v = cur.number();
    cur.expect(')');
    return v;
  };
  if (name == "affine") {
    cur.expect('(');
    const double a = cur.number();
    cur.expect(',');
    const double b = cur.number();
    cur.expect(')');
    return affine(a, b);
  }
  if (name == "identity" || name == "id") return identity();
  if (name == "log") return log();
  if (name == "exp") return exp();
  if (name == "qlog") return qlog(one_arg());
  if (name == "qexp") return qexp(one_arg());
  if (name == "power") return power(one_arg());
  if (name == "negate") return negate();
  if (name == "compose") {
    cur.expect('(');
    std::vector<MonotoneFn> parts{parse(cur)};
    while (cur.accept(',')) parts.push_back(parse(cur));
    cur.expect(')');
    if (parts.size() < 2) cur.fail("compose needs at least two functions");
    MonotoneFn f = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) f = compose(*it, f);
    return f;
  }
  cur.fail("unknown function '" + name + "'");
}

MonotoneFn MonotoneFn::parse(std::string_view text) {
  syntax::Cursor cur(text);
  MonotoneFn f = parse(cur);
  if (!cur.at_end()) cur.fail("trailing characters");
  return f;
}

}  // namespace kncond
