#include "kncond/entropies.hpp"

#include <cmath>
#include <string>

#include "kncond/error.hpp"
#include "kncond/monotone.hpp"

namespace kncond {

Order::Order(double value) : value_(value), limit_(false) {
  if (!std::isfinite(value)) throw InputError("order parameter must be finite");
  if (std::abs(value - 1.0) < kOrderOneThreshold) {
    value_ = 1.0;
    limit_ = true;
  }
}

double Order::value() const {
  if (limit_) throw InputError("order is the limit sentinel and has no finite value");
  return value_;
}

void validate_alpha(const Order& alpha) {
  if (!(alpha.nominal() > 0.0)) {
    throw InputError("alpha must be positive, got " + std::to_string(alpha.nominal()));
  }
}

double shannon(const Dist& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double power_sum(const Dist& p, double alpha) {
  double s = 0.0;
  for (double v : p) {
    if (v > 0.0) s += std::pow(v, alpha);
  }
  return s;
}

double alpha_norm(const Dist& p, double alpha) {
  if (!(alpha > 0.0)) throw InputError("alpha-norm needs alpha > 0");
  return std::pow(power_sum(p, alpha), 1.0 / alpha);
}

double renyi(const Dist& p, const Order& alpha) {
  validate_alpha(alpha);
  if (alpha.is_limit()) return shannon(p);
  const double a = alpha.value();
  return std::log(power_sum(p, a)) / (1.0 - a);
}

double hct(const Dist& p, const Order& alpha) {
  validate_alpha(alpha);
  if (alpha.is_limit()) return shannon(p);
  const double a = alpha.value();
  return (power_sum(p, a) - 1.0) / (1.0 - a);
}

double sharma_mittal(const Dist& p, const Order& alpha, const Order& beta) {
  validate_alpha(alpha);
  if (beta.is_limit()) return renyi(p, alpha);
  const double b = beta.value();
  if (alpha.is_limit()) return std::expm1((1.0 - b) * shannon(p)) / (1.0 - b);
  const double a = alpha.value();
  return (std::pow(power_sum(p, a), (1.0 - b) / (1.0 - a)) - 1.0) / (1.0 - b);
}

double unified_repr(const Dist& p, EntropyFamily which, const Order& alpha, const Order& beta) {
  validate_alpha(alpha);
  double t = 0.0;
  if (alpha.is_limit()) {
    t = std::exp(shannon(p));
  } else {
    const double a = alpha.value();
    t = std::pow(alpha_norm(p, a), a / (1.0 - a));
  }
  switch (which) {
    case EntropyFamily::renyi: return q_log(t, 1.0);
    case EntropyFamily::hct: return q_log(t, alpha.nominal());
    case EntropyFamily::sharma_mittal: return q_log(t, beta.nominal());
  }
  throw InputError("unknown entropy family");
}

}  // namespace kncond
