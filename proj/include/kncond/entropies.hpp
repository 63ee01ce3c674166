#pragma once

// Unconditional entropies in nats: Shannon, Renyi, Havrda-Charvat-Tsallis and
// Sharma-Mittal, plus the alpha-norm / q-logarithm representations.

#include "kncond/prob.hpp"

namespace kncond {

// Order parameter with an explicit "limit at 1" state. Values within 1e-9 of 1
// collapse to the limit.
class Order {
 public:
  Order(double value);  // NOLINT: implicit from double is the intended use
  static Order limit() { return Order(); }

  bool is_limit() const { return limit_; }
  // Throws InputError on the limit sentinel.
  double value() const;
  // 1.0 for the sentinel.
  double nominal() const { return limit_ ? 1.0 : value_; }

 private:
  Order() : value_(1.0), limit_(true) {}
  double value_;
  bool limit_;
};

inline constexpr double kOrderOneThreshold = 1e-9;

// alpha must be positive; throws InputError otherwise.
void validate_alpha(const Order& alpha);

double shannon(const Dist& p);

// (sum_x p(x)^alpha)^{1/alpha} with 0^alpha = 0.
double alpha_norm(const Dist& p, double alpha);

// sum_x p(x)^alpha over the support.
double power_sum(const Dist& p, double alpha);

double renyi(const Dist& p, const Order& alpha);
double hct(const Dist& p, const Order& alpha);
double sharma_mittal(const Dist& p, const Order& alpha, const Order& beta);

enum class EntropyFamily { renyi, hct, sharma_mittal };

// ln_q(||p||_alpha^{alpha/(1-alpha)}) with q = 1, alpha, beta for the three
// families. At alpha = limit the argument is exp(H(p)).
double unified_repr(const Dist& p, EntropyFamily which, const Order& alpha, const Order& beta = Order::limit());

}  // namespace kncond
