#include "kncond/kn_mean.hpp"

#include <algorithm>
#include <string>

#include "kncond/error.hpp"

namespace kncond {

WeightedValues::WeightedValues(std::vector<double> v, Dist w) : values(std::move(v)), weights(std::move(w)) {
  if (values.size() != weights.size()) {
    throw InputError("weighted values: " + std::to_string(values.size()) + " values but " +
                     std::to_string(weights.size()) + " weights");
  }
}

double kn_mean(std::span<const double> values, std::span<const double> weights, const MonotoneFn& phi) {
  if (values.size() != weights.size()) throw InputError("kn_mean: values and weights differ in length");
  double acc = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] == 0.0) continue;
    acc += weights[i] * phi(values[i]);
    lo = any ? std::min(lo, values[i]) : values[i];
    hi = any ? std::max(hi, values[i]) : values[i];
    any = true;
  }
  if (!any) throw InputError("kn_mean: all weights are zero");
  const double m = phi.inverse(acc);
  // Rounding in phi / phi^{-1} can push a mean of equal values a few ulps out.
  return std::clamp(m, lo, hi);
}

double kn_mean(const WeightedValues& wv, const MonotoneFn& phi) {
  return kn_mean(wv.values, wv.weights.probs(), phi);
}

std::vector<double> conditional_kn_mean(const Matrix& table, const Joint& joint, const MonotoneFn& phi) {
  if (table.rows() != joint.x_size() || table.cols() != joint.y_size()) {
    throw InputError("conditional_kn_mean: table must be |X| x |Y|");
  }
  std::vector<double> out;
  out.reserve(joint.support().size());
  std::vector<double> column(joint.x_size());
  for (std::size_t k = 0; k < joint.support().size(); ++k) {
    const std::size_t y = joint.support()[k];
    for (std::size_t x = 0; x < joint.x_size(); ++x) column[x] = table(x, y);
    out.push_back(kn_mean(column, joint.posteriors()[k].probs(), phi));
  }
  return out;
}

}  // namespace kncond
