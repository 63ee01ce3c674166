#pragma once

// Kolmogorov-Nagumo (quasi-arithmetic) means: phi^{-1}(E[phi(Z)]).

#include <span>
#include <vector>

#include "kncond/monotone.hpp"
#include "kncond/prob.hpp"

namespace kncond {

// Realizations of Z with their probabilities.
struct WeightedValues {
  WeightedValues(std::vector<double> values, Dist weights);

  std::vector<double> values;
  Dist weights;
};

// phi^{-1}(sum_z w(z) phi(v(z))). Zero-weight entries are skipped, so their
// values need not lie in phi's domain. Throws DomainError otherwise.
double kn_mean(const WeightedValues& wv, const MonotoneFn& phi);
double kn_mean(std::span<const double> values, std::span<const double> weights, const MonotoneFn& phi);

// Entry k is the conditional KN mean of table(x, y) given Y = y for the k-th
// supported output y of the joint. `table` is |X| x |Y|.
std::vector<double> conditional_kn_mean(const Matrix& table, const Joint& joint, const MonotoneFn& phi);

}  // namespace kncond
