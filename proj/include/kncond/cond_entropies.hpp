#pragma once

// Renyi-type and generalized conditional entropies (nats). Sums over outputs
// run over the support of p_Y only.

#include <cstddef>
#include <vector>

#include "kncond/entropies.hpp"
#include "kncond/prob.hpp"
#include "kncond/simplex_opt.hpp"

namespace kncond {

// H(X|Y) = sum_y p_Y(y) H(p_{X|Y}(.|y)).
double shannon_conditional(const Joint& j);

// Arimoto: alpha/(1-alpha) log sum_y (sum_x p(x)^alpha p(y|x)^alpha)^{1/alpha}.
double arimoto(const Joint& j, const Order& alpha);
// Hayashi: 1/(1-alpha) log sum_y p(y) sum_x p(x|y)^alpha.
double hayashi(const Joint& j, const Order& alpha);
// E_Y[S_alpha(p_{X|Y}(.|Y))].
double manije_hct(const Joint& j, const Order& alpha);
// ln_beta((E_Y ||p_{X|Y}(.|Y)||_alpha^alpha)^{1/(1-alpha)}).
double akm_sharma_mittal(const Joint& j, const Order& alpha, const Order& beta);

enum class AcMethod { exp_gradient, fixed_point };

struct AcSolverConfig {
  AcMethod method = AcMethod::exp_gradient;
  std::size_t restarts = 8;
  std::size_t max_iters = 10000;
  double step_size = 0.1;
  double tol = 1e-12;
  double floor = 1e-12;
  std::uint64_t seed = 0;

  SimplexOptConfig as_simplex_config() const;
};

void validate(const AcSolverConfig& cfg);

struct AcSolution {
  double value = 0.0;
  // r(.|y) for each supported y, aligned with Joint::support().
  std::vector<Dist> argmin;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t restarts = 0;
  std::size_t best_restart = 0;
};

// The Augustin-Csiszar objective
//   J(r) = alpha/(1-alpha) sum_x p(x) log sum_y p(y|x) r(x|y)^{1-1/alpha}
// at a family r aligned with Joint::support(). +inf where undefined.
double ac_objective(const Joint& j, double alpha, const std::vector<Dist>& r);

// min_r J(r), multi-start. At the limit sentinel returns H(X|Y) with the
// posteriors as the minimizer. Throws SolverError if every restart diverges.
AcSolution augustin_csiszar(const Joint& j, const Order& alpha, const AcSolverConfig& cfg = {});

}  // namespace kncond
