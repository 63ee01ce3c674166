#pragma once

// Generalized g-vulnerabilities built on Kolmogorov-Nagumo means:
//
//   prior       V_{phi,g}(X)          = max_a M_phi[g(X,a)]
//   posterior   V^_{psi,phi,g}(X|Y)   = M_psi[ max_a M_phi[g(X,a) | Y] ]
//   Bayes       V_{phi,psi,g}(X|Y)    = max_delta M_phi[ M_psi[g(X,delta(Y)) | X] ]
//
// and the g-entropies defined as their negations. Gains are either a finite
// action table or the soft 0-1 score g(x,r) = r(x) over actions r in the
// simplex, optionally post-composed with monotone transforms.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kncond/monotone.hpp"
#include "kncond/prob.hpp"
#include "kncond/simplex_opt.hpp"

namespace kncond {

namespace syntax {
class Cursor;
}

class GainFn {
 public:
  enum class Kind { finite, soft01, transformed };

  // |X| x |A| table; entries must be finite.
  static GainFn finite(Matrix table);
  static GainFn soft01();
  // g'(x,a) = eta(g(x,a)).
  static GainFn transformed(MonotoneFn eta, GainFn inner);

  // soft01 | transform(<fn>, <gain>) | table(<row>;<row>...) | csv(<path>)
  static GainFn parse(std::string_view text);
  static GainFn parse(syntax::Cursor& cur);

  Kind kind() const;
  // True when the action set is a finite table (possibly transformed).
  bool has_finite_actions() const;
  // Finite actions: the table with every transform applied. Entries where a
  // transform is undefined are NaN; the vulnerability functions reject them
  // for inputs with positive probability.
  Matrix effective_table() const;
  // Soft actions: T with g(x,r) = T(r(x)); identity for plain soft01.
  MonotoneFn soft_transform() const;
  // |X| when fixed by a table.
  std::optional<std::size_t> alphabet() const;
  std::string to_string() const;

 private:
  struct Node;
  explicit GainFn(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct VulnSpec {
  MonotoneFn phi = MonotoneFn::identity();
  MonotoneFn psi = MonotoneFn::identity();
  GainFn gain = GainFn::soft01();
  SimplexOptConfig solver{};
};

// Optimizer bookkeeping attached to every vulnerability value.
struct VulnMeta {
  bool optimized = false;  // true when a simplex optimization was involved
  bool heuristic = false;  // finite Bayes search above the enumeration cap
  bool converged = true;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  double floor = 0.0;  // simplex floor used for soft actions, 0 otherwise
};

struct VulnValue {
  double value = 0.0;
  VulnMeta meta;
};

// One action per supported output y, aligned with Joint::support().
struct DecisionRule {
  std::vector<std::size_t> outputs;
  std::variant<std::vector<std::size_t>, std::vector<Dist>> actions;
};

struct BayesResult {
  double value = 0.0;
  DecisionRule rule;
  VulnMeta meta;
};

struct BayesOptions {
  // Exhaustive search over |A|^{|Y|} rules up to this count.
  double enumeration_cap = 1e6;
  // Above the cap, run coordinate ascent (flagged heuristic) instead of failing.
  bool allow_heuristic = true;
};

VulnValue prior_vulnerability(const Dist& p, const VulnSpec& spec);
VulnValue posterior_vulnerability(const Joint& j, const VulnSpec& spec);
BayesResult bayes_vulnerability(const Joint& j, const VulnSpec& spec, const BayesOptions& opts = {});

// The Bayes objective M_phi[M_psi[g(X, delta(Y)) | X]] at a fixed rule.
double bayes_objective(const Joint& j, const VulnSpec& spec, const DecisionRule& rule);

// For finite gains: the rule that picks argmax_a M_phi[g(X,a) | Y=y] for each y
// separately (ties to the lowest action).
DecisionRule per_output_rule(const Joint& j, const VulnSpec& spec);

// phi' = phi o eta^{-1}, psi' = psi o eta^{-1}, gain' = eta o gain. For
// increasing eta this maps every vulnerability V to eta(V). Throws InputError
// for a decreasing eta or non-composable functions.
VulnSpec transform_spec(const MonotoneFn& eta, const VulnSpec& spec);

double g_entropy(const Dist& p, const VulnSpec& spec);
double g_posterior_entropy(const Joint& j, const VulnSpec& spec);
double g_bayes_entropy(const Joint& j, const VulnSpec& spec);

}  // namespace kncond
