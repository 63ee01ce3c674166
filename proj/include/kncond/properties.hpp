#pragma once

// Randomized checks of the structural properties of conditional entropies:
//   CRE  H(X|Y) <= H(X)
//   DPI  H(X|Y) <= H(X|Z) for Markov chains X - Y - Z
// plus the posterior-entropy identity check for posterior g-entropies and the
// two-component mixture counterexample.
//
// Trial t draws its instance from derive_seed(seed, t) alone, so every
// recorded failure replays from its trial seed.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kncond/cond_entropies.hpp"
#include "kncond/frameworks.hpp"
#include "kncond/prob.hpp"
#include "kncond/vulnerability.hpp"

namespace kncond {

struct Measure {
  std::string name;
  std::function<double(const Dist&)> unconditional;  // may be empty for DPI-only use
  std::function<double(const Joint&)> conditional;
  bool optimizer_valued = false;
  // |X| forced by a finite gain table.
  std::optional<std::size_t> alphabet;
};

Measure shannon_measure();
// Renyi entropy with Arimoto / Hayashi conditional forms.
Measure arimoto_measure(double alpha);
Measure hayashi_measure(double alpha);
Measure hct_measure(double alpha);
Measure sharma_mittal_measure(double alpha, double beta);
// Augustin-Csiszar conditional form, paired with the Shannon entropy (its
// value for an output independent of X).
Measure ac_measure(double alpha, const AcSolverConfig& cfg = {});
Measure framework_measure(const EntropyFramework& fw, std::string name = {});
// (g-entropy, posterior g-entropy) and (g-entropy, Bayes g-entropy).
Measure g_posterior_measure(const VulnSpec& spec, std::string name = {});
Measure g_bayes_measure(const VulnSpec& spec, std::string name = {});

enum class Property { cre, dpi, ccv, identity };
std::string to_string(Property p);

struct PropertyOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  // Added to tol when the measure is optimizer-valued.
  double optimizer_slack = 1e-4;
  std::size_t max_dim = 4;
  // Fraction of trials drawn with zeroed entries.
  double sparse_fraction = 0.2;
  bool shrink = true;
};

struct Failure {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string digest;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // lhs - rhs
};

// Shrunk version of the worst failure.
struct Witness {
  std::string instance_json;
  std::string digest;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  std::size_t shrink_steps = 0;
};

struct PropertyReport {
  Property property = Property::cre;
  std::string measure;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double threshold = 0.0;
  std::vector<Failure> failures;  // sorted by gap, largest first
  double worst_gap = 0.0;         // max over trials of lhs - rhs (|lhs - rhs| for identity)
  std::optional<Witness> witness;
  // Numeric check of a sufficient-condition hypothesis, when one was run.
  std::optional<bool> hypothesis_ok;
  std::string note;

  bool pass() const { return failures.empty(); }
};

PropertyReport check_cre(const Measure& m, const PropertyOptions& opts = {});
PropertyReport check_dpi(const Measure& m, const PropertyOptions& opts = {});

struct Replay {
  double lhs = 0.0;
  double rhs = 0.0;
  std::string digest;
};

// Recomputes a single trial from its recorded seed.
Replay replay_cre(const Measure& m, std::uint64_t trial_seed, const PropertyOptions& opts = {});
Replay replay_dpi(const Measure& m, std::uint64_t trial_seed, const PropertyOptions& opts = {});

// Instances used by trial seeds.
Joint cre_instance(std::uint64_t trial_seed, const PropertyOptions& opts, std::optional<std::size_t> x = {});
MarkovTriple dpi_instance(std::uint64_t trial_seed, const PropertyOptions& opts, std::optional<std::size_t> x = {});

// The posterior g-entropy -M_psi[V_{phi,g}(X|y)] equals the KN-averaged
// framework with eta = identity, F = -V_{phi,g} and psi o negate, within tol.
// hypothesis_ok reports the concavification precondition on sampled pairs.
PropertyReport check_posterior_identity(const VulnSpec& spec, const PropertyOptions& opts = {}, double tol = 1e-6);

// The KN-averaged framework used by check_posterior_identity.
EntropyFramework posterior_identity_framework(const VulnSpec& spec);

struct CounterexampleReport {
  double alpha = 2.0;
  Dist p0 = Dist::uniform(2);
  Dist p1 = Dist::uniform(2);
  double a = 0.0;  // H(p0), the value forced by symmetry in any averaging representation
  double b = 0.0;  // objective at the deterministic rule r(.|i) = point mass at the mode of p_i
  double c = 0.0;  // solver value of the Augustin-Csiszar conditional entropy
  double gap = 0.0;  // a - c
  bool holds = false;  // c <= b + 1e-6 < a
  AcSolution solution;
  std::vector<Dist> witness;
};

// Mixture joint p(x, i) = p_i(x) / 2 with p1 the reversal of p0.
Joint counterexample_joint(const Dist& p0);
CounterexampleReport run_counterexample(double alpha = 2.0, const Dist& p0 = Dist({0.9, 0.1}),
                                        const AcSolverConfig& cfg = {});

std::string to_json(const PropertyReport& r, int indent = 2);
std::string to_table(const PropertyReport& r);
std::string to_json(const CounterexampleReport& r, int indent = 2);

// Short hex digest of an instance.
std::string digest(const Joint& j);
std::string digest(const MarkovTriple& t);

}  // namespace kncond
