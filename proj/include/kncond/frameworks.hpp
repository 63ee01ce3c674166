#pragma once

// (eta, F)-entropies H(X) = eta(F(p_X)) and the three ways of turning a core F
// into a conditional entropy:
//
//   EAVG      eta( sum_y p_Y(y) F(p_{X|y}) )
//   EGM       eta( prod_y F(p_{X|y})^{p_Y(y)} )
//   EPKNAVG   eta( M_psi[ F(p_{X|Y}) ] )
//
// Text syntax: framework(eta=<fn>, core=<core>, agg=eavg|egm|epknavg(<fn>))
// Cores:       shannon | pnorm-power(a) | norm(a) | hct(a)
//              | negvuln(<phi>, <gain>) | post(<fn>, <core>)

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kncond/monotone.hpp"
#include "kncond/prob.hpp"
#include "kncond/vulnerability.hpp"

namespace kncond {

namespace syntax {
class Cursor;
}

class CoreFn {
 public:
  enum class Kind {
    shannon,      // H(p)
    pnorm_power,  // sum_x p(x)^a
    norm,         // ||p||_a
    hct,          // (sum_x p(x)^a - 1) / (1 - a)
    negvuln,      // -V_{phi,g}(p)
  };

  static CoreFn shannon();
  static CoreFn pnorm_power(double alpha);
  static CoreFn norm(double alpha);
  static CoreFn hct(double alpha);
  static CoreFn neg_vulnerability(VulnSpec spec);

  // f o core.
  CoreFn then(const MonotoneFn& f) const;

  static CoreFn parse(std::string_view text);
  static CoreFn parse(syntax::Cursor& cur);

  double operator()(const Dist& p) const;

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const std::vector<MonotoneFn>& post() const { return post_; }
  // Closed-form concavity of the core when known.
  std::optional<bool> known_concave() const;
  bool optimizer_valued() const;
  // Set when a finite gain table fixes the alphabet size.
  std::optional<std::size_t> alphabet() const;
  std::string to_string() const;

 private:
  CoreFn(Kind k, double a) : kind_(k), alpha_(a) {}
  Kind kind_;
  double alpha_ = 1.0;
  std::shared_ptr<const VulnSpec> spec_;
  std::vector<MonotoneFn> post_;  // applied in order after the base core
};

enum class Aggregator { eavg, egm, epknavg };

class EntropyFramework {
 public:
  // Throws InputError unless eta is increasing.
  EntropyFramework(MonotoneFn eta, CoreFn core, Aggregator agg = Aggregator::eavg,
                   std::optional<MonotoneFn> psi = std::nullopt);

  static EntropyFramework parse(std::string_view text);

  const MonotoneFn& eta() const { return eta_; }
  const CoreFn& core() const { return core_; }
  Aggregator aggregator() const { return agg_; }
  // Set iff aggregator() == epknavg.
  const std::optional<MonotoneFn>& psi() const { return psi_; }
  std::string to_string() const;

 private:
  MonotoneFn eta_;
  CoreFn core_;
  Aggregator agg_;
  std::optional<MonotoneFn> psi_;
};

double framework_entropy(const EntropyFramework& fw, const Dist& p);
double framework_cond_entropy(const EntropyFramework& fw, const Joint& j);

struct CcvOptions {
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  // Violations up to tol are ignored; 1e-8 is used for optimizer-valued cores
  // when left unset.
  std::optional<double> tol;
  std::size_t max_dim = 4;
};

struct CcvReport {
  bool pass = true;
  std::size_t trials = 0;
  double tol = 0.0;
  // Largest lambda F(p) + (1-lambda) F(q) - F(lambda p + (1-lambda) q) seen.
  double worst_violation = 0.0;
  std::optional<Dist> p;
  std::optional<Dist> q;
  double lambda = 0.0;
};

// Midpoint-style concavity test on sampled (p, q, lambda).
CcvReport check_ccv(const CoreFn& core, const CcvOptions& opts = {});
CcvReport check_ccv(const EntropyFramework& fw, const CcvOptions& opts = {});

struct EavgTransform {
  EntropyFramework framework;
  // psi o core concave (psi increasing) or convex (psi decreasing) on the samples.
  bool precondition_ok = true;
  CcvReport report;
  std::string warning;
};

// EPKNAVG(psi) -> EAVG with the same conditional entropy:
//   psi increasing: eta' = eta o psi^{-1},          F' = psi o F
//   psi decreasing: eta' = eta o psi^{-1} o negate, F' = negate o psi o F
// The transform is emitted even when the numeric precondition check fails.
EavgTransform to_eavg(const EntropyFramework& fw, const CcvOptions& opts = {});

// The standard measures as frameworks. Conditional forms:
//   shannon -> H(X|Y), renyi -> Hayashi, arimoto -> Arimoto,
//   hct -> Manije HCT, sharma-mittal -> AKM.
EntropyFramework shannon_framework();
EntropyFramework renyi_framework(double alpha);
EntropyFramework arimoto_framework(double alpha);
EntropyFramework hct_framework(double alpha);
EntropyFramework sharma_mittal_framework(double alpha, double beta);

}  // namespace kncond
