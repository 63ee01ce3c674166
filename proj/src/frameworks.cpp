#include "kncond/frameworks.hpp"

#include <algorithm>
#include <cmath>

#include "kncond/entropies.hpp"
#include "kncond/error.hpp"
#include "kncond/kn_mean.hpp"
#include "kncond/rng.hpp"
#include "kncond/text_syntax.hpp"

namespace kncond {

namespace {

double positive_alpha(double a, const char* core) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InputError(std::string(core) + " core needs alpha > 0");
  return a;
}

}  // namespace

CoreFn CoreFn::shannon() { return CoreFn(Kind::shannon, 1.0); }
CoreFn CoreFn::pnorm_power(double a) { return CoreFn(Kind::pnorm_power, positive_alpha(a, "pnorm-power")); }
CoreFn CoreFn::norm(double a) { return CoreFn(Kind::norm, positive_alpha(a, "norm")); }
CoreFn CoreFn::hct(double a) { return CoreFn(Kind::hct, positive_alpha(a, "hct")); }

CoreFn CoreFn::neg_vulnerability(VulnSpec spec) {
  CoreFn c(Kind::negvuln, 1.0);
  c.spec_ = std::make_shared<const VulnSpec>(std::move(spec));
  return c;
}

CoreFn CoreFn::then(const MonotoneFn& f) const {
  CoreFn c = *this;
  c.post_.push_back(f);
  return c;
}

double CoreFn::operator()(const Dist& p) const {
  double v = 0.0;
  switch (kind_) {
    case Kind::shannon: v = kncond::shannon(p); break;
    case Kind::pnorm_power: v = power_sum(p, alpha_); break;
    case Kind::norm: v = alpha_norm(p, alpha_); break;
    case Kind::hct: v = kncond::hct(p, alpha_); break;
    case Kind::negvuln: v = -prior_vulnerability(p, *spec_).value; break;
  }
  for (const auto& f : post_) v = f(v);
  return v;
}

std::optional<bool> CoreFn::known_concave() const {
  if (!post_.empty()) return std::nullopt;
  switch (kind_) {
    case Kind::shannon:
    case Kind::hct: return true;
    case Kind::pnorm_power:
    case Kind::norm: return alpha_ <= 1.0;
    case Kind::negvuln: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::size_t> CoreFn::alphabet() const {
  if (kind_ == Kind::negvuln) return spec_->gain.alphabet();
  return std::nullopt;
}

bool CoreFn::optimizer_valued() const { return kind_ == Kind::negvuln && !spec_->gain.has_finite_actions(); }

std::string CoreFn::to_string() const {
  using syntax::format_number;
  std::string s;
  switch (kind_) {
    case Kind::shannon: s = "shannon"; break;
    case Kind::pnorm_power: s = "pnorm-power(" + format_number(alpha_) + ")"; break;
    case Kind::norm: s = "norm(" + format_number(alpha_) + ")"; break;
    case Kind::hct: s = "hct(" + format_number(alpha_) + ")"; break;
    case Kind::negvuln: s = "negvuln(" + spec_->phi.to_string() + "," + spec_->gain.to_string() + ")"; break;
  }
  for (const auto& f : post_) s = "post(" + f.to_string() + "," + s + ")";
  return s;
}

CoreFn CoreFn::parse(syntax::Cursor& cur) {
  const std::string name = cur.identifier();
  auto one_arg = [&cur]() {
    cur.expect('(');
    const double v = cur.number();
    cur.expect(')');
    return v;
  };
  if (name == "shannon") return shannon();
  if (name == "pnorm-power") return pnorm_power(one_arg());
  if (name == "norm") return norm(one_arg());
  if (name == "hct") return hct(one_arg());
  if (name == "negvuln") {
    cur.expect('(');
    VulnSpec spec;
    spec.phi = MonotoneFn::parse(cur);
    cur.expect(',');
    spec.gain = GainFn::parse(cur);
    cur.expect(')');
    return neg_vulnerability(std::move(spec));
  }
  if (name == "post") {
    cur.expect('(');
    MonotoneFn f = MonotoneFn::parse(cur);
    cur.expect(',');
    CoreFn c = parse(cur);
    cur.expect(')');
    return c.then(f);
  }
  cur.fail("unknown core '" + name + "'");
}

CoreFn CoreFn::parse(std::string_view text) {
  syntax::Cursor cur(text);
  CoreFn c = parse(cur);
  if (!cur.at_end()) cur.fail("trailing characters");
  return c;
}

EntropyFramework::EntropyFramework(MonotoneFn eta, CoreFn core, Aggregator agg, std::optional<MonotoneFn> psi)
    : eta_(std::move(eta)), core_(std::move(core)), agg_(agg), psi_(std::move(psi)) {
  if (!eta_.increasing()) throw InputError("framework eta must be strictly increasing, got " + eta_.to_string());
  if ((agg_ == Aggregator::epknavg) != psi_.has_value()) {
    throw InputError("a KN-averaging framework needs exactly one psi");
  }
}

std::string EntropyFramework::to_string() const {
  std::string agg = "eavg";
  if (agg_ == Aggregator::egm) agg = "egm";
  if (agg_ == Aggregator::epknavg) agg = "epknavg(" + psi_->to_string() + ")";
  return "framework(eta=" + eta_.to_string() + ",core=" + core_.to_string() + ",agg=" + agg + ")";
}

EntropyFramework EntropyFramework::parse(std::string_view text) {
  syntax::Cursor cur(text);
  if (cur.identifier() != "framework") cur.fail("expected 'framework('");
  cur.expect('(');
  MonotoneFn eta = MonotoneFn::identity();
  std::optional<CoreFn> core;
  Aggregator agg = Aggregator::eavg;
  std::optional<MonotoneFn> psi;
  do {
    const std::string key = cur.identifier();
    cur.expect('=');
    if (key == "eta") {
      eta = MonotoneFn::parse(cur);
    } else if (key == "core") {
      core = CoreFn::parse(cur);
    } else if (key == "agg") {
      const std::string a = cur.identifier();
      if (a == "eavg") {
        agg = Aggregator::eavg;
      } else if (a == "egm") {
        agg = Aggregator::egm;
      } else if (a == "epknavg") {
        agg = Aggregator::epknavg;
        cur.expect('(');
        psi = MonotoneFn::parse(cur);
        cur.expect(')');
      } else {
        cur.fail("unknown aggregator '" + a + "'");
      }
    } else {
      cur.fail("unknown framework key '" + key + "'");
    }
  } while (cur.accept(','));
  cur.expect(')');
  if (!cur.at_end()) cur.fail("trailing characters");
  if (!core) cur.fail("framework needs a core");
  return EntropyFramework(std::move(eta), std::move(*core), agg, std::move(psi));
}

double framework_entropy(const EntropyFramework& fw, const Dist& p) { return fw.eta()(fw.core()(p)); }

double framework_cond_entropy(const EntropyFramework& fw, const Joint& j) {
  std::vector<double> core;
  std::vector<double> w;
  for (std::size_t k = 0; k < j.support().size(); ++k) {
    core.push_back(fw.core()(j.posteriors()[k]));
    w.push_back(j.marginal()[j.support()[k]]);
  }
  double agg = 0.0;
  switch (fw.aggregator()) {
    case Aggregator::eavg:
      for (std::size_t k = 0; k < core.size(); ++k) agg += w[k] * core[k];
      break;
    case Aggregator::egm: {
      bool zero = false;
      for (std::size_t k = 0; k < core.size(); ++k) {
        if (core[k] < 0.0) throw DomainError("geometric aggregation needs a non-negative core");
        if (core[k] == 0.0) {
          zero = true;
        } else {
          agg += w[k] * std::log(core[k]);
        }
      }
      agg = zero ? 0.0 : std::exp(agg);
      break;
    }
    case Aggregator::epknavg: agg = kn_mean(core, w, *fw.psi()); break;
  }
  return fw.eta()(agg);
}

CcvReport check_ccv(const CoreFn& core, const CcvOptions& opts) {
  if (opts.trials < 1) throw InputError("concavity check needs at least one trial");
  if (opts.max_dim < 2) throw InputError("concavity check needs max_dim >= 2");
  CcvReport rep;
  rep.trials = opts.trials;
  rep.tol = opts.tol.value_or(core.optimizer_valued() ? 1e-8 : 1e-10);
  const std::optional<std::size_t> fixed = core.alphabet();
  for (std::size_t t = 0; t < opts.trials; ++t) {
    Rng rng(derive_seed(opts.seed, t));
    const std::size_t n = fixed ? *fixed : 2 + rng.index(opts.max_dim - 1);
    Dist p(rng.dirichlet(n));
    Dist q(rng.dirichlet(n));
    const double lambda = rng.uniform();
    const double v = lambda * core(p) + (1.0 - lambda) * core(q) - core(Dist::mix(p, q, lambda));
    if (v > rep.worst_violation || (!rep.p && v > rep.tol)) {
      rep.worst_violation = v;
      rep.p = p;
      rep.q = q;
      rep.lambda = lambda;
    }
  }
  rep.pass = !(rep.worst_violation > rep.tol);
  if (rep.pass) {
    rep.p.reset();
    rep.q.reset();
    rep.lambda = 0.0;
  }
  return rep;
}

CcvReport check_ccv(const EntropyFramework& fw, const CcvOptions& opts) { return check_ccv(fw.core(), opts); }

EavgTransform to_eavg(const EntropyFramework& fw, const CcvOptions& opts) {
  if (fw.aggregator() != Aggregator::epknavg) throw InputError("to_eavg needs a KN-averaging framework");
  const MonotoneFn& psi = *fw.psi();
  const MonotoneFn inv = psi.inverted();
  CoreFn core = fw.core().then(psi);
  MonotoneFn eta = MonotoneFn::compose(fw.eta(), inv);
  if (!psi.increasing()) {
    core = core.then(MonotoneFn::negate());
    eta = MonotoneFn::compose(eta, MonotoneFn::negate());
  }
  EavgTransform out{EntropyFramework(eta, core), true, {}, {}};
  out.report = check_ccv(core, opts);
  out.precondition_ok = out.report.pass;
  if (!out.precondition_ok) {
    out.warning = "concavified core " + core.to_string() + " failed the concavity check (worst violation " +
                  syntax::format_number(out.report.worst_violation) + ")";
  }
  return out;
}

EntropyFramework shannon_framework() { return EntropyFramework(MonotoneFn::identity(), CoreFn::shannon()); }

EntropyFramework renyi_framework(double alpha) {
  validate_alpha(alpha);
  if (Order(alpha).is_limit()) return shannon_framework();
  return EntropyFramework(MonotoneFn::compose(MonotoneFn::log(), MonotoneFn::qexp(alpha)), CoreFn::hct(alpha));
}

EntropyFramework arimoto_framework(double alpha) {
  validate_alpha(alpha);
  if (Order(alpha).is_limit()) return shannon_framework();
  const MonotoneFn scale = MonotoneFn::affine(alpha / (1.0 - alpha), 0.0);
  if (alpha < 1.0) return EntropyFramework(MonotoneFn::compose(scale, MonotoneFn::log()), CoreFn::norm(alpha));
  return EntropyFramework(MonotoneFn::compose(scale, MonotoneFn::compose(MonotoneFn::log(), MonotoneFn::negate())),
                          CoreFn::norm(alpha).then(MonotoneFn::negate()));
}

EntropyFramework hct_framework(double alpha) {
  validate_alpha(alpha);
  return EntropyFramework(MonotoneFn::identity(), CoreFn::hct(alpha));
}

EntropyFramework sharma_mittal_framework(double alpha, double beta) {
  validate_alpha(alpha);
  return EntropyFramework(MonotoneFn::compose(MonotoneFn::qlog(beta), MonotoneFn::qexp(alpha)), CoreFn::hct(alpha));
}

}  // namespace kncond
