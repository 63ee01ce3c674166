// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kncond/cli.hpp"
#include "kncond/cond_entropies.hpp"
#include "kncond/entropies.hpp"
#include "kncond/frameworks.hpp"
#include "kncond/properties.hpp"
#include "kncond/rng.hpp"
#include "kncond/text_syntax.hpp"
#include "kncond/vulnerability.hpp"
#include "oracles.hpp"

using namespace kncond;
using nlohmann::json;

namespace {

struct Check {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

VulnSpec spec(const std::string& phi, const std::string& psi, const std::string& gain) {
  VulnSpec s;
  s.phi = MonotoneFn::parse(phi);
  s.psi = MonotoneFn::parse(psi);
  s.gain = GainFn::parse(gain);
  return s;
}

std::string qlog_inv(double a) { return "qlog(" + syntax::format_number(1.0 / a) + ")"; }
std::string qlog_inv_exp(double a) { return "compose(" + qlog_inv(a) + ",exp)"; }

Joint random_joint(Rng& rng, std::size_t nx, std::size_t ny) { return oracle::random_joint(rng, nx, ny); }

// ---------------------------------------------------------------------------

Check counterexample() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const char* argv[] = {"kncond", "counterexample", "--json"};
  std::ostringstream out, err;
  const int code = run_cli(3, argv, out, err);
  const double secs = seconds_since(t0);
  c.require(code == 0, "exit code " + std::to_string(code));
  if (code != 0) return c;
  const json o = json::parse(out.str());
  const double a = o["a"], b = o["b"], v = o["c"];
  c.require(std::abs(a - 0.3251) <= 5e-4, "a = " + fmt("%.6f", a));
  c.require(std::abs(b - 0.2107) <= 5e-4, "b = " + fmt("%.6f", b));
  c.require(v <= b + 1e-6, "c > b + 1e-6");
  c.require(a - v >= 0.11, "a - c = " + fmt("%.6f", a - v));
  c.require(secs < 5.0, "runtime " + fmt("%.2f s", secs));
  if (c.pass) {
    c.detail = "a=" + fmt("%.6f", a) + " b=" + fmt("%.6f", b) + " c=" + fmt("%.6f", v) + " a-c=" + fmt("%.4f", a - v) +
               " in " + fmt("%.2f s", secs);
  }
  return c;
}

Check ac_oracle() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(derive_seed(2, 0));
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Joint j = random_joint(rng, 2, 2);
    for (double a : {0.5, 2.0}) {
      const double d = std::abs(augustin_csiszar(j, a).value - oracle::ac_grid(j, a).value);
      worst = std::max(worst, d);
      c.require(d <= 1e-4, "joint " + std::to_string(i) + " alpha " + fmt("%g", a) + " off by " + fmt("%.3g", d));
    }
  }
  const double secs = seconds_since(t0);
  c.require(secs < 60.0, "runtime " + fmt("%.1f s", secs));
  if (c.pass) c.detail = "100 solves, worst |solver - grid| " + fmt("%.2e", worst) + " in " + fmt("%.1f s", secs);
  return c;
}

Check independence() {
  Check c;
  Rng rng(derive_seed(3, 0));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t nx = 2 + rng.index(3), ny = 2 + rng.index(3);
    const Dist prior = random_dist(rng, nx);
    const Joint j(prior, Channel::constant(nx, random_dist(rng, ny)));
    const double d = std::abs(augustin_csiszar(j, 2.0).value - shannon(prior));
    worst = std::max(worst, d);
    c.require(d <= 1e-4, "prior " + std::to_string(i) + " off by " + fmt("%.3g", d));
  }
  if (c.pass) c.detail = "100 priors, worst " + fmt("%.2e", worst);
  return c;
}

Check unified() {
  Check c;
  Rng rng(derive_seed(4, 0));
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Dist p(rng.dirichlet(2 + rng.index(5)));
    const double a = rng.uniform(0.1, 5.0);
    const double b = rng.uniform(0.1, 5.0);
    const double direct[] = {oracle::renyi(p, a), oracle::hct(p, a), oracle::sharma_mittal(p, a, b)};
    const double repr[] = {unified_repr(p, EntropyFamily::renyi, a), unified_repr(p, EntropyFamily::hct, a),
                           unified_repr(p, EntropyFamily::sharma_mittal, a, b)};
    for (int k = 0; k < 3; ++k) {
      const double rel = std::abs(repr[k] - direct[k]) / std::max(1.0, std::abs(direct[k]));
      worst = std::max(worst, rel);
      c.require(rel <= 1e-12, "sample " + std::to_string(i) + " family " + std::to_string(k) + " off by " + fmt("%.3g", rel));
    }
  }
  if (c.pass) c.detail = "1500 comparisons, worst scaled error " + fmt("%.2e", worst);
  return c;
}

Check round_trip() {
  Check c;
  const std::vector<EntropyFramework> fws = {
      EntropyFramework(MonotoneFn::identity(), CoreFn::shannon(), Aggregator::epknavg, MonotoneFn::exp()),
      EntropyFramework(MonotoneFn::compose(MonotoneFn::log(), MonotoneFn::qexp(2.0)), CoreFn::hct(2.0), Aggregator::epknavg,
                       MonotoneFn::power(3.0)),
      EntropyFramework(MonotoneFn::exp(), CoreFn::norm(0.5), Aggregator::epknavg,
                       MonotoneFn::compose(MonotoneFn::negate(), MonotoneFn::log())),
      EntropyFramework(MonotoneFn::identity(), CoreFn::hct(0.5), Aggregator::epknavg, MonotoneFn::qlog(2.0)),
  };
  Rng rng(derive_seed(5, 0));
  double worst = 0.0;
  int decreasing = 0;
  for (const auto& fw : fws) {
    decreasing += !fw.psi()->increasing();
    const EavgTransform t = to_eavg(fw, {1000, 5, std::nullopt, 4});
    for (int i = 0; i < 100; ++i) {
      const Joint j = random_joint(rng, 2 + rng.index(3), 2 + rng.index(3));
      const double d = std::abs(framework_cond_entropy(t.framework, j) - framework_cond_entropy(fw, j));
      worst = std::max(worst, d);
      c.require(d <= 1e-12, fw.to_string() + " off by " + fmt("%.3g", d));
    }
  }
  c.require(decreasing >= 1, "no decreasing psi family");
  if (c.pass) {
    c.detail = std::to_string(fws.size()) + " families (" + std::to_string(decreasing) + " decreasing psi) x 100 joints, worst " +
               fmt("%.2e", worst);
  }
  return c;
}

Check identities() {
  Check c;
  Rng rng(derive_seed(6, 0));
  double worst = 0.0;
  int n = 0;
  auto cmp = [&](double got, double want, const std::string& what) {
    const double d = std::abs(got - want);
    worst = std::max(worst, d);
    ++n;
    c.require(d <= 1e-4, what + " off by " + fmt("%.3g", d));
  };
  const VulnSpec h_log = spec("log", "id", "soft01");
  const VulnSpec h_lin = spec("id", "id", "transform(log,soft01)");
  const VulnSpec hc_log = spec("log", "log", "soft01");
  const VulnSpec hc_lin = spec("id", "id", "transform(log,soft01)");
  for (std::size_t dim : {2u, 3u}) {
    for (int i = 0; i < 10; ++i) {
      const Joint j = random_joint(rng, dim, dim);
      cmp(-std::log(prior_vulnerability(j.prior(), h_log).value), shannon(j.prior()), "H(X) log form");
      cmp(-prior_vulnerability(j.prior(), h_lin).value, shannon(j.prior()), "H(X) negation form");
      const double hc = shannon_conditional(j);
      cmp(-std::log(bayes_vulnerability(j, hc_log).value), hc, "H(X|Y) log form");
      cmp(-posterior_vulnerability(j, hc_lin).value, hc, "H(X|Y) posterior negation form");
      cmp(-bayes_vulnerability(j, hc_lin).value, hc, "H(X|Y) Bayes negation form");
      for (double a : {0.5, 2.0}) {
        const double ha = arimoto(j, a);
        const VulnSpec a_log = spec(qlog_inv(a), qlog_inv(a), "soft01");
        const VulnSpec a_lin = spec(qlog_inv_exp(a), qlog_inv_exp(a), "transform(log,soft01)");
        cmp(-std::log(bayes_vulnerability(j, a_log).value), ha, "H^A log form");
        cmp(-posterior_vulnerability(j, a_lin).value, ha, "H^A posterior negation form");
        cmp(-bayes_vulnerability(j, a_lin).value, ha, "H^A Bayes negation form");
        const double hac = augustin_csiszar(j, a).value;
        cmp(-std::log(bayes_vulnerability(j, spec("log", qlog_inv(a), "soft01")).value), hac, "H^C log form");
        cmp(-bayes_vulnerability(j, spec("id", qlog_inv_exp(a), "transform(log,soft01)")).value, hac, "H^C negation form");
        if (dim == 2 && i < 3) cmp(hac, oracle::ac_grid(j, a).value, "H^C grid oracle");
      }
    }
  }
  if (c.pass) c.detail = std::to_string(n) + " comparisons on 2x2 and 3x3 joints, worst " + fmt("%.2e", worst);
  return c;
}

const std::vector<std::array<std::string, 3>>& equal_generator_specs() {
  static const std::vector<std::array<std::string, 3>> specs = {
      {"id", "id", "table"},          {"log", "log", "table"},
      {"exp", "exp", "table"},        {"qlog(2)", "qlog(2)", "table"},
      {"log", "log", "soft01"},       {"qlog(0.5)", "qlog(0.5)", "soft01"},
      {"id", "id", "transform(log,soft01)"},
      {"compose(qlog(0.5),exp)", "compose(qlog(0.5),exp)", "transform(log,soft01)"},
  };
  return specs;
}

std::string random_table(Rng& rng, std::size_t nx) {
  const std::size_t na = 2 + rng.index(3);
  std::string t = "table(";
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t a = 0; a < na; ++a) {
      t += syntax::format_number(std::round(rng.uniform(0.05, 3.0) * 100) / 100) + (a + 1 < na ? "," : "");
    }
    t += x + 1 < nx ? ";" : ")";
  }
  return t;
}

Check posterior_equals_bayes() {
  Check c;
  Rng rng(derive_seed(7, 0));
  double worst = 0.0;
  const auto& specs = equal_generator_specs();
  for (int i = 0; i < 200; ++i) {
    const auto& sp = specs[static_cast<std::size_t>(i) % specs.size()];
    const std::size_t nx = 2 + rng.index(2), ny = 2 + rng.index(2);
    const Joint j = random_joint(rng, nx, ny);
    const VulnSpec s = spec(sp[0], sp[1], sp[2] == "table" ? random_table(rng, nx) : sp[2]);
    const double d = std::abs(posterior_vulnerability(j, s).value - bayes_vulnerability(j, s).value);
    worst = std::max(worst, d);
    c.require(d <= 1e-6, "instance " + std::to_string(i) + " (" + sp[0] + ", " + sp[2] + ") off by " + fmt("%.3g", d));
  }
  if (c.pass) c.detail = "200 instances over " + std::to_string(specs.size()) + " generator/gain pairs, worst " + fmt("%.2e", worst);
  return c;
}

Check transforms() {
  Check c;
  Rng rng(derive_seed(8, 0));
  const std::vector<std::array<std::string, 3>> specs = {
      {"id", "log", "table"},       {"log", "id", "table"},          {"exp", "qlog(2)", "table"},
      {"log", "id", "soft01"},      {"id", qlog_inv(2.0), "soft01"}, {"id", qlog_inv_exp(0.5), "transform(log,soft01)"},
      {"log", "log", "soft01"},
  };
  const MonotoneFn etas[] = {MonotoneFn::exp(), MonotoneFn::affine(2.0, 1.0)};
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto& sp = specs[static_cast<std::size_t>(i) % specs.size()];
    const MonotoneFn& eta = etas[i % 2];
    const std::size_t nx = 2 + rng.index(2), ny = 2 + rng.index(2);
    const Joint j = random_joint(rng, nx, ny);
    const VulnSpec s = spec(sp[0], sp[1], sp[2] == "table" ? random_table(rng, nx) : sp[2]);
    const VulnSpec t = transform_spec(eta, s);
    const double dp = std::abs(eta(posterior_vulnerability(j, s).value) - posterior_vulnerability(j, t).value);
    const double db = std::abs(eta(bayes_vulnerability(j, s).value) - bayes_vulnerability(j, t).value);
    worst = std::max({worst, dp, db});
    c.require(dp <= 1e-6 && db <= 1e-6, "instance " + std::to_string(i) + " eta " + eta.to_string() + " off by " +
                                            fmt("%.3g", std::max(dp, db)));
  }
  if (c.pass) c.detail = "200 instances x {posterior, Bayes}, worst " + fmt("%.2e", worst);
  return c;
}

struct SuiteLine {
  std::string name;
  bool ok;
};

Check property_suites() {
  Check c;
  PropertyOptions cre_opts;
  cre_opts.trials = 1000;
  PropertyOptions dpi_opts;
  dpi_opts.trials = 500;
  std::size_t suites = 0;
  auto both = [&](const Measure& m) {
    const PropertyReport cre = check_cre(m, cre_opts);
    const PropertyReport dpi = check_dpi(m, dpi_opts);
    suites += 2;
    c.require(cre.pass(), "CRE failed for " + m.name + " (" + std::to_string(cre.failures.size()) + " failures)");
    c.require(dpi.pass(), "DPI failed for " + m.name + " (" + std::to_string(dpi.failures.size()) + " failures)");
  };
  auto cre_only = [&](const Measure& m) {
    const PropertyReport cre = check_cre(m, cre_opts);
    ++suites;
    c.require(cre.pass(), "CRE failed for " + m.name + " (" + std::to_string(cre.failures.size()) + " failures)");
  };

  both(shannon_measure());

  // EAVG constructions with concave cores, and EGM with non-negative concave cores
  for (double a : {0.5, 2.0}) {
    const std::vector<EntropyFramework> fws = {arimoto_framework(a), renyi_framework(a), hct_framework(a),
                                               sharma_mittal_framework(a, a < 1 ? 3.0 : 0.5)};
    for (const auto& fw : fws) {
      c.require(check_ccv(fw, {2000, 1, std::nullopt, 4}).pass, "CCV failed for " + fw.to_string());
      both(framework_measure(fw));
    }
    both(arimoto_measure(a));
    both(hayashi_measure(a));
    both(hct_measure(a));
    both(sharma_mittal_measure(a, 3.0));
  }
  for (const char* core : {"shannon", "hct(2)", "norm(0.5)", "hct(0.5)"}) {
    both(framework_measure(EntropyFramework::parse(std::string("framework(eta=id,core=") + core + ",agg=egm)")));
  }

  // posterior g-entropies: phi strictly concave, concavifiable psi
  const std::vector<VulnSpec> posterior = {
      spec("log", "id", "soft01"),
      spec("log", "log", "soft01"),
      spec("log", "compose(negate,log)", "soft01"),
      spec("qlog(0.5)", "id", "table(1,0.2,0.6;0.1,1.5,0.6)"),
      spec("qlog(0.5)", "qlog(0.5)", "soft01"),
  };
  for (const auto& s : posterior) {
    const PropertyReport id = check_posterior_identity(s, [] {
      PropertyOptions o;
      o.trials = 50;
      return o;
    }());
    c.require(id.pass(), "posterior identity failed for " + id.measure);
    c.require(id.hypothesis_ok.value_or(false), "hypothesis check failed for " + id.measure);
    both(g_posterior_measure(s));
  }

  // Bayes g-entropies: CRE for any generators; DPI when psi o g is concave on a convex action set
  const std::vector<VulnSpec> bayes_cre = {
      spec("exp", "qlog(3)", "table(2,0.5,1;0.1,3,1;1,1,1.2)"),
      spec("id", "exp", "table(2.8,0.4;1.2,3.6)"),
      spec("log", "power(-1)", "table(1,0.3;0.2,1)"),
      spec("qlog(2)", "id", "soft01"),
  };
  for (const auto& s : bayes_cre) cre_only(g_bayes_measure(s));
  for (double a : {0.5, 2.0}) {
    both(g_bayes_measure(spec("id", qlog_inv_exp(a), "transform(log,soft01)")));
    both(ac_measure(a));
  }
  both(g_bayes_measure(spec("log", "log", "soft01")));
  both(g_bayes_measure(spec("id", "id", "soft01")));

  // convex core: CCV fails and CRE yields the pinned witness
  const EntropyFramework convex(MonotoneFn::identity(), CoreFn::pnorm_power(2.0));
  const CcvReport ccv = check_ccv(convex, {10000, 0, std::nullopt, 4});
  c.require(!ccv.pass && ccv.p.has_value(), "convex core passed the concavity check");
  PropertyOptions pinned;
  pinned.trials = 1000;
  pinned.seed = 0;
  const PropertyReport v = check_cre(framework_measure(convex), pinned);
  c.require(!v.pass(), "convex core passed CRE");
  c.require(v.failures.size() == 918 && v.failures.front().trial == 375 && v.failures.front().digest == "a650458755726449",
            "convex-core failures differ from the pinned record");
  c.require(v.witness && std::abs(v.witness->gap - 2.0 / 3.0) <= 1e-12, "shrunk witness gap differs from 2/3");
  if (c.pass) {
    c.detail = std::to_string(suites) + " suites pass; convex core fails CRE on " + std::to_string(v.failures.size()) +
               "/1000 (trial 375, shrunk gap " + fmt("%.6f", v.witness->gap) + ")";
  }
  return c;
}

Check limits() {
  Check c;
  Rng rng(derive_seed(10, 0));
  double worst = 0.0;
  auto cmp = [&](double got, double want, const std::string& what) {
    const double d = std::abs(got - want);
    worst = std::max(worst, d);
    c.require(d <= 1e-4, what + " off by " + fmt("%.3g", d));
  };
  for (int i = 0; i < 100; ++i) {
    const Joint j = random_joint(rng, 2 + rng.index(3), 2 + rng.index(3));
    const double h = shannon(j.prior());
    const double hc = shannon_conditional(j);
    for (double a : {1.0 - 1e-6, 1.0 + 1e-6}) {
      cmp(renyi(j.prior(), a), h, "renyi");
      cmp(hct(j.prior(), a), h, "hct");
      cmp(sharma_mittal(j.prior(), a, a), h, "sharma-mittal");
      cmp(arimoto(j, a), hc, "arimoto");
      cmp(hayashi(j, a), hc, "hayashi");
      cmp(manije_hct(j, a), hc, "hct conditional");
      cmp(akm_sharma_mittal(j, a, a), hc, "sharma-mittal conditional");
      cmp(augustin_csiszar(j, a).value, hc, "augustin-csiszar");
      if (i < 20) {
        cmp(-posterior_vulnerability(j, spec(qlog_inv_exp(a), qlog_inv_exp(a), "transform(log,soft01)")).value, hc,
            "arimoto posterior-vulnerability form");
        cmp(-bayes_vulnerability(j, spec("id", qlog_inv_exp(a), "transform(log,soft01)")).value, hc,
            "augustin-csiszar Bayes-vulnerability form");
      }
    }
  }
  if (c.pass) c.detail = "100 instances at alpha = 1 +- 1e-6, worst " + fmt("%.2e", worst);
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"mixture counterexample", counterexample},
      {"AC solver vs grid oracle", ac_oracle},
      {"AC with independent output equals H(X)", independence},
      {"unified alpha-norm / q-log representation", unified},
      {"KN-averaging to averaging round trip", round_trip},
      {"entropy-vulnerability identities", identities},
      {"posterior = Bayes vulnerability when phi = psi", posterior_equals_bayes},
      {"monotone transforms of vulnerabilities", transforms},
      {"CRE / DPI property suites", property_suites},
      {"alpha -> 1 limits", limits},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    failed += !c.pass;
    std::printf("%s %2zu  %-46s %s [%.1f s]\n", c.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, c.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
