#include <cmath>

#include "doctest.h"
#include "kncond/cond_entropies.hpp"
#include "kncond/entropies.hpp"
#include "kncond/error.hpp"
#include "kncond/frameworks.hpp"
#include "kncond/rng.hpp"
#include "oracles.hpp"

using namespace kncond;

TEST_CASE("standard frameworks reproduce the closed forms") {
  Rng rng(50);
  for (int i = 0; i < 100; ++i) {
    const Joint j = oracle::random_joint(rng, 2 + rng.index(3), 2 + rng.index(3));
    const Dist& p = j.prior();
    CHECK(framework_entropy(shannon_framework(), p) == doctest::Approx(shannon(p)).epsilon(1e-12));
    CHECK(framework_cond_entropy(shannon_framework(), j) == doctest::Approx(shannon_conditional(j)).epsilon(1e-12));
    for (double a : {0.5, 2.0}) {
      CAPTURE(a);
      CHECK(std::abs(framework_entropy(renyi_framework(a), p) - renyi(p, a)) <= 1e-12);
      CHECK(std::abs(framework_entropy(arimoto_framework(a), p) - renyi(p, a)) <= 1e-12);
      CHECK(std::abs(framework_cond_entropy(renyi_framework(a), j) - hayashi(j, a)) <= 1e-12);
      CHECK(std::abs(framework_cond_entropy(arimoto_framework(a), j) - arimoto(j, a)) <= 1e-12);
      CHECK(std::abs(framework_cond_entropy(hct_framework(a), j) - manije_hct(j, a)) <= 1e-12);
      CHECK(std::abs(framework_cond_entropy(sharma_mittal_framework(a, 3.0), j) - akm_sharma_mittal(j, a, 3.0)) <= 1e-12);
    }
    // (1/(1-a)) log over sum p^a is a valid framework for a < 1
    const EntropyFramework pn(MonotoneFn::compose(MonotoneFn::affine(2.0, 0.0), MonotoneFn::log()), CoreFn::pnorm_power(0.5));
    CHECK(std::abs(framework_entropy(pn, p) - renyi(p, 0.5)) <= 1e-12);
    CHECK(std::abs(framework_cond_entropy(pn, j) - hayashi(j, 0.5)) <= 1e-12);
  }
}

TEST_CASE("negated vulnerability core gives the g-entropy") {
  VulnSpec s;
  s.phi = MonotoneFn::log();
  const EntropyFramework fw(MonotoneFn::identity(), CoreFn::neg_vulnerability(s));
  const Dist p({0.7, 0.2, 0.1});
  CHECK(framework_entropy(fw, p) == doctest::Approx(g_entropy(p, s)));
  CHECK(-std::log(-framework_entropy(fw, p)) == doctest::Approx(shannon(p)).epsilon(1e-8));
}

TEST_CASE("KN averaging with identity psi equals plain averaging") {
  Rng rng(51);
  const EntropyFramework avg(MonotoneFn::identity(), CoreFn::hct(2.0));
  const EntropyFramework kn(MonotoneFn::identity(), CoreFn::hct(2.0), Aggregator::epknavg, MonotoneFn::identity());
  for (int i = 0; i < 100; ++i) {
    const Joint j = oracle::random_joint(rng, 3, 3);
    CHECK(framework_cond_entropy(kn, j) == doctest::Approx(framework_cond_entropy(avg, j)).epsilon(1e-14));
  }
}

TEST_CASE("to_eavg round trip") {
  const std::vector<EntropyFramework> fws = {
      EntropyFramework(MonotoneFn::identity(), CoreFn::shannon(), Aggregator::epknavg, MonotoneFn::identity()),
      EntropyFramework(MonotoneFn::identity(), CoreFn::shannon(), Aggregator::epknavg, MonotoneFn::exp()),
      EntropyFramework(MonotoneFn::exp(), CoreFn::norm(0.5), Aggregator::epknavg,
                       MonotoneFn::compose(MonotoneFn::negate(), MonotoneFn::log())),
  };
  Rng rng(52);
  for (const auto& fw : fws) {
    CAPTURE(fw.to_string());
    const EavgTransform t = to_eavg(fw, {2000, 1, std::nullopt, 4});
    CHECK(t.framework.aggregator() == Aggregator::eavg);
    for (int i = 0; i < 100; ++i) {
      const Joint j = oracle::random_joint(rng, 2, 3);
      CHECK(std::abs(framework_cond_entropy(t.framework, j) - framework_cond_entropy(fw, j)) <= 1e-12);
      CHECK(std::abs(framework_entropy(t.framework, j.prior()) - framework_entropy(fw, j.prior())) <= 1e-12);
    }
  }
  // exp(10 H) is far from concave; the transform is still emitted
  const EntropyFramework steep(MonotoneFn::identity(), CoreFn::shannon(), Aggregator::epknavg,
                               MonotoneFn::compose(MonotoneFn::exp(), MonotoneFn::affine(10.0, 0.0)));
  const EavgTransform bad = to_eavg(steep, {2000, 1, std::nullopt, 4});
  CHECK_FALSE(bad.precondition_ok);
  CHECK_FALSE(bad.warning.empty());
  CHECK(to_eavg(fws[0], {2000, 1, std::nullopt, 4}).precondition_ok);
}

TEST_CASE("concavity check") {
  CHECK(check_ccv(CoreFn::shannon(), {5000, 3, std::nullopt, 4}).pass);
  CHECK(check_ccv(CoreFn::hct(3.0), {5000, 3, std::nullopt, 4}).pass);
  const CcvReport bad = check_ccv(CoreFn::pnorm_power(2.0), {5000, 3, std::nullopt, 4});
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.p.has_value());
  const CoreFn c = CoreFn::pnorm_power(2.0);
  CHECK(bad.lambda * c(*bad.p) + (1 - bad.lambda) * c(*bad.q) - c(Dist::mix(*bad.p, *bad.q, bad.lambda)) ==
        doctest::Approx(bad.worst_violation));
  VulnSpec s;
  s.phi = MonotoneFn::qlog(0.5);
  const CcvReport neg = check_ccv(CoreFn::neg_vulnerability(s), {300, 3, std::nullopt, 3});
  CHECK(neg.pass);
  CHECK(neg.tol == 1e-8);
  s.gain = GainFn::parse("table(1,0.1,0.5;0.1,1,0.5)");
  s.phi = MonotoneFn::log();
  CHECK(check_ccv(CoreFn::neg_vulnerability(s), {2000, 3, std::nullopt, 3}).pass);
}

TEST_CASE("aggregation edge cases") {
  const Joint det(Dist::uniform(2), Channel::identity(2));
  const EntropyFramework egm(MonotoneFn::identity(), CoreFn::shannon(), Aggregator::egm);
  CHECK(framework_cond_entropy(egm, det) == 0.0);
  const EntropyFramework neg(MonotoneFn::identity(), CoreFn::shannon().then(MonotoneFn::negate()), Aggregator::egm);
  CHECK_THROWS_AS(framework_cond_entropy(neg, Joint(Dist::uniform(2), Channel::constant(2, Dist::uniform(2)))), DomainError);
}

TEST_CASE("framework text syntax") {
  const EntropyFramework f = EntropyFramework::parse("framework(eta=log, core=post(negate,norm(3)), agg=epknavg(exp))");
  CHECK(f.aggregator() == Aggregator::epknavg);
  CHECK(EntropyFramework::parse(f.to_string()).to_string() == f.to_string());
  CHECK(CoreFn::parse("negvuln(log,soft01)").optimizer_valued());
  CHECK_FALSE(CoreFn::parse("negvuln(id,table(1,0;0,1))").optimizer_valued());
  CHECK_THROWS_AS(EntropyFramework::parse("framework(eta=negate, core=shannon)"), InputError);
  CHECK_THROWS_AS(EntropyFramework::parse("framework(eta=id)"), InputError);
  CHECK_THROWS_AS(EntropyFramework::parse("framework(core=shannon, agg=median)"), InputError);
  CHECK_THROWS_AS(EntropyFramework(MonotoneFn::identity(), CoreFn::shannon(), Aggregator::epknavg), InputError);
  CHECK_THROWS_AS(CoreFn::parse("norm(-1)"), InputError);
}
