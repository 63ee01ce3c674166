#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "kncond/entropies.hpp"
#include "kncond/properties.hpp"

using namespace kncond;
using nlohmann::json;

namespace {

PropertyOptions opts(std::size_t trials, std::uint64_t seed = 0) {
  PropertyOptions o;
  o.trials = trials;
  o.seed = seed;
  return o;
}

Measure convex_core_measure() {
  return framework_measure(EntropyFramework(MonotoneFn::identity(), CoreFn::pnorm_power(2.0)));
}

}  // namespace

TEST_CASE("standard measures pass CRE and DPI") {
  CHECK(check_cre(shannon_measure(), opts(1000)).pass());
  CHECK(check_dpi(shannon_measure(), opts(500, 7)).pass());
  CHECK(check_cre(arimoto_measure(2.0), opts(1000, 42)).pass());
  CHECK(check_dpi(hayashi_measure(0.5), opts(300)).pass());
}

TEST_CASE("Bayes g-entropy CRE for arbitrary generators and finite gains") {
  VulnSpec s;
  s.phi = MonotoneFn::exp();
  s.psi = MonotoneFn::qlog(3.0);
  s.gain = GainFn::parse("table(2,0.5,1;0.1,3,1;1,1,1.2)");
  const PropertyReport r = check_cre(g_bayes_measure(s), opts(300));
  CHECK(r.pass());
  CHECK(r.threshold == 1e-10);
}

TEST_CASE("convex core violates CRE and the worst failure replays") {
  const Measure m = convex_core_measure();
  const PropertyReport r = check_cre(m, opts(200, 5));
  REQUIRE_FALSE(r.pass());
  for (std::size_t i = 1; i < r.failures.size(); ++i) CHECK(r.failures[i - 1].gap >= r.failures[i].gap);
  CHECK(r.worst_gap == r.failures.front().gap);
  const Failure& f = r.failures.front();
  const Replay rp = replay_cre(m, f.seed, opts(200, 5));
  CHECK(rp.lhs == f.lhs);
  CHECK(rp.rhs == f.rhs);
  CHECK(rp.digest == f.digest);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->gap >= f.gap);
  const json w = json::parse(r.witness->instance_json);
  CHECK(w.contains("prior"));
  CHECK(w.contains("channel"));
}

TEST_CASE("reports are deterministic in the seed") {
  const Measure m = convex_core_measure();
  CHECK(to_json(check_cre(m, opts(100, 3))) == to_json(check_cre(m, opts(100, 3))));
  CHECK(to_json(check_dpi(m, opts(100, 3))) == to_json(check_dpi(m, opts(100, 3))));
  CHECK(digest(cre_instance(10, opts(1))) == digest(cre_instance(10, opts(1))));
  CHECK(digest(cre_instance(10, opts(1))) != digest(cre_instance(11, opts(1))));
}

TEST_CASE("optimizer-valued measures get the slack") {
  VulnSpec s;
  s.phi = MonotoneFn::log();
  const PropertyReport r = check_cre(g_posterior_measure(s), opts(20));
  CHECK(r.pass());
  CHECK(r.threshold == doctest::Approx(1e-10 + 1e-4));
}

TEST_CASE("posterior entropy identity") {
  for (const char* psi : {"id", "log", "compose(negate,log)"}) {
    CAPTURE(psi);
    VulnSpec s;
    s.phi = MonotoneFn::log();
    s.psi = MonotoneFn::parse(psi);
    const PropertyReport r = check_posterior_identity(s, opts(30));
    CHECK(r.pass());
    CHECK(r.property == Property::identity);
    REQUIRE(r.hypothesis_ok.has_value());
  }
  VulnSpec s;
  s.phi = MonotoneFn::log();
  s.psi = MonotoneFn::log();
  CHECK(*check_posterior_identity(s, opts(10)).hypothesis_ok);
}

TEST_CASE("mixture counterexample") {
  const Joint j = counterexample_joint(Dist({0.9, 0.1}));
  CHECK(j.joint(0, 0) == doctest::Approx(0.45));
  CHECK(j.joint(1, 0) == doctest::Approx(0.05));
  CHECK(j.joint(1, 1) == doctest::Approx(0.45));
  const CounterexampleReport r = run_counterexample();
  CHECK(r.a == doctest::Approx(0.325083).epsilon(1e-6));
  CHECK(r.b == doctest::Approx(-2.0 * std::log(0.9)));
  CHECK(r.c == doctest::Approx(-std::log(0.82)).epsilon(1e-8));
  CHECK(r.holds);
  CHECK(r.gap >= 0.11);
  REQUIRE(r.witness.size() == 2);
  CHECK(r.witness[0][0] == 1.0);
  CHECK(r.witness[1][1] == 1.0);
  const json o = json::parse(to_json(r));
  CHECK(o["solver"]["converged"].get<bool>());
}
