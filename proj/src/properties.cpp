#include "kncond/properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "json.hpp"
#include "kncond/entropies.hpp"
#include "kncond/error.hpp"
#include "kncond/rng.hpp"
#include "kncond/text_syntax.hpp"

namespace kncond {

using nlohmann::json;

namespace {

Measure make_measure(std::string name, std::function<double(const Dist&)> unc,
                     std::function<double(const Joint&)> cond) {
  Measure m;
  m.name = std::move(name);
  m.unconditional = std::move(unc);
  m.conditional = std::move(cond);
  return m;
}

}  // namespace

Measure shannon_measure() {
  return make_measure("shannon", [](const Dist& p) { return shannon(p); }, [](const Joint& j) { return shannon_conditional(j); });
}

Measure arimoto_measure(double a) {
  validate_alpha(a);
  return make_measure("arimoto(" + syntax::format_number(a) + ")", [a](const Dist& p) { return renyi(p, a); },
          [a](const Joint& j) { return arimoto(j, a); });
}

Measure hayashi_measure(double a) {
  validate_alpha(a);
  return make_measure("hayashi(" + syntax::format_number(a) + ")", [a](const Dist& p) { return renyi(p, a); },
          [a](const Joint& j) { return hayashi(j, a); });
}

Measure hct_measure(double a) {
  validate_alpha(a);
  return make_measure("hct(" + syntax::format_number(a) + ")", [a](const Dist& p) { return hct(p, a); },
          [a](const Joint& j) { return manije_hct(j, a); });
}

Measure sharma_mittal_measure(double a, double b) {
  validate_alpha(a);
  return make_measure("sharma-mittal(" + syntax::format_number(a) + "," + syntax::format_number(b) + ")",
          [a, b](const Dist& p) { return sharma_mittal(p, a, b); },
          [a, b](const Joint& j) { return akm_sharma_mittal(j, a, b); });
}

Measure ac_measure(double a, const AcSolverConfig& cfg) {
  validate_alpha(a);
  validate(cfg);
  Measure m = make_measure("ac(" + syntax::format_number(a) + ")", [](const Dist& p) { return shannon(p); },
            [a, cfg](const Joint& j) { return augustin_csiszar(j, a, cfg).value; });
  m.optimizer_valued = true;
  return m;
}

Measure framework_measure(const EntropyFramework& fw, std::string name) {
  Measure m = make_measure(name.empty() ? fw.to_string() : std::move(name),
            [fw](const Dist& p) { return framework_entropy(fw, p); },
            [fw](const Joint& j) { return framework_cond_entropy(fw, j); });
  m.optimizer_valued = fw.core().optimizer_valued();
  m.alphabet = fw.core().alphabet();
  return m;
}

namespace {

std::string spec_name(const char* kind, const VulnSpec& s) {
  return std::string(kind) + "(phi=" + s.phi.to_string() + ",psi=" + s.psi.to_string() + ",gain=" +
         s.gain.to_string() + ")";
}

}  // namespace

Measure g_posterior_measure(const VulnSpec& spec, std::string name) {
  Measure m = make_measure(name.empty() ? spec_name("g-posterior", spec) : std::move(name),
            [spec](const Dist& p) { return g_entropy(p, spec); },
            [spec](const Joint& j) { return g_posterior_entropy(j, spec); });
  m.optimizer_valued = !spec.gain.has_finite_actions();
  m.alphabet = spec.gain.alphabet();
  return m;
}

Measure g_bayes_measure(const VulnSpec& spec, std::string name) {
  Measure m = make_measure(name.empty() ? spec_name("g-bayes", spec) : std::move(name),
            [spec](const Dist& p) { return g_entropy(p, spec); },
            [spec](const Joint& j) { return g_bayes_entropy(j, spec); });
  m.optimizer_valued = !spec.gain.has_finite_actions();
  m.alphabet = spec.gain.alphabet();
  return m;
}

std::string to_string(Property p) {
  switch (p) {
    case Property::cre: return "cre";
    case Property::dpi: return "dpi";
    case Property::ccv: return "ccv";
    case Property::identity: return "identity";
  }
  return "?";
}

namespace {

// Sizes 2..max_dim with weights max_dim-1, ..., 1.
std::size_t small_dim(Rng& rng, std::size_t max_dim) {
  const std::size_t k = max_dim - 1;
  std::size_t ticket = rng.index(k * (k + 1) / 2);
  for (std::size_t d = 0; d < k; ++d) {
    if (ticket < k - d) return 2 + d;
    ticket -= k - d;
  }
  return max_dim;
}

SparseMode trial_sparse(Rng& rng, const PropertyOptions& opts) {
  SparseMode s;
  s.enabled = rng.uniform() < opts.sparse_fraction;
  return s;
}

void check_options(const PropertyOptions& opts) {
  if (opts.trials < 1) throw InputError("property check needs at least one trial");
  if (opts.max_dim < 2) throw InputError("property check needs max_dim >= 2");
}

std::uint64_t fnv(const std::vector<double>& xs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : xs) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void append(std::vector<double>& out, const Dist& d) { out.insert(out.end(), d.begin(), d.end()); }

void append(std::vector<double>& out, const Channel& c) {
  out.push_back(static_cast<double>(c.inputs()));
  out.push_back(static_cast<double>(c.outputs()));
  for (std::size_t x = 0; x < c.inputs(); ++x) append(out, c.row(x));
}

json to_json_value(const Dist& d) { return json(std::vector<double>(d.begin(), d.end())); }

json to_json_value(const Channel& c) {
  json rows = json::array();
  for (std::size_t x = 0; x < c.inputs(); ++x) rows.push_back(to_json_value(c.row(x)));
  return rows;
}

json instance_json(const Joint& j) { return {{"prior", to_json_value(j.prior())}, {"channel", to_json_value(j.channel())}}; }

json instance_json(const MarkovTriple& t) {
  return {{"prior", to_json_value(t.prior)}, {"ch_xy", to_json_value(t.ch_xy)}, {"ch_yz", to_json_value(t.ch_yz)}};
}

Dist toward_uniform(const Dist& d, double t) { return Dist::mix(Dist::uniform(d.size()), d, t); }

Channel toward_uniform(const Channel& c, std::size_t row, double t) {
  std::vector<Dist> rows;
  for (std::size_t x = 0; x < c.inputs(); ++x) rows.push_back(x == row ? toward_uniform(c.row(x), t) : c.row(x));
  return Channel(std::move(rows));
}

constexpr double kShrinkSteps[] = {1.0, 0.5, 0.25, 0.1};
constexpr std::size_t kShrinkRounds = 20;

// Greedy shrink: repeatedly move one component toward uniform while the
// violation persists. `variants` lists the candidate moves of an instance.
template <class Inst, class Eval, class Variants>
Witness shrink(Inst inst, double gap, Eval&& eval, Variants&& variants, double threshold) {
  Witness w;
  for (std::size_t round = 0; round < kShrinkRounds; ++round) {
    bool moved = false;
    for (auto& cand : variants(inst)) {
      double lhs = 0.0;
      double rhs = 0.0;
      try {
        std::tie(lhs, rhs) = eval(cand);
      } catch (const std::exception&) {
        continue;
      }
      if (lhs - rhs > threshold) {
        inst = std::move(cand);
        gap = lhs - rhs;
        ++w.shrink_steps;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  const auto [lhs, rhs] = eval(inst);
  w.lhs = lhs;
  w.rhs = rhs;
  w.gap = gap;
  w.instance_json = instance_json(inst).dump();
  w.digest = digest(inst);
  return w;
}

std::vector<Joint> joint_variants(const Joint& j) {
  std::vector<Joint> out;
  for (double t : kShrinkSteps) {
    out.emplace_back(toward_uniform(j.prior(), t), j.channel());
    for (std::size_t x = 0; x < j.x_size(); ++x) out.emplace_back(j.prior(), toward_uniform(j.channel(), x, t));
  }
  return out;
}

std::vector<MarkovTriple> markov_variants(const MarkovTriple& m) {
  std::vector<MarkovTriple> out;
  for (double t : kShrinkSteps) {
    out.push_back({toward_uniform(m.prior, t), m.ch_xy, m.ch_yz});
    for (std::size_t x = 0; x < m.ch_xy.inputs(); ++x) out.push_back({m.prior, toward_uniform(m.ch_xy, x, t), m.ch_yz});
    for (std::size_t y = 0; y < m.ch_yz.inputs(); ++y) out.push_back({m.prior, m.ch_xy, toward_uniform(m.ch_yz, y, t)});
  }
  return out;
}

std::pair<double, double> eval_cre(const Measure& m, const Joint& j) {
  return {m.conditional(j), m.unconditional(j.prior())};
}

std::pair<double, double> eval_dpi(const Measure& m, const MarkovTriple& t) {
  const auto [xy, xz] = compose_markov(t);
  return {m.conditional(xy), m.conditional(xz)};
}

double threshold_of(const Measure& m, const PropertyOptions& opts) {
  return opts.tol + (m.optimizer_valued ? opts.optimizer_slack : 0.0);
}

void finish(PropertyReport& rep) {
  std::stable_sort(rep.failures.begin(), rep.failures.end(),
                   [](const Failure& a, const Failure& b) { return a.gap > b.gap; });
}

template <class Inst, class Make, class Eval, class Variants>
PropertyReport run_trials(Property prop, const Measure& m, const PropertyOptions& opts, Make&& make, Eval&& eval,
                          Variants&& variants) {
  check_options(opts);
  PropertyReport rep;
  rep.property = prop;
  rep.measure = m.name;
  rep.trials = opts.trials;
  rep.seed = opts.seed;
  rep.threshold = threshold_of(m, opts);
  rep.worst_gap = -std::numeric_limits<double>::infinity();
  std::optional<Inst> worst;
  double worst_failed = 0.0;
  for (std::size_t t = 0; t < opts.trials; ++t) {
    const std::uint64_t s = derive_seed(opts.seed, t);
    Inst inst = make(s);
    const auto [lhs, rhs] = eval(inst);
    const double gap = lhs - rhs;
    rep.worst_gap = std::max(rep.worst_gap, gap);
    if (!(gap <= rep.threshold)) {
      if (!worst || gap > worst_failed) {
        worst = inst;
        worst_failed = gap;
      }
      rep.failures.push_back({t, s, digest(inst), lhs, rhs, gap});
    }
  }
  finish(rep);
  if (worst && opts.shrink) {
    rep.witness = shrink(std::move(*worst), worst_failed, eval, variants, rep.threshold);
  }
  return rep;
}

}  // namespace

std::string digest(const Joint& j) {
  std::vector<double> xs;
  append(xs, j.prior());
  append(xs, j.channel());
  return hex(fnv(xs));
}

std::string digest(const MarkovTriple& t) {
  std::vector<double> xs;
  append(xs, t.prior);
  append(xs, t.ch_xy);
  append(xs, t.ch_yz);
  return hex(fnv(xs));
}

Joint cre_instance(std::uint64_t trial_seed, const PropertyOptions& opts, std::optional<std::size_t> x) {
  Rng rng(trial_seed);
  const std::size_t nx = x ? *x : small_dim(rng, opts.max_dim);
  const std::size_t ny = small_dim(rng, opts.max_dim);
  const SparseMode sparse = trial_sparse(rng, opts);
  Dist prior = random_dist(rng, nx, sparse);
  Channel ch = random_channel(rng, nx, ny, sparse);
  return Joint(std::move(prior), std::move(ch));
}

MarkovTriple dpi_instance(std::uint64_t trial_seed, const PropertyOptions& opts, std::optional<std::size_t> x) {
  Rng rng(trial_seed);
  const std::size_t nx = x ? *x : small_dim(rng, opts.max_dim);
  const std::size_t ny = small_dim(rng, opts.max_dim);
  const std::size_t nz = small_dim(rng, opts.max_dim);
  const SparseMode sparse = trial_sparse(rng, opts);
  Dist prior = random_dist(rng, nx, sparse);
  Channel xy = random_channel(rng, nx, ny, sparse);
  Channel yz = random_channel(rng, ny, nz, sparse);
  return {std::move(prior), std::move(xy), std::move(yz)};
}

PropertyReport check_cre(const Measure& m, const PropertyOptions& opts) {
  if (!m.unconditional) throw InputError("CRE needs an unconditional measure for " + m.name);
  return run_trials<Joint>(
      Property::cre, m, opts, [&](std::uint64_t s) { return cre_instance(s, opts, m.alphabet); },
      [&](const Joint& j) { return eval_cre(m, j); }, joint_variants);
}

PropertyReport check_dpi(const Measure& m, const PropertyOptions& opts) {
  return run_trials<MarkovTriple>(
      Property::dpi, m, opts, [&](std::uint64_t s) { return dpi_instance(s, opts, m.alphabet); },
      [&](const MarkovTriple& t) { return eval_dpi(m, t); }, markov_variants);
}

Replay replay_cre(const Measure& m, std::uint64_t trial_seed, const PropertyOptions& opts) {
  const Joint j = cre_instance(trial_seed, opts, m.alphabet);
  const auto [lhs, rhs] = eval_cre(m, j);
  return {lhs, rhs, digest(j)};
}

Replay replay_dpi(const Measure& m, std::uint64_t trial_seed, const PropertyOptions& opts) {
  const MarkovTriple t = dpi_instance(trial_seed, opts, m.alphabet);
  const auto [lhs, rhs] = eval_dpi(m, t);
  return {lhs, rhs, digest(t)};
}

EntropyFramework posterior_identity_framework(const VulnSpec& spec) {
  return EntropyFramework(MonotoneFn::identity(), CoreFn::neg_vulnerability(spec), Aggregator::epknavg,
                          MonotoneFn::compose(spec.psi, MonotoneFn::negate()));
}

PropertyReport check_posterior_identity(const VulnSpec& spec, const PropertyOptions& opts, double tol) {
  check_options(opts);
  const EntropyFramework fw = posterior_identity_framework(spec);
  PropertyReport rep;
  rep.property = Property::identity;
  rep.measure = spec_name("posterior-identity", spec);
  rep.trials = opts.trials;
  rep.seed = opts.seed;
  rep.threshold = tol;
  const auto alphabet = spec.gain.alphabet();
  for (std::size_t t = 0; t < opts.trials; ++t) {
    const std::uint64_t s = derive_seed(opts.seed, t);
    const Joint j = cre_instance(s, opts, alphabet);
    const double lhs = g_posterior_entropy(j, spec);
    const double rhs = framework_cond_entropy(fw, j);
    const double gap = std::abs(lhs - rhs);
    rep.worst_gap = std::max(rep.worst_gap, gap);
    if (!(gap <= tol)) rep.failures.push_back({t, s, digest(j), lhs, rhs, gap});
  }
  finish(rep);

  CcvOptions ccv;
  ccv.trials = 200;
  ccv.seed = opts.seed;
  ccv.max_dim = opts.max_dim;
  const EavgTransform tr = to_eavg(fw, ccv);
  rep.hypothesis_ok = tr.precondition_ok;
  if (!tr.precondition_ok) rep.note = tr.warning;
  return rep;
}

Joint counterexample_joint(const Dist& p0) {
  const std::size_t n = p0.size();
  std::vector<double> rev(p0.begin(), p0.end());
  std::reverse(rev.begin(), rev.end());
  const Dist p1(rev);
  std::vector<double> prior(n);
  std::vector<Dist> rows;
  for (std::size_t x = 0; x < n; ++x) prior[x] = 0.5 * (p0[x] + p1[x]);
  for (std::size_t x = 0; x < n; ++x) {
    if (prior[x] == 0.0) {
      rows.push_back(Dist::uniform(2));
    } else {
      rows.push_back(Dist({0.5 * p0[x] / prior[x], 0.5 * p1[x] / prior[x]}));
    }
  }
  return Joint(Dist(prior), Channel(std::move(rows)));
}

CounterexampleReport run_counterexample(double alpha, const Dist& p0, const AcSolverConfig& cfg) {
  if (p0.size() < 2) throw InputError("counterexample needs |X| >= 2");
  if (!(alpha > 0.0) || Order(alpha).is_limit()) throw InputError("counterexample needs alpha > 0, alpha != 1");
  const Joint j = counterexample_joint(p0);
  CounterexampleReport r;
  r.alpha = alpha;
  r.p0 = p0;
  std::vector<double> rev(p0.begin(), p0.end());
  std::reverse(rev.begin(), rev.end());
  r.p1 = Dist(rev);
  r.a = shannon(p0);
  // Deterministic rule: output i guesses the mode of p_i.
  for (std::size_t y : j.support()) {
    const Dist& pi = y == 0 ? r.p0 : r.p1;
    const auto mode = std::max_element(pi.begin(), pi.end()) - pi.begin();
    r.witness.push_back(Dist::point_mass(p0.size(), static_cast<std::size_t>(mode)));
  }
  r.b = ac_objective(j, alpha, r.witness);
  r.solution = augustin_csiszar(j, alpha, cfg);
  r.c = r.solution.value;
  r.gap = r.a - r.c;
  r.holds = r.c <= r.b + 1e-6 && r.b + 1e-6 < r.a;
  return r;
}

namespace {

json failure_json(const Failure& f) {
  return {{"trial", f.trial}, {"seed", f.seed}, {"digest", f.digest}, {"lhs", f.lhs}, {"rhs", f.rhs}, {"gap", f.gap}};
}

json dist_json(const Dist& d) { return to_json_value(d); }

}  // namespace

std::string to_json(const PropertyReport& r, int indent) {
  json o;
  o["property"] = to_string(r.property);
  o["measure"] = r.measure;
  o["trials"] = r.trials;
  o["seed"] = r.seed;
  o["threshold"] = r.threshold;
  o["verdict"] = r.pass() ? "pass" : "fail";
  o["worst_gap"] = r.worst_gap;
  o["failures"] = json::array();
  for (const auto& f : r.failures) o["failures"].push_back(failure_json(f));
  if (r.witness) {
    o["witness"] = {{"instance", json::parse(r.witness->instance_json)},
                    {"digest", r.witness->digest},
                    {"lhs", r.witness->lhs},
                    {"rhs", r.witness->rhs},
                    {"gap", r.witness->gap},
                    {"shrink_steps", r.witness->shrink_steps}};
  }
  if (r.hypothesis_ok) o["hypothesis_ok"] = *r.hypothesis_ok;
  if (!r.note.empty()) o["note"] = r.note;
  return o.dump(indent);
}

std::string to_table(const PropertyReport& r) {
  std::ostringstream out;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  out << "property   " << to_string(r.property) << "\n"
      << "measure    " << r.measure << "\n"
      << "trials     " << r.trials << " (seed " << r.seed << ")\n"
      << "threshold  " << num(r.threshold) << "\n"
      << "worst gap  " << num(r.worst_gap) << "\n"
      << "verdict    " << (r.pass() ? "pass" : "fail") << " (" << r.failures.size() << " failures)\n";
  if (r.hypothesis_ok) out << "hypothesis " << (*r.hypothesis_ok ? "holds" : "fails") << "\n";
  if (!r.note.empty()) out << "note       " << r.note << "\n";
  const std::size_t shown = std::min<std::size_t>(r.failures.size(), 5);
  if (shown > 0) {
    out << "\n  trial  seed                  digest            lhs          rhs          gap\n";
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& f = r.failures[i];
      char line[160];
      std::snprintf(line, sizeof line, "  %-6zu %-21llu %-17s %-12s %-12s %s\n", f.trial,
                    static_cast<unsigned long long>(f.seed), f.digest.c_str(), num(f.lhs).c_str(),
                    num(f.rhs).c_str(), num(f.gap).c_str());
      out << line;
    }
  }
  if (r.witness) {
    out << "\nwitness    " << r.witness->instance_json << "\n"
        << "           lhs " << num(r.witness->lhs) << "  rhs " << num(r.witness->rhs) << "  gap "
        << num(r.witness->gap) << "\n";
  }
  return out.str();
}

std::string to_json(const CounterexampleReport& r, int indent) {
  json o;
  o["alpha"] = r.alpha;
  o["p0"] = dist_json(r.p0);
  o["p1"] = dist_json(r.p1);
  o["a"] = r.a;
  o["b"] = r.b;
  o["c"] = r.c;
  o["gap"] = r.gap;
  o["holds"] = r.holds;
  json argmin = json::array();
  for (const auto& d : r.solution.argmin) argmin.push_back(dist_json(d));
  json witness = json::array();
  for (const auto& d : r.witness) witness.push_back(dist_json(d));
  o["deterministic_rule"] = witness;
  o["solver"] = {{"argmin", argmin},
                 {"iterations", r.solution.iterations},
                 {"converged", r.solution.converged},
                 {"restarts", r.solution.restarts},
                 {"best_restart", r.solution.best_restart}};
  return o.dump(indent);
}

}  // namespace kncond
