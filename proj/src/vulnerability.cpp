#include "kncond/vulnerability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kncond/csv.hpp"
#include "kncond/error.hpp"
#include "kncond/kn_mean.hpp"
#include "kncond/rng.hpp"
#include "kncond/text_syntax.hpp"

namespace kncond {

struct GainFn::Node {
  Kind kind;
  Matrix table;
  MonotoneFn eta = MonotoneFn::identity();
  std::shared_ptr<const Node> inner;
};

GainFn GainFn::finite(Matrix table) {
  if (table.rows() == 0 || table.cols() == 0) throw InputError("gain table must be non-empty");
  for (double v : table.data()) {
    if (!std::isfinite(v)) throw InputError("gain table entries must be finite");
  }
  return GainFn(std::make_shared<Node>(Node{Kind::finite, std::move(table), MonotoneFn::identity(), nullptr}));
}

GainFn GainFn::soft01() {
  return GainFn(std::make_shared<Node>(Node{Kind::soft01, Matrix(), MonotoneFn::identity(), nullptr}));
}

GainFn GainFn::transformed(MonotoneFn eta, GainFn inner) {
  return GainFn(std::make_shared<Node>(Node{Kind::transformed, Matrix(), std::move(eta), inner.node_}));
}

GainFn::Kind GainFn::kind() const { return node_->kind; }

bool GainFn::has_finite_actions() const {
  const Node* n = node_.get();
  while (n->kind == Kind::transformed) n = n->inner.get();
  return n->kind == Kind::finite;
}

Matrix GainFn::effective_table() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::finite: return n.table;
    case Kind::soft01: throw InputError("soft 0-1 gain has no finite action table");
    case Kind::transformed: {
      Matrix m = GainFn(n.inner).effective_table();
      for (std::size_t x = 0; x < m.rows(); ++x) {
        for (std::size_t a = 0; a < m.cols(); ++a) {
          const double v = m(x, a);
          m(x, a) = n.eta.domain().contains(v) ? n.eta.apply_unchecked(v)
                                               : std::numeric_limits<double>::quiet_NaN();
        }
      }
      return m;
    }
  }
  throw InputError("unknown gain kind");
}

MonotoneFn GainFn::soft_transform() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::finite: throw InputError("finite gain has no soft transform");
    case Kind::soft01: return MonotoneFn::identity();
    case Kind::transformed: {
      MonotoneFn t = GainFn(n.inner).soft_transform();
      return t.is_identity() ? n.eta : MonotoneFn::compose(n.eta, t);
    }
  }
  throw InputError("unknown gain kind");
}

std::optional<std::size_t> GainFn::alphabet() const {
  const Node* n = node_.get();
  while (n->kind == Kind::transformed) n = n->inner.get();
  if (n->kind == Kind::finite) return n->table.rows();
  return std::nullopt;
}

std::string GainFn::to_string() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::soft01: return "soft01";
    case Kind::transformed: return "transform(" + n.eta.to_string() + "," + GainFn(n.inner).to_string() + ")";
    case Kind::finite: {
      std::string s = "table(";
      for (std::size_t x = 0; x < n.table.rows(); ++x) {
        if (x > 0) s += ';';
        for (std::size_t a = 0; a < n.table.cols(); ++a) {
          if (a > 0) s += ',';
          s += syntax::format_number(n.table(x, a));
        }
      }
      return s + ")";
    }
  }
  return "?";
}

GainFn GainFn::parse(syntax::Cursor& cur) {
  const std::string name = cur.identifier();
  if (name == "soft01") return soft01();
  if (name == "transform") {
    cur.expect('(');
    MonotoneFn eta = MonotoneFn::parse(cur);
    cur.expect(',');
    GainFn inner = parse(cur);
    cur.expect(')');
    return transformed(std::move(eta), std::move(inner));
  }
  if (name == "table") {
    cur.expect('(');
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
    do {
      std::size_t c = 0;
      do {
        data.push_back(cur.number());
        ++c;
      } while (cur.accept(','));
      if (rows > 0 && c != cols) cur.fail("gain table rows differ in length");
      cols = c;
      ++rows;
    } while (cur.accept(';'));
    cur.expect(')');
    return finite(Matrix(rows, cols, std::move(data)));
  }
  if (name == "csv") {
    cur.expect('(');
    const std::string path = cur.raw_argument();
    cur.expect(')');
    return finite(read_matrix_csv(path));
  }
  cur.fail("unknown gain '" + name + "'");
}

GainFn GainFn::parse(std::string_view text) {
  syntax::Cursor cur(text);
  GainFn g = parse(cur);
  if (!cur.at_end()) cur.fail("trailing characters");
  return g;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sign_of(const MonotoneFn& f) { return f.increasing() ? 1.0 : -1.0; }

void require_in_domain(const MonotoneFn& f, double v, const char* role) {
  if (!f.domain().contains(v)) {
    throw DomainError(std::string("gain value ") + syntax::format_number(v) + " outside the domain of " + role +
                      " = " + f.to_string());
  }
}

// Soft actions: g(x, r) = T(r(x)) with r(x) in [floor, 1].
struct SoftGain {
  MonotoneFn t;
  double floor;
  double lo;
  double hi;
};

SoftGain soft_gain(const VulnSpec& spec, bool with_psi) {
  validate(spec.solver);
  SoftGain s{spec.gain.soft_transform(), spec.solver.floor, 0.0, 0.0};
  if (!s.t.domain().contains(s.floor) || !s.t.domain().contains(1.0)) {
    throw DomainError("gain transform " + s.t.to_string() + " undefined on the action simplex");
  }
  const double a = s.t.apply_unchecked(s.floor);
  const double b = s.t.apply_unchecked(1.0);
  s.lo = std::min(a, b);
  s.hi = std::max(a, b);
  for (double v : {s.lo, s.hi}) {
    if (!std::isfinite(v)) throw DomainError("gain transform is not finite on the action simplex");
    require_in_domain(spec.phi, v, "phi");
    if (with_psi) require_in_domain(spec.psi, v, "psi");
  }
  return s;
}

// Effective finite table, checked on rows with positive prior mass.
Matrix finite_gain(const VulnSpec& spec, const Dist& prior, bool with_psi) {
  Matrix g = spec.gain.effective_table();
  if (g.rows() != prior.size()) {
    throw InputError("gain table has " + std::to_string(g.rows()) + " rows but the secret has " +
                     std::to_string(prior.size()) + " values");
  }
  for (std::size_t x = 0; x < g.rows(); ++x) {
    if (prior[x] == 0.0) continue;
    for (std::size_t a = 0; a < g.cols(); ++a) {
      const double v = g(x, a);
      if (std::isnan(v)) throw DomainError("transformed gain undefined at x=" + std::to_string(x));
      require_in_domain(spec.phi, v, "phi");
      if (with_psi) require_in_domain(spec.psi, v, "psi");
    }
  }
  return g;
}

struct Best {
  double value = kNegInf;
  std::size_t action = 0;
};

// max_a M_phi[g(X,a)] over the columns of g.
Best best_column(const Matrix& g, std::span<const double> w, const MonotoneFn& phi) {
  Best best;
  std::vector<double> col(g.rows());
  for (std::size_t a = 0; a < g.cols(); ++a) {
    for (std::size_t x = 0; x < g.rows(); ++x) col[x] = g(x, a);
    const double v = kn_mean(col, w, phi);
    if (v > best.value) best = {v, a};
  }
  return best;
}

struct SoftBest {
  double value = 0.0;
  std::vector<double> action;
  SimplexOptResult res;
};

// max_r M_phi[T(r(X))] under weights w.
SoftBest best_soft(std::span<const double> w, const VulnSpec& spec, const SoftGain& sg) {
  const MonotoneFn u = MonotoneFn::compose(spec.phi, sg.t);
  const double sigma = sign_of(spec.phi);
  SimplexObjective obj;
  obj.block_sizes = {w.size()};
  obj.value = [&](const Blocks& r) {
    double acc = 0.0;
    for (std::size_t x = 0; x < w.size(); ++x) {
      if (w[x] > 0.0) acc += w[x] * u.apply_unchecked(r[0][x]);
    }
    return sigma * acc;
  };
  obj.gradient = [&](const Blocks& r, Blocks& g) {
    for (std::size_t x = 0; x < w.size(); ++x) {
      g[0][x] = w[x] > 0.0 ? sigma * w[x] * u.derivative_unchecked(r[0][x]) : 0.0;
    }
  };
  SoftBest out;
  out.res = maximize_on_simplices(obj, spec.solver);
  out.action = out.res.argmax.front();
  std::vector<double> vals(w.size());
  for (std::size_t x = 0; x < w.size(); ++x) vals[x] = sg.t(out.action[x]);
  out.value = kn_mean(vals, w, spec.phi);
  return out;
}

void absorb(VulnMeta& m, const SimplexOptResult& r) {
  m.iterations += r.iterations;
  m.restarts += r.starts_run;
  m.converged = m.converged && r.converged;
}

VulnMeta soft_meta(double floor) {
  VulnMeta m;
  m.optimized = true;
  m.floor = floor;
  return m;
}

// Supported-output weights p_Y restricted to Joint::support().
std::vector<double> support_weights(const Joint& j) {
  std::vector<double> w;
  for (std::size_t y : j.support()) w.push_back(j.marginal()[y]);
  return w;
}

// Coupled Bayes objective sigma_phi * sum_x p(x) phi(psi^{-1}(sum_k W(y_k|x) psi(g_k(x)))),
// where gk(x, k) is psi(g(x, delta(y_k))) already.
class BayesKernel {
 public:
  BayesKernel(const Joint& j, const VulnSpec& spec)
      : j_(j), outer_(MonotoneFn::compose(spec.phi, spec.psi.inverted())), sigma_(sign_of(spec.phi)) {
    for (std::size_t x = 0; x < j.x_size(); ++x) {
      if (j.prior()[x] > 0.0) xs_.push_back(x);
    }
    w_ = Matrix(j.x_size(), j.support().size());
    for (std::size_t x : xs_) {
      for (std::size_t k = 0; k < j.support().size(); ++k) w_(x, k) = j.channel()(x, j.support()[k]);
    }
  }

  template <class PsiGain>
  double value(PsiGain&& psig) const {
    double acc = 0.0;
    for (std::size_t x : xs_) {
      double s = 0.0;
      for (std::size_t k = 0; k < w_.cols(); ++k) {
        if (w_(x, k) > 0.0) s += w_(x, k) * psig(x, k);
      }
      acc += j_.prior()[x] * outer_.apply_unchecked(s);
    }
    return sigma_ * acc;
  }

  const std::vector<std::size_t>& inputs() const { return xs_; }
  double w(std::size_t x, std::size_t k) const { return w_(x, k); }
  double sigma() const { return sigma_; }
  const MonotoneFn& outer() const { return outer_; }

 private:
  const Joint& j_;
  MonotoneFn outer_;
  double sigma_;
  std::vector<std::size_t> xs_;
  Matrix w_;
};

// Checked evaluation of M_phi[M_psi[g(X, delta(Y)) | X]] from per-(x,k) gain values.
template <class Gain>
double bayes_value(const Joint& j, const VulnSpec& spec, Gain&& gain) {
  const std::size_t m = j.support().size();
  std::vector<double> inner(j.x_size(), 0.0);
  std::vector<double> vals(m);
  std::vector<double> ws(m);
  for (std::size_t x = 0; x < j.x_size(); ++x) {
    if (j.prior()[x] == 0.0) continue;
    for (std::size_t k = 0; k < m; ++k) {
      ws[k] = j.channel()(x, j.support()[k]);
      vals[k] = ws[k] > 0.0 ? gain(x, k) : 0.0;
    }
    inner[x] = kn_mean(vals, ws, spec.psi);
  }
  return kn_mean(inner, j.prior().probs(), spec.phi);
}

BayesResult bayes_finite(const Joint& j, const VulnSpec& spec, const BayesOptions& opts) {
  const Matrix g = finite_gain(spec, j.prior(), true);
  const std::size_t m = j.support().size();
  const std::size_t na = g.cols();
  Matrix psig(g.rows(), na, 0.0);
  for (std::size_t x = 0; x < g.rows(); ++x) {
    if (j.prior()[x] == 0.0) continue;
    for (std::size_t a = 0; a < na; ++a) psig(x, a) = spec.psi(g(x, a));
  }
  BayesKernel kernel(j, spec);
  auto eval = [&](const std::vector<std::size_t>& d) {
    const double v = kernel.value([&](std::size_t x, std::size_t k) { return psig(x, d[k]); });
    return std::isnan(v) ? kNegInf : v;
  };

  BayesResult out;
  out.rule.outputs = j.support();
  std::vector<std::size_t> best(m, 0);
  double best_value = kNegInf;
  const double count = std::pow(static_cast<double>(na), static_cast<double>(m));
  if (count <= opts.enumeration_cap) {
    // Odometer with the last output varying fastest: the first maximum found is
    // the lexicographically smallest rule.
    std::vector<std::size_t> d(m, 0);
    bool first = true;
    while (true) {
      const double v = eval(d);
      if (first || v > best_value) {
        best_value = v;
        best = d;
        first = false;
      }
      std::size_t k = m;
      while (k > 0 && ++d[k - 1] == na) d[--k] = 0;
      if (k == 0) break;
    }
    out.meta.iterations = static_cast<std::size_t>(count);
  } else {
    if (!opts.allow_heuristic) {
      throw InputError("decision-rule enumeration exceeds the cap and heuristics are disabled");
    }
    out.meta.heuristic = true;
    const DecisionRule greedy = per_output_rule(j, spec);
    for (std::size_t r = 0; r < spec.solver.restarts; ++r) {
      std::vector<std::size_t> d;
      if (r == 0) {
        d = std::get<std::vector<std::size_t>>(greedy.actions);
      } else {
        Rng rng(derive_seed(spec.solver.seed, r));
        for (std::size_t k = 0; k < m; ++k) d.push_back(rng.index(na));
      }
      double cur = eval(d);
      bool improved = true;
      for (std::size_t sweep = 0; improved && sweep < spec.solver.max_iters; ++sweep) {
        improved = false;
        ++out.meta.iterations;
        for (std::size_t k = 0; k < m; ++k) {
          const std::size_t keep = d[k];
          std::size_t arg = keep;
          for (std::size_t a = 0; a < na; ++a) {
            if (a == keep) continue;
            d[k] = a;
            const double v = eval(d);
            if (v > cur) {
              cur = v;
              arg = a;
            }
          }
          d[k] = arg;
          improved = improved || arg != keep;
        }
      }
      ++out.meta.restarts;
      if (r == 0 || cur > best_value) {
        best_value = cur;
        best = d;
      }
    }
  }
  out.value = bayes_value(j, spec, [&](std::size_t x, std::size_t k) { return g(x, best[k]); });
  out.rule.actions = best;
  return out;
}

BayesResult bayes_soft(const Joint& j, const VulnSpec& spec) {
  const SoftGain sg = soft_gain(spec, true);
  const MonotoneFn u = MonotoneFn::compose(spec.psi, sg.t);
  BayesKernel kernel(j, spec);
  const std::size_t m = j.support().size();
  const std::size_t n = j.x_size();

  SimplexObjective obj;
  obj.block_sizes.assign(m, n);
  obj.value = [&](const Blocks& r) {
    return kernel.value([&](std::size_t x, std::size_t k) { return u.apply_unchecked(r[k][x]); });
  };
  obj.gradient = [&](const Blocks& r, Blocks& g) {
    for (auto& b : g) std::fill(b.begin(), b.end(), 0.0);
    for (std::size_t x : kernel.inputs()) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (kernel.w(x, k) > 0.0) s += kernel.w(x, k) * u.apply_unchecked(r[k][x]);
      }
      const double coef = kernel.sigma() * j.prior()[x] * kernel.outer().derivative_unchecked(s);
      for (std::size_t k = 0; k < m; ++k) {
        if (kernel.w(x, k) > 0.0) g[k][x] = coef * kernel.w(x, k) * u.derivative_unchecked(r[k][x]);
      }
    }
  };
  SimplexOptResult res = maximize_on_simplices(obj, spec.solver);

  BayesResult out;
  out.meta = soft_meta(sg.floor);
  absorb(out.meta, res);
  out.rule.outputs = j.support();
  std::vector<Dist> actions;
  for (const auto& b : res.argmax) actions.emplace_back(b);
  out.value = bayes_value(j, spec, [&](std::size_t x, std::size_t k) { return sg.t(actions[k][x]); });
  out.rule.actions = std::move(actions);
  return out;
}

}  // namespace

VulnValue prior_vulnerability(const Dist& p, const VulnSpec& spec) {
  VulnValue out;
  if (spec.gain.has_finite_actions()) {
    const Matrix g = finite_gain(spec, p, false);
    out.value = best_column(g, p.probs(), spec.phi).value;
    return out;
  }
  const SoftGain sg = soft_gain(spec, false);
  SoftBest b = best_soft(p.probs(), spec, sg);
  out.value = b.value;
  out.meta = soft_meta(sg.floor);
  absorb(out.meta, b.res);
  return out;
}

VulnValue posterior_vulnerability(const Joint& j, const VulnSpec& spec) {
  VulnValue out;
  std::vector<double> per_y;
  if (spec.gain.has_finite_actions()) {
    const Matrix g = finite_gain(spec, j.prior(), true);
    for (const auto& post : j.posteriors()) per_y.push_back(best_column(g, post.probs(), spec.phi).value);
  } else {
    const SoftGain sg = soft_gain(spec, true);
    out.meta = soft_meta(sg.floor);
    for (const auto& post : j.posteriors()) {
      SoftBest b = best_soft(post.probs(), spec, sg);
      per_y.push_back(b.value);
      absorb(out.meta, b.res);
    }
  }
  out.value = kn_mean(per_y, support_weights(j), spec.psi);
  return out;
}

BayesResult bayes_vulnerability(const Joint& j, const VulnSpec& spec, const BayesOptions& opts) {
  if (spec.gain.has_finite_actions()) return bayes_finite(j, spec, opts);
  return bayes_soft(j, spec);
}

double bayes_objective(const Joint& j, const VulnSpec& spec, const DecisionRule& rule) {
  if (rule.outputs != j.support()) throw InputError("decision rule must cover exactly the supported outputs");
  if (const auto* idx = std::get_if<std::vector<std::size_t>>(&rule.actions)) {
    const Matrix g = finite_gain(spec, j.prior(), true);
    if (idx->size() != rule.outputs.size()) throw InputError("decision rule has the wrong number of actions");
    for (std::size_t a : *idx) {
      if (a >= g.cols()) throw InputError("decision rule action out of range");
    }
    return bayes_value(j, spec, [&](std::size_t x, std::size_t k) { return g(x, (*idx)[k]); });
  }
  const auto& acts = std::get<std::vector<Dist>>(rule.actions);
  if (spec.gain.has_finite_actions()) throw InputError("distribution-valued rule needs a soft gain");
  if (acts.size() != rule.outputs.size()) throw InputError("decision rule has the wrong number of actions");
  const MonotoneFn t = spec.gain.soft_transform();
  return bayes_value(j, spec, [&](std::size_t x, std::size_t k) { return t(acts[k][x]); });
}

DecisionRule per_output_rule(const Joint& j, const VulnSpec& spec) {
  const Matrix g = finite_gain(spec, j.prior(), false);
  DecisionRule rule;
  rule.outputs = j.support();
  std::vector<std::size_t> acts;
  for (const auto& post : j.posteriors()) acts.push_back(best_column(g, post.probs(), spec.phi).action);
  rule.actions = std::move(acts);
  return rule;
}

VulnSpec transform_spec(const MonotoneFn& eta, const VulnSpec& spec) {
  if (!eta.increasing()) throw InputError("transform needs a strictly increasing function, got " + eta.to_string());
  const MonotoneFn inv = eta.inverted();
  VulnSpec out = spec;
  out.phi = MonotoneFn::compose(spec.phi, inv);
  out.psi = MonotoneFn::compose(spec.psi, inv);
  out.gain = GainFn::transformed(eta, spec.gain);
  return out;
}

double g_entropy(const Dist& p, const VulnSpec& spec) { return -prior_vulnerability(p, spec).value; }
double g_posterior_entropy(const Joint& j, const VulnSpec& spec) { return -posterior_vulnerability(j, spec).value; }
double g_bayes_entropy(const Joint& j, const VulnSpec& spec) { return -bayes_vulnerability(j, spec).value; }

}  // namespace kncond
