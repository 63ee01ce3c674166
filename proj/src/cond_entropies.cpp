#include "kncond/cond_entropies.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "kncond/error.hpp"
#include "kncond/monotone.hpp"

namespace kncond {

double shannon_conditional(const Joint& j) {
  double h = 0.0;
  for (std::size_t k = 0; k < j.support().size(); ++k) {
    h += j.marginal()[j.support()[k]] * shannon(j.posteriors()[k]);
  }
  return h;
}

namespace {

// sum_y p_Y(y) sum_x p(x|y)^alpha
double expected_power_sum(const Joint& j, double alpha) {
  double acc = 0.0;
  for (std::size_t k = 0; k < j.support().size(); ++k) {
    acc += j.marginal()[j.support()[k]] * power_sum(j.posteriors()[k], alpha);
  }
  return acc;
}

}  // namespace

double arimoto(const Joint& j, const Order& alpha) {
  validate_alpha(alpha);
  if (alpha.is_limit()) return shannon_conditional(j);
  const double a = alpha.value();
  double outer = 0.0;
  for (std::size_t y : j.support()) {
    double inner = 0.0;
    for (std::size_t x = 0; x < j.x_size(); ++x) {
      const double pxy = j.joint(x, y);
      if (pxy > 0.0) inner += std::pow(pxy, a);
    }
    outer += std::pow(inner, 1.0 / a);
  }
  return a / (1.0 - a) * std::log(outer);
}

double hayashi(const Joint& j, const Order& alpha) {
  validate_alpha(alpha);
  if (alpha.is_limit()) return shannon_conditional(j);
  const double a = alpha.value();
  return std::log(expected_power_sum(j, a)) / (1.0 - a);
}

double manije_hct(const Joint& j, const Order& alpha) {
  validate_alpha(alpha);
  double acc = 0.0;
  for (std::size_t k = 0; k < j.support().size(); ++k) {
    acc += j.marginal()[j.support()[k]] * hct(j.posteriors()[k], alpha);
  }
  return acc;
}

double akm_sharma_mittal(const Joint& j, const Order& alpha, const Order& beta) {
  validate_alpha(alpha);
  double t = 0.0;
  if (alpha.is_limit()) {
    t = std::exp(shannon_conditional(j));
  } else {
    const double a = alpha.value();
    t = std::pow(expected_power_sum(j, a), 1.0 / (1.0 - a));
  }
  return q_log(t, beta.nominal());
}

SimplexOptConfig AcSolverConfig::as_simplex_config() const {
  SimplexOptConfig c;
  c.restarts = restarts;
  c.max_iters = max_iters;
  c.step_size = step_size;
  c.tol = tol;
  c.floor = floor;
  c.seed = seed;
  return c;
}

void validate(const AcSolverConfig& cfg) { validate(cfg.as_simplex_config()); }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Evaluation state for J(r). Blocks are indexed by supported outputs.
class AcProblem {
 public:
  AcProblem(const Joint& j, double alpha)
      : j_(j), alpha_(alpha), s_(1.0 - 1.0 / alpha), c_(alpha / (1.0 - alpha)) {}

  std::size_t blocks() const { return j_.support().size(); }

  // log Z_x(r), computed as log1p(sum_y W (r^s - 1)) for accuracy near alpha = 1.
  double log_z(const Blocks& r, std::size_t x) const {
    double zm1 = 0.0;
    for (std::size_t k = 0; k < blocks(); ++k) {
      const double w = j_.channel()(x, j_.support()[k]);
      if (w == 0.0) continue;
      zm1 += w * std::expm1(s_ * std::log(r[k][x]));
    }
    return std::log1p(zm1);
  }

  double objective(const Blocks& r) const {
    double acc = 0.0;
    for (std::size_t x = 0; x < j_.x_size(); ++x) {
      const double px = j_.prior()[x];
      if (px == 0.0) continue;
      const double lz = log_z(r, x);
      if (std::isnan(lz)) return kInf;
      acc += px * lz;
    }
    const double v = c_ * acc;
    return std::isnan(v) ? kInf : v;
  }

  // d(-J)/dr(x|y) = p(x) W(y|x) r^{s-1} / Z_x.
  void neg_gradient(const Blocks& r, Blocks& g) const {
    for (auto& b : g) std::fill(b.begin(), b.end(), 0.0);
    for (std::size_t x = 0; x < j_.x_size(); ++x) {
      const double px = j_.prior()[x];
      if (px == 0.0) continue;
      const double lz = log_z(r, x);
      for (std::size_t k = 0; k < blocks(); ++k) {
        const double w = j_.channel()(x, j_.support()[k]);
        if (w == 0.0) continue;
        g[k][x] = px * w * std::exp((s_ - 1.0) * std::log(r[k][x]) - lz);
      }
    }
  }

  // r(x|y) proportional to (p(x) W(y|x) / Z_x)^alpha: the stationarity condition.
  void fixed_point_step(const Blocks& r, Blocks& out) const {
    std::vector<double> lz(j_.x_size(), 0.0);
    for (std::size_t x = 0; x < j_.x_size(); ++x) lz[x] = log_z(r, x);
    for (std::size_t k = 0; k < blocks(); ++k) {
      double m = -kInf;
      for (std::size_t x = 0; x < j_.x_size(); ++x) {
        const double pw = j_.joint(x, j_.support()[k]);
        out[k][x] = pw > 0.0 ? alpha_ * (std::log(pw) - lz[x]) : -kInf;
        m = std::max(m, out[k][x]);
      }
      for (double& v : out[k]) v = std::exp(v - m);
    }
  }

 private:
  const Joint& j_;
  double alpha_;
  double s_;
  double c_;
};

Blocks to_blocks(const std::vector<Dist>& r) {
  Blocks b;
  b.reserve(r.size());
  for (const auto& d : r) b.emplace_back(d.begin(), d.end());
  return b;
}

std::vector<Dist> to_dists(const Blocks& b) {
  std::vector<Dist> out;
  out.reserve(b.size());
  for (const auto& v : b) out.emplace_back(v);
  return out;
}

// Damped iteration: step geometrically toward the fixed-point target
// r^{1-theta} target^theta, halving theta until the objective does not increase.
AscentRun fixed_point_run(const AcProblem& prob, Blocks start, const SimplexOptConfig& cfg) {
  AscentRun run;
  project_to_floor(start, cfg.floor);
  double value = prob.objective(start);
  Blocks target = start;
  Blocks cand = start;
  double theta = 1.0;
  for (run.iterations = 0; run.iterations < cfg.max_iters; ++run.iterations) {
    prob.fixed_point_step(start, target);
    double v = kInf;
    while (theta >= 1e-12) {
      for (std::size_t k = 0; k < cand.size(); ++k) {
        double total = 0.0;
        for (std::size_t x = 0; x < cand[k].size(); ++x) {
          cand[k][x] = std::exp((1.0 - theta) * std::log(start[k][x]) +
                                theta * std::log(std::max(target[k][x], 1e-300)));
          total += cand[k][x];
        }
        for (double& e : cand[k]) e /= total;
      }
      project_to_floor(cand, cfg.floor);
      v = prob.objective(cand);
      if (v <= value) break;
      theta *= 0.5;
    }
    if (!(v <= value)) {
      run.converged = true;
      break;
    }
    const double change = value - v;
    std::swap(start, cand);
    value = v;
    theta = std::min(1.0, 2.0 * theta);
    if (change <= cfg.tol * std::max(1.0, std::abs(v))) {
      run.converged = true;
      ++run.iterations;
      break;
    }
  }
  run.point = std::move(start);
  run.value = -value;
  return run;
}

}  // namespace

double ac_objective(const Joint& j, double alpha, const std::vector<Dist>& r) {
  if (!(alpha > 0.0) || std::abs(alpha - 1.0) < kOrderOneThreshold) {
    throw InputError("Augustin-Csiszar objective needs alpha > 0, alpha != 1");
  }
  if (r.size() != j.support().size()) throw InputError("r must have one distribution per supported output");
  for (const auto& d : r) {
    if (d.size() != j.x_size()) throw InputError("r(.|y) must be a distribution over X");
  }
  return AcProblem(j, alpha).objective(to_blocks(r));
}

AcSolution augustin_csiszar(const Joint& j, const Order& alpha, const AcSolverConfig& cfg) {
  validate_alpha(alpha);
  validate(cfg);
  AcSolution sol;
  if (alpha.is_limit()) {
    sol.value = shannon_conditional(j);
    sol.argmin = j.posteriors();
    sol.converged = true;
    return sol;
  }
  const double a = alpha.value();
  AcProblem prob(j, a);
  const SimplexOptConfig sc = cfg.as_simplex_config();
  std::vector<std::size_t> sizes(prob.blocks(), j.x_size());

  Blocks best;
  if (cfg.method == AcMethod::exp_gradient) {
    SimplexObjective obj;
    obj.block_sizes = sizes;
    obj.value = [&prob](const Blocks& r) { return -prob.objective(r); };
    obj.gradient = [&prob](const Blocks& r, Blocks& g) { prob.neg_gradient(r, g); };
    SimplexOptResult res = maximize_on_simplices(obj, sc);
    best = std::move(res.argmax);
    sol.iterations = res.iterations;
    sol.converged = res.converged;
    sol.restarts = res.starts_run;
    sol.best_restart = res.best_start;
  } else {
    double best_value = -kInf;
    auto starts = restart_points(sizes, sc);
    for (std::size_t r = 0; r < starts.size(); ++r) {
      AscentRun run = fixed_point_run(prob, std::move(starts[r]), sc);
      sol.iterations += run.iterations;
      sol.converged = sol.converged || run.converged;
      ++sol.restarts;
      if (std::isfinite(run.value) && run.value > best_value) {
        best_value = run.value;
        best = std::move(run.point);
        sol.best_restart = r;
      }
    }
    if (best.empty() && prob.blocks() > 0) throw SolverError("all Augustin-Csiszar restarts diverged");
  }
  sol.argmin = to_dists(best);
  sol.value = prob.objective(to_blocks(sol.argmin));
  if (!std::isfinite(sol.value)) throw SolverError("Augustin-Csiszar solver produced a non-finite value");
  return sol;
}

}  // namespace kncond
