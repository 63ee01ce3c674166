#include "kncond/simplex_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "kncond/error.hpp"
#include "kncond/rng.hpp"

namespace kncond {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMinStep = 1e-30;
constexpr double kMaxStep = 1e12;
// Frank-Wolfe gap (an upper bound on suboptimality for concave objectives)
// below which a run counts as converged.
constexpr double kGapTol = 1e-10;
// Looser gap accepted together with a stalled objective.
constexpr double kStallGapTol = 1e-6;

double safe_value(const SimplexObjective& obj, const Blocks& x) {
  const double v = obj.value(x);
  return std::isnan(v) ? kNegInf : v;
}

double scale_of(double v) { return std::max(1.0, std::abs(v)); }

double fw_gap(const Blocks& x, const Blocks& g) {
  double gap = 0.0;
  for (std::size_t b = 0; b < x.size(); ++b) {
    double m = -std::numeric_limits<double>::infinity();
    double dot = 0.0;
    for (std::size_t i = 0; i < x[b].size(); ++i) {
      m = std::max(m, g[b][i]);
      dot += x[b][i] * g[b][i];
    }
    gap += m - dot;
  }
  return gap;
}

}  // namespace

void validate(const SimplexOptConfig& cfg) {
  if (cfg.restarts < 1) throw InputError("optimizer needs at least one restart");
  if (!(cfg.tol > 0.0)) throw InputError("optimizer tolerance must be positive");
  if (!(cfg.floor > 0.0 && cfg.floor <= 1e-6)) throw InputError("simplex floor must lie in (0, 1e-6]");
  if (!(cfg.step_size > 0.0)) throw InputError("optimizer step size must be positive");
  if (cfg.max_iters < 1) throw InputError("optimizer needs at least one iteration");
}

void project_to_floor(Blocks& x, double floor) {
  for (auto& block : x) {
    double total = 0.0;
    for (double& v : block) {
      if (!(v >= floor)) v = floor;
      total += v;
    }
    for (double& v : block) v /= total;
  }
}

AscentRun exp_gradient_ascent(const SimplexObjective& obj, Blocks start, const SimplexOptConfig& cfg) {
  AscentRun run;
  run.point = std::move(start);
  project_to_floor(run.point, cfg.floor);
  run.value = safe_value(obj, run.point);
  if (run.value == kNegInf) return run;

  Blocks grad = run.point;
  Blocks trial = run.point;
  double step = cfg.step_size;
  for (run.iterations = 0; run.iterations < cfg.max_iters; ++run.iterations) {
    obj.gradient(run.point, grad);
    const double gap = fw_gap(run.point, grad);
    if (!std::isfinite(gap)) break;
    const double scale = scale_of(run.value);
    if (gap <= kGapTol * scale) {
      run.converged = true;
      break;
    }

    bool accepted = false;
    double next = kNegInf;
    while (step >= kMinStep) {
      for (std::size_t b = 0; b < trial.size(); ++b) {
        const auto& g = grad[b];
        const double m = *std::max_element(g.begin(), g.end());
        for (std::size_t i = 0; i < g.size(); ++i) {
          trial[b][i] = run.point[b][i] * std::exp(step * (g[i] - m));
        }
      }
      project_to_floor(trial, cfg.floor);
      next = safe_value(obj, trial);
      if (next > run.value) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      run.converged = gap <= kStallGapTol * scale;
      break;
    }
    const double gain = next - run.value;
    std::swap(run.point, trial);
    run.value = next;
    step = std::min(step * 2.0, kMaxStep);
    if (gain <= cfg.tol * scale && gap <= kStallGapTol * scale) {
      run.converged = true;
      ++run.iterations;
      break;
    }
  }
  return run;
}

std::vector<Blocks> restart_points(const std::vector<std::size_t>& block_sizes, const SimplexOptConfig& cfg) {
  std::vector<Blocks> starts;
  starts.reserve(cfg.restarts);
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Blocks x;
    x.reserve(block_sizes.size());
    if (r == 0) {
      for (std::size_t n : block_sizes) x.emplace_back(n, 1.0 / static_cast<double>(n));
    } else {
      Rng rng(derive_seed(cfg.seed, r));
      for (std::size_t n : block_sizes) x.push_back(rng.dirichlet(n));
    }
    starts.push_back(std::move(x));
  }
  return starts;
}

namespace {

// Best floored point mass over all combinations, or nothing above the cap.
std::optional<Blocks> best_point_mass(const SimplexObjective& obj, const SimplexOptConfig& cfg) {
  double combos = 1.0;
  for (std::size_t n : obj.block_sizes) combos *= static_cast<double>(n);
  if (combos > static_cast<double>(cfg.deterministic_cap)) return std::nullopt;

  const std::size_t nb = obj.block_sizes.size();
  std::vector<std::size_t> choice(nb, 0);
  Blocks x;
  for (std::size_t n : obj.block_sizes) x.emplace_back(n, 0.0);
  std::optional<Blocks> best;
  double best_value = kNegInf;
  while (true) {
    for (std::size_t b = 0; b < nb; ++b) {
      std::fill(x[b].begin(), x[b].end(), 0.0);
      x[b][choice[b]] = 1.0;
    }
    project_to_floor(x, cfg.floor);
    const double v = safe_value(obj, x);
    if (v > best_value) {
      best_value = v;
      best = x;
    }
    std::size_t b = 0;
    while (b < nb && ++choice[b] == obj.block_sizes[b]) choice[b++] = 0;
    if (b == nb) break;
  }
  return best;
}

}  // namespace

SimplexOptResult maximize_on_simplices(const SimplexObjective& obj, const SimplexOptConfig& cfg) {
  validate(cfg);
  for (std::size_t n : obj.block_sizes) {
    if (n == 0) throw InputError("simplex block of size zero");
  }
  SimplexOptResult res;
  res.value = kNegInf;
  bool any_finite = false;
  auto consider = [&](AscentRun run, std::size_t index) {
    ++res.starts_run;
    res.iterations += run.iterations;
    res.converged = res.converged || run.converged;
    if (run.value == kNegInf || std::isnan(run.value)) return;
    if (!any_finite || run.value > res.value) {
      res.value = run.value;
      res.argmax = std::move(run.point);
      res.best_start = index;
    }
    any_finite = true;
  };

  auto starts = restart_points(obj.block_sizes, cfg);
  for (std::size_t r = 0; r < starts.size(); ++r) {
    consider(exp_gradient_ascent(obj, std::move(starts[r]), cfg), r);
  }
  if (auto seed = best_point_mass(obj, cfg)) {
    consider(exp_gradient_ascent(obj, std::move(*seed), cfg), cfg.restarts);
  }
  if (!any_finite) throw SolverError("all optimizer starts diverged");
  return res;
}

}  // namespace kncond
