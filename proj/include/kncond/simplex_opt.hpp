#pragma once

// Multi-start exponentiated-gradient (mirror) ascent over a product of
// probability simplices. Shared by the Augustin-Csiszar solver and the
// soft-action vulnerabilities.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace kncond {

using Blocks = std::vector<std::vector<double>>;

struct SimplexOptConfig {
  std::size_t restarts = 8;      // restart 0 starts at uniform, the rest Dirichlet-random
  std::size_t max_iters = 10000;  // per restart
  double step_size = 0.1;         // initial mirror step; halved on non-increase
  double tol = 1e-12;             // relative objective change treated as converged
  double floor = 1e-12;           // minimum simplex entry
  std::uint64_t seed = 0;
  // Point-mass candidates are enumerated when prod(block sizes) is at most this.
  std::size_t deterministic_cap = 4096;
};

// Throws InputError unless restarts >= 1, tol > 0, 0 < floor <= 1e-6.
void validate(const SimplexOptConfig& cfg);

struct SimplexObjective {
  std::vector<std::size_t> block_sizes;
  // Non-finite values are treated as -infinity.
  std::function<double(const Blocks&)> value;
  // Writes d value / d x into `grad`, which has the shape of the point.
  std::function<void(const Blocks&, Blocks& grad)> gradient;
};

struct AscentRun {
  Blocks point;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct SimplexOptResult {
  Blocks argmax;
  double value = 0.0;
  std::size_t iterations = 0;  // summed over all starts
  bool converged = false;      // some start met the tolerance
  std::size_t starts_run = 0;
  // Index of the winning start; == restarts for the point-mass seeded start.
  std::size_t best_start = 0;
};

// Clamps entries to `floor` and renormalizes each block.
void project_to_floor(Blocks& x, double floor);

AscentRun exp_gradient_ascent(const SimplexObjective& obj, Blocks start, const SimplexOptConfig& cfg);

// Best over all starts; ties keep the lowest start index. Throws SolverError
// when no start has a finite objective.
SimplexOptResult maximize_on_simplices(const SimplexObjective& obj, const SimplexOptConfig& cfg);

// Start points used by maximize_on_simplices, in order (without the
// point-mass seeded one).
std::vector<Blocks> restart_points(const std::vector<std::size_t>& block_sizes, const SimplexOptConfig& cfg);

}  // namespace kncond
