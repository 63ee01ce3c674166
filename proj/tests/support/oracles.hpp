#pragma once
// Brute-force reference computations used to check the library. Everything
// here is written from the defining formulas and shares no code with the
// library beyond the probability containers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "kncond/prob.hpp"
#include "kncond/rng.hpp"

namespace oracle {

using kncond::Dist;
using kncond::Joint;

inline double shannon(const Dist& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

inline double sum_pow(const Dist& p, double a) {
  double s = 0.0;
  for (double v : p) {
    if (v > 0.0) s += std::pow(v, a);
  }
  return s;
}

inline double renyi(const Dist& p, double a) { return std::log(sum_pow(p, a)) / (1.0 - a); }
inline double hct(const Dist& p, double a) { return (sum_pow(p, a) - 1.0) / (1.0 - a); }
inline double sharma_mittal(const Dist& p, double a, double b) {
  return (std::pow(sum_pow(p, a), (1.0 - b) / (1.0 - a)) - 1.0) / (1.0 - b);
}

inline double shannon_cond(const Joint& j) {
  double h = 0.0;
  for (std::size_t x = 0; x < j.x_size(); ++x) {
    for (std::size_t y = 0; y < j.y_size(); ++y) {
      const double pxy = j.joint(x, y);
      if (pxy > 0.0) h -= pxy * std::log(pxy / j.marginal()[y]);
    }
  }
  return h;
}

inline double arimoto(const Joint& j, double a) {
  double s = 0.0;
  for (std::size_t y = 0; y < j.y_size(); ++y) {
    double inner = 0.0;
    for (std::size_t x = 0; x < j.x_size(); ++x) inner += std::pow(j.joint(x, y), a);
    s += std::pow(inner, 1.0 / a);
  }
  return a / (1.0 - a) * std::log(s);
}

inline double hayashi(const Joint& j, double a) {
  double s = 0.0;
  for (std::size_t y = 0; y < j.y_size(); ++y) {
    const double py = j.marginal()[y];
    if (py <= 0.0) continue;
    double inner = 0.0;
    for (std::size_t x = 0; x < j.x_size(); ++x) inner += std::pow(j.joint(x, y) / py, a);
    s += py * inner;
  }
  return std::log(s) / (1.0 - a);
}

// alpha/(1-alpha) sum_x p(x) log sum_y W(y|x) r(x|y)^{1-1/alpha}; r is |Y| rows over X.
inline double ac_objective(const Joint& j, double a, const std::vector<std::vector<double>>& r) {
  const double s = 1.0 - 1.0 / a;
  double total = 0.0;
  for (std::size_t x = 0; x < j.x_size(); ++x) {
    if (j.prior()[x] <= 0.0) continue;
    double z = 0.0;
    for (std::size_t y = 0; y < j.y_size(); ++y) {
      const double w = j.channel()(x, y);
      if (w > 0.0) z += w * std::pow(r[y][x], s);
    }
    total += j.prior()[x] * std::log(z);
  }
  return a / (1.0 - a) * total;
}

struct Grid2 {
  double value = std::numeric_limits<double>::infinity();
  double t0 = 0.0;
  double t1 = 0.0;
};

// Minimizes f over [0,1]^2: full grid at `step`, then one pass at step/100
// over the cells around the best coarse point.
template <class F>
Grid2 grid_min_2d(F f, double step = 1e-3) {
  Grid2 best;
  const auto n = static_cast<long>(std::lround(1.0 / step));
  for (long i = 0; i <= n; ++i) {
    for (long k = 0; k <= n; ++k) {
      const double t0 = static_cast<double>(i) / static_cast<double>(n);
      const double t1 = static_cast<double>(k) / static_cast<double>(n);
      const double v = f(t0, t1);
      if (v < best.value) best = {v, t0, t1};
    }
  }
  const double fine = step / 100.0;
  const Grid2 c = best;
  for (long i = -100; i <= 100; ++i) {
    for (long k = -100; k <= 100; ++k) {
      const double t0 = c.t0 + static_cast<double>(i) * fine;
      const double t1 = c.t1 + static_cast<double>(k) * fine;
      if (t0 < 0.0 || t0 > 1.0 || t1 < 0.0 || t1 > 1.0) continue;
      const double v = f(t0, t1);
      if (v < best.value) best = {v, t0, t1};
    }
  }
  return best;
}

// Same scheme in one dimension.
template <class F>
double grid_min_1d(F f, double step = 1e-4) {
  double best = std::numeric_limits<double>::infinity();
  double at = 0.0;
  const auto n = static_cast<long>(std::lround(1.0 / step));
  for (long i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    const double v = f(t);
    if (v < best) {
      best = v;
      at = t;
    }
  }
  const double c = at;
  for (long i = -100; i <= 100; ++i) {
    const double t = c + static_cast<double>(i) * step / 100.0;
    if (t < 0.0 || t > 1.0) continue;
    best = std::min(best, f(t));
  }
  return best;
}

// Augustin-Csiszar conditional entropy of a 2x2 joint by grid search over
// r(.|0) = (t0, 1-t0), r(.|1) = (t1, 1-t1). Powers on the coarse grid are
// tabulated since it dominates the cost.
inline Grid2 ac_grid(const Joint& j, double a, double step = 1e-3) {
  const double s = 1.0 - 1.0 / a;
  const auto n = static_cast<std::size_t>(std::lround(1.0 / step));
  std::vector<double> up(n + 1), down(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    up[i] = std::pow(t, s);
    down[i] = std::pow(1.0 - t, s);
  }
  const double c = a / (1.0 - a);
  const double p0 = j.prior()[0], p1 = j.prior()[1];
  const double w00 = j.channel()(0, 0), w01 = j.channel()(0, 1);
  const double w10 = j.channel()(1, 0), w11 = j.channel()(1, 1);
  auto term = [](double p, double wa, double ra, double wb, double rb) {
    if (p <= 0.0) return 0.0;
    double z = 0.0;
    if (wa > 0.0) z += wa * ra;
    if (wb > 0.0) z += wb * rb;
    return p * std::log(z);
  };
  Grid2 best;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t k = 0; k <= n; ++k) {
      const double v = c * (term(p0, w00, up[i], w01, up[k]) + term(p1, w10, down[i], w11, down[k]));
      if (v < best.value) {
        best = {v, static_cast<double>(i) / static_cast<double>(n), static_cast<double>(k) / static_cast<double>(n)};
      }
    }
  }
  const double fine = step / 100.0;
  const Grid2 coarse = best;
  for (long i = -100; i <= 100; ++i) {
    for (long k = -100; k <= 100; ++k) {
      const double t0 = coarse.t0 + static_cast<double>(i) * fine;
      const double t1 = coarse.t1 + static_cast<double>(k) * fine;
      if (t0 < 0.0 || t0 > 1.0 || t1 < 0.0 || t1 > 1.0) continue;
      const double v = c * (term(p0, w00, std::pow(t0, s), w01, std::pow(t1, s)) +
                            term(p1, w10, std::pow(1.0 - t0, s), w11, std::pow(1.0 - t1, s)));
      if (v < best.value) best = {v, t0, t1};
    }
  }
  return best;
}

inline Joint random_joint(kncond::Rng& rng, std::size_t nx, std::size_t ny) {
  return Joint(kncond::random_dist(rng, nx), kncond::random_channel(rng, nx, ny));
}

}  // namespace oracle
