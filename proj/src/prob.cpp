#include "kncond/prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kncond/error.hpp"
#include "kncond/rng.hpp"

namespace kncond {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw InputError("matrix data size " + std::to_string(data_.size()) +
                     " does not match " + std::to_string(rows_) + "x" +
                     std::to_string(cols_));
  }
}

Dist::Dist(std::vector<double> probs) : p_(std::move(probs)) {
  if (p_.empty()) throw InputError("distribution must have at least one entry");
  double total = 0.0;
  for (double v : p_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InputError("distribution entry " + std::to_string(v) + " is not a probability");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kSimplexTol) {
    throw InputError("distribution sums to " + std::to_string(total) + ", expected 1");
  }
  for (double& v : p_) v /= total;
}

Dist Dist::uniform(std::size_t n) {
  if (n == 0) throw InputError("uniform distribution needs n >= 1");
  return Dist(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Dist Dist::point_mass(std::size_t n, std::size_t at) {
  if (at >= n) throw InputError("point mass index out of range");
  std::vector<double> v(n, 0.0);
  v[at] = 1.0;
  return Dist(std::move(v));
}

Dist Dist::mix(const Dist& a, const Dist& b, double lambda) {
  if (a.size() != b.size()) throw InputError("mixing distributions of different sizes");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("mixing weight outside [0,1]");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = lambda * a[i] + (1.0 - lambda) * b[i];
  return Dist(std::move(v));
}

Channel::Channel(std::vector<Dist> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw InputError("channel must have at least one row");
  for (const auto& r : rows_) {
    if (r.size() != rows_.front().size()) throw InputError("channel rows have unequal length");
  }
}

namespace {
std::vector<Dist> rows_of(const Matrix& m) {
  std::vector<Dist> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.emplace_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}
}  // namespace

Channel::Channel(const Matrix& m) : Channel(rows_of(m)) {}

Channel Channel::identity(std::size_t n) {
  std::vector<Dist> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back(Dist::point_mass(n, i));
  return Channel(std::move(rows));
}

Channel Channel::constant(std::size_t inputs, const Dist& q) {
  return Channel(std::vector<Dist>(inputs, q));
}

Channel compose(const Channel& a, const Channel& b) {
  if (a.outputs() != b.inputs()) {
    throw InputError("cannot compose channels: " + std::to_string(a.outputs()) +
                     " outputs feed " + std::to_string(b.inputs()) + " inputs");
  }
  std::vector<Dist> rows;
  rows.reserve(a.inputs());
  for (std::size_t x = 0; x < a.inputs(); ++x) {
    std::vector<double> r(b.outputs(), 0.0);
    for (std::size_t y = 0; y < a.outputs(); ++y) {
      const double w = a(x, y);
      if (w == 0.0) continue;
      for (std::size_t z = 0; z < b.outputs(); ++z) r[z] += w * b(y, z);
    }
    rows.emplace_back(std::move(r));
  }
  return Channel(std::move(rows));
}

namespace {
Dist marginal_of(const Dist& prior, const Channel& ch) {
  if (prior.size() != ch.inputs()) {
    throw InputError("prior has " + std::to_string(prior.size()) + " symbols but channel has " +
                     std::to_string(ch.inputs()) + " rows");
  }
  std::vector<double> py(ch.outputs(), 0.0);
  for (std::size_t x = 0; x < prior.size(); ++x) {
    for (std::size_t y = 0; y < py.size(); ++y) py[y] += prior[x] * ch(x, y);
  }
  return Dist(std::move(py));
}
}  // namespace

Joint::Joint(Dist prior, Channel channel)
    : prior_(std::move(prior)),
      channel_(std::move(channel)),
      marginal_(marginal_of(prior_, channel_)),
      slot_(channel_.outputs()) {
  for (std::size_t y = 0; y < y_size(); ++y) {
    const double py = marginal_[y];
    if (!(py > 0.0)) continue;
    std::vector<double> post(x_size());
    for (std::size_t x = 0; x < x_size(); ++x) post[x] = joint(x, y) / py;
    // Rounding can leave the posterior a few ulps off the simplex.
    const double s = std::accumulate(post.begin(), post.end(), 0.0);
    for (double& v : post) v /= s;
    slot_[y] = posteriors_.size();
    support_.push_back(y);
    posteriors_.emplace_back(std::move(post));
  }
}

bool Joint::supported(std::size_t y) const { return y < slot_.size() && slot_[y].has_value(); }

const Dist& Joint::posterior(std::size_t y) const {
  if (!supported(y)) throw InputError("posterior requested for unsupported output " + std::to_string(y));
  return posteriors_[*slot_[y]];
}

Joint make_joint(Dist prior, Channel channel) { return Joint(std::move(prior), std::move(channel)); }

std::pair<Joint, Joint> compose_markov(const MarkovTriple& t) {
  if (t.prior.size() != t.ch_xy.inputs()) throw InputError("prior and X->Y channel disagree in size");
  Joint xy(t.prior, t.ch_xy);
  Joint xz(t.prior, compose(t.ch_xy, t.ch_yz));
  return {std::move(xy), std::move(xz)};
}

Dist random_dist(Rng& rng, std::size_t n, const SparseMode& sparse) {
  if (n == 0) throw InputError("random distribution needs n >= 1");
  auto v = rng.dirichlet(n);
  if (sparse.enabled && n > 1) {
    std::size_t zeros = sparse.zeros ? std::min(*sparse.zeros, n - 1) : rng.index(n);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    // Partial Fisher-Yates: the first `zeros` indices get zeroed.
    for (std::size_t i = 0; i < zeros; ++i) {
      std::swap(idx[i], idx[i + rng.index(n - i)]);
      v[idx[i]] = 0.0;
    }
    double total = std::accumulate(v.begin(), v.end(), 0.0);
    if (total <= 0.0) {
      v.assign(n, 0.0);
      v[idx[n - 1]] = 1.0;
      total = 1.0;
    }
    for (double& e : v) e /= total;
  }
  return Dist(std::move(v));
}

Channel random_channel(Rng& rng, std::size_t inputs, std::size_t outputs, const SparseMode& sparse) {
  if (inputs == 0 || outputs == 0) throw InputError("random channel needs positive dimensions");
  std::vector<Dist> rows;
  rows.reserve(inputs);
  for (std::size_t x = 0; x < inputs; ++x) rows.push_back(random_dist(rng, outputs, sparse));
  return Channel(std::move(rows));
}

Instance random_instance(std::uint64_t seed, InstanceDims dims, InstanceKind kind, SparseMode sparse) {
  if (dims.x == 0 || dims.y == 0 || dims.z == 0) throw InputError("instance dimensions must be positive");
  Rng rng(seed);
  switch (kind) {
    case InstanceKind::dist:
      return random_dist(rng, dims.x, sparse);
    case InstanceKind::channel:
      return random_channel(rng, dims.x, dims.y, sparse);
    case InstanceKind::joint: {
      Dist prior = random_dist(rng, dims.x, sparse);
      return Joint(std::move(prior), random_channel(rng, dims.x, dims.y, sparse));
    }
    case InstanceKind::markov: {
      Dist prior = random_dist(rng, dims.x, sparse);
      Channel xy = random_channel(rng, dims.x, dims.y, sparse);
      Channel yz = random_channel(rng, dims.y, dims.z, sparse);
      return MarkovTriple{std::move(prior), std::move(xy), std::move(yz)};
    }
  }
  throw InputError("unknown instance kind");
}

}  // namespace kncond
