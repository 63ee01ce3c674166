#pragma once

// Finite-alphabet probability objects: distributions, channels, joints and
// Markov chains, plus seeded random instance generation.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace kncond {

inline constexpr double kSimplexTol = 1e-12;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// A probability vector. Construction validates (entries >= 0, sum within
// kSimplexTol of 1) and renormalizes exactly.
class Dist {
 public:
  explicit Dist(std::vector<double> probs);

  static Dist uniform(std::size_t n);
  static Dist point_mass(std::size_t n, std::size_t at);
  // Mixture lambda*a + (1-lambda)*b.
  static Dist mix(const Dist& a, const Dist& b, double lambda);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> probs() const { return p_; }
  auto begin() const { return p_.begin(); }
  auto end() const { return p_.end(); }

  friend bool operator==(const Dist&, const Dist&) = default;

 private:
  std::vector<double> p_;
};

// Row-stochastic matrix p_{Y|X}; row x is a Dist over the output alphabet.
class Channel {
 public:
  explicit Channel(std::vector<Dist> rows);
  explicit Channel(const Matrix& m);

  static Channel identity(std::size_t n);
  // Every row equal to q: output independent of input.
  static Channel constant(std::size_t inputs, const Dist& q);

  std::size_t inputs() const { return rows_.size(); }
  std::size_t outputs() const { return rows_.empty() ? 0 : rows_.front().size(); }
  const Dist& row(std::size_t x) const { return rows_[x]; }
  double operator()(std::size_t x, std::size_t y) const { return rows_[x][y]; }

  friend bool operator==(const Channel&, const Channel&) = default;

 private:
  std::vector<Dist> rows_;
};

// Channel composition: (a then b)(z|x) = sum_y a(y|x) b(z|y).
Channel compose(const Channel& a, const Channel& b);

// p_{X,Y} = p_X p_{Y|X} with cached marginal and posteriors. Outputs y with
// p_Y(y) = 0 are excluded from the posterior family.
class Joint {
 public:
  Joint(Dist prior, Channel channel);

  const Dist& prior() const { return prior_; }
  const Channel& channel() const { return channel_; }
  const Dist& marginal() const { return marginal_; }
  std::size_t x_size() const { return prior_.size(); }
  std::size_t y_size() const { return channel_.outputs(); }
  double joint(std::size_t x, std::size_t y) const { return prior_[x] * channel_(x, y); }

  // Indices y with p_Y(y) > 0, ascending.
  const std::vector<std::size_t>& support() const { return support_; }
  bool supported(std::size_t y) const;
  // Posterior p_{X|Y}(.|y); throws InputError for an unsupported y.
  const Dist& posterior(std::size_t y) const;
  // Posteriors aligned with support().
  const std::vector<Dist>& posteriors() const { return posteriors_; }

 private:
  Dist prior_;
  Channel channel_;
  Dist marginal_;
  std::vector<std::size_t> support_;
  std::vector<Dist> posteriors_;
  std::vector<std::optional<std::size_t>> slot_;
};

Joint make_joint(Dist prior, Channel channel);

// X - Y - Z with Z depending on X only through Y.
struct MarkovTriple {
  Dist prior;
  Channel ch_xy;
  Channel ch_yz;
};

// Returns (joint over (X,Y), joint over (X,Z)); both share the prior.
std::pair<Joint, Joint> compose_markov(const MarkovTriple& t);

enum class InstanceKind { dist, channel, joint, markov };

struct InstanceDims {
  std::size_t x = 2;
  std::size_t y = 2;
  std::size_t z = 2;
};

struct SparseMode {
  bool enabled = false;
  // Number of entries zeroed per simplex; drawn uniformly from [0, n-1] when unset.
  std::optional<std::size_t> zeros;
};

using Instance = std::variant<Dist, Channel, Joint, MarkovTriple>;

// Deterministic given (seed, dims, kind, sparse). Each simplex is a flat
// Dirichlet sample; sparse mode zeroes a random subset then renormalizes.
Instance random_instance(std::uint64_t seed, InstanceDims dims, InstanceKind kind,
                         SparseMode sparse = {});

class Rng;
Dist random_dist(Rng& rng, std::size_t n, const SparseMode& sparse = {});
Channel random_channel(Rng& rng, std::size_t inputs, std::size_t outputs,
                       const SparseMode& sparse = {});

}  // namespace kncond
