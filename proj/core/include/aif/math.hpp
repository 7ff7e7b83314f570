#pragma once

// Probability kernels shared by every other module: categorical helpers,
// softmax, divergences and Dirichlet expectations. Everything here is a pure
// function of its arguments.

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace aif {

/// Lower bound applied to probabilities before taking a logarithm.
inline constexpr double kProbFloor = 1e-16;

/// Tolerance used when checking that a probability vector sums to one.
inline constexpr double kNormTolerance = 1e-9;

/// Floored natural logarithm, ln(max(p, kProbFloor)).
double safe_log(double p);

/// Normalized probability vector over a finite support.
///
/// Construction validates the invariants (non-negative entries summing to
/// one within kNormTolerance); use `normalized` to build one from arbitrary
/// non-negative mass.
class Categorical {
 public:
  Categorical() = default;
  explicit Categorical(Eigen::VectorXd probs);
  Categorical(std::initializer_list<double> probs);

  static Categorical uniform(std::size_t size);
  static Categorical one_hot(std::size_t size, std::size_t index);
  /// Rescales non-negative mass to sum to one. Throws on zero total mass.
  static Categorical normalized(const Eigen::Ref<const Eigen::VectorXd>& mass);

  const Eigen::VectorXd& probs() const { return probs_; }
  std::size_t size() const { return static_cast<std::size_t>(probs_.size()); }
  double operator[](std::size_t i) const { return probs_[static_cast<Eigen::Index>(i)]; }

  /// Index of the largest entry, lowest index on ties.
  std::size_t argmax() const;
  std::vector<double> to_vector() const;

 private:
  Eigen::VectorXd probs_;
};

/// Strictly positive concentration parameters of a Dirichlet distribution.
class DirichletVector {
 public:
  DirichletVector() = default;
  explicit DirichletVector(Eigen::VectorXd counts);
  DirichletVector(std::initializer_list<double> counts);

  const Eigen::VectorXd& counts() const { return counts_; }
  std::size_t size() const { return static_cast<std::size_t>(counts_.size()); }
  double total() const { return counts_.sum(); }
  Categorical mean() const;

 private:
  Eigen::VectorXd counts_;
};

/// Softmax of finite logits; stable under a common shift of the inputs.
Categorical softmax(const Eigen::Ref<const Eigen::VectorXd>& logits);

/// D_KL[q || p] with the 0 ln 0 = 0 convention; p is floored at kProbFloor.
double kl_divergence(const Categorical& q, const Categorical& p);

/// Shannon entropy in nats with 0 ln 0 = 0.
double entropy(const Categorical& p);

double digamma(double x);

Categorical dirichlet_mean(const DirichletVector& d);

/// E[ln theta_i] under Dir(counts): digamma(count_i) - digamma(sum).
Eigen::VectorXd dirichlet_expected_log(const DirichletVector& d);

/// D_KL[Dir(posterior) || Dir(prior)].
double dirichlet_kl(const DirichletVector& posterior, const DirichletVector& prior);

/// KL gained by adding one pseudo-count at each row of a count column:
/// entry i is D_KL[Dir(alpha + e_i) || Dir(alpha)], in closed form.
Eigen::VectorXd one_count_information_gain(const Eigen::Ref<const Eigen::VectorXd>& counts);

}  // namespace aif
