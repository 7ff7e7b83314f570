#include "aif/math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aif {

double safe_log(double p) { return std::log(std::max(p, kProbFloor)); }

Categorical::Categorical(Eigen::VectorXd probs) : probs_(std::move(probs)) {
  if (probs_.size() == 0) throw std::invalid_argument("Categorical: empty support");
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    if (!std::isfinite(probs_[i]) || probs_[i] < 0.0)
      throw std::invalid_argument("Categorical: entries must be finite and non-negative");
  }
  if (std::abs(probs_.sum() - 1.0) > kNormTolerance)
    throw std::invalid_argument("Categorical: entries sum to " + std::to_string(probs_.sum()));
}

Categorical::Categorical(std::initializer_list<double> probs)
    : Categorical(Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
          probs.begin(), static_cast<Eigen::Index>(probs.size())))) {}

Categorical Categorical::uniform(std::size_t size) {
  if (size == 0) throw std::invalid_argument("Categorical: empty support");
  return Categorical(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(size),
                                               1.0 / static_cast<double>(size)));
}

Categorical Categorical::one_hot(std::size_t size, std::size_t index) {
  if (index >= size) throw std::invalid_argument("Categorical: one-hot index out of range");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size));
  p[static_cast<Eigen::Index>(index)] = 1.0;
  return Categorical(std::move(p));
}

Categorical Categorical::normalized(const Eigen::Ref<const Eigen::VectorXd>& mass) {
  const double total = mass.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::invalid_argument("Categorical: cannot normalize zero or non-finite mass");
  Eigen::VectorXd p = mass / total;
  // Rounding can leave the sum a few ulps off; that is well inside tolerance.
  return Categorical(std::move(p));
}

std::size_t Categorical::argmax() const {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < probs_.size(); ++i)
    if (probs_[i] > probs_[best]) best = i;
  return static_cast<std::size_t>(best);
}

std::vector<double> Categorical::to_vector() const {
  return {probs_.data(), probs_.data() + probs_.size()};
}

DirichletVector::DirichletVector(Eigen::VectorXd counts) : counts_(std::move(counts)) {
  if (counts_.size() == 0) throw std::invalid_argument("DirichletVector: empty support");
  for (Eigen::Index i = 0; i < counts_.size(); ++i) {
    if (!(counts_[i] > 0.0) || !std::isfinite(counts_[i]))
      throw std::invalid_argument("DirichletVector: counts must be finite and positive");
  }
}

DirichletVector::DirichletVector(std::initializer_list<double> counts)
    : DirichletVector(Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
          counts.begin(), static_cast<Eigen::Index>(counts.size())))) {}

Categorical DirichletVector::mean() const { return dirichlet_mean(*this); }

Categorical softmax(const Eigen::Ref<const Eigen::VectorXd>& logits) {
  if (logits.size() == 0) throw std::invalid_argument("softmax: empty input");
  if (!logits.allFinite()) throw std::invalid_argument("softmax: non-finite logits");
  const double shift = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - shift).exp();
  e /= e.sum();
  return Categorical(std::move(e));
}

double kl_divergence(const Categorical& q, const Categorical& p) {
  if (q.size() != p.size()) throw std::invalid_argument("kl_divergence: support size mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double qi = q[i];
    if (qi > 0.0) kl += qi * (std::log(qi) - safe_log(p[i]));
  }
  return std::max(kl, 0.0);
}

double entropy(const Categorical& p) {
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
  return h;
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("digamma: argument must be positive");
  double shift = 0.0;
  while (x < 6.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Asymptotic expansion with Bernoulli coefficients B2..B14.
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12.0))))));
  return shift + std::log(x) - 0.5 * inv - series;
}

Categorical dirichlet_mean(const DirichletVector& d) { return Categorical(d.counts() / d.total()); }

Eigen::VectorXd dirichlet_expected_log(const DirichletVector& d) {
  const double psi_total = digamma(d.total());
  Eigen::VectorXd out(d.counts().size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = digamma(d.counts()[i]) - psi_total;
  return out;
}

double dirichlet_kl(const DirichletVector& posterior, const DirichletVector& prior) {
  if (posterior.size() != prior.size()) throw std::invalid_argument("dirichlet_kl: support size mismatch");
  const Eigen::VectorXd& a = posterior.counts();
  const Eigen::VectorXd& b = prior.counts();
  const double a0 = a.sum();
  double kl = std::lgamma(a0) - std::lgamma(b.sum());
  const double psi_a0 = digamma(a0);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    kl += std::lgamma(b[i]) - std::lgamma(a[i]) + (a[i] - b[i]) * (digamma(a[i]) - psi_a0);
  return std::max(kl, 0.0);
}

Eigen::VectorXd one_count_information_gain(const Eigen::Ref<const Eigen::VectorXd>& counts) {
  const double total = counts.sum();
  const double base = std::log(total) - digamma(total + 1.0);
  Eigen::VectorXd gain(counts.size());
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    gain[i] = std::max(base - std::log(counts[i]) + digamma(counts[i] + 1.0), 0.0);
  }
  return gain;
}

}  // namespace aif
