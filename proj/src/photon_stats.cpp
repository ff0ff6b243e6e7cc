#include "cavityline/photon_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "cavityline/errors.hpp"

namespace cavityline {

DegenerateCat::DegenerateCat(double alpha_abs, double phi, double norm_squared)
    : Error("degenerate cat state: |alpha|=" + std::to_string(alpha_abs) +
            ", phi=" + std::to_string(phi) +
            " gives N^2=" + std::to_string(norm_squared) +
            " below the normalization floor"),
      alpha_abs_(alpha_abs), phi_(phi), norm_squared_(norm_squared) {}

PhotonDistribution::PhotonDistribution(std::vector<double> probs,
                                       double tail_bound, double mean_n)
    : probs_(std::move(probs)), tail_bound_(tail_bound), mean_n_(mean_n) {
  if (probs_.empty())
    throw InvalidInput("photon distribution needs at least one entry");
  if (!(tail_bound_ >= 0.0) || !(mean_n_ >= 0.0))
    throw InvalidInput("photon distribution: tail bound and mean must be >= 0");
  for (double p : probs_)
    if (!(p >= 0.0 && p <= 1.0))
      throw InvalidInput("photon distribution: probability outside [0, 1]");
  const double sum = total();
  if (sum > 1.0 + 1e-12 || sum + tail_bound_ < 1.0 - 1e-12)
    throw InvalidInput("photon distribution: probabilities sum to " +
                       std::to_string(sum) + " with tail bound " +
                       std::to_string(tail_bound_));
}

double PhotonDistribution::total() const noexcept {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

namespace {

/// e^{−x} xⁿ/n! for n = 0..n_max by the ratio recurrence.
std::vector<double> poisson_terms(double x, std::size_t n_max) {
  std::vector<double> p(n_max + 1, 0.0);
  p[0] = std::exp(-x);
  for (std::size_t n = 0; n < n_max; ++n)
    p[n + 1] = p[n] * x / static_cast<double>(n + 1);
  return p;
}

/// Upper bound on Σ_{n>n_max} e^{−x}xⁿ/n! given p_last = P_{n_max}: the ratio
/// of successive terms past n_max+1 is at most x/(n_max+2).
double poisson_tail_bound(double x, std::size_t n_max, double p_last) {
  if (x == 0.0) return 0.0;
  const double next = p_last * x / static_cast<double>(n_max + 1);
  const double ratio = x / static_cast<double>(n_max + 2);
  if (ratio >= 1.0) return 1.0;
  return next / (1.0 - ratio);
}

/// Chooses the cutoff and returns the Poisson terms up to it. `scale`
/// multiplies the Poisson tail to bound the caller's actual tail.
std::vector<double> truncated_poisson(double x, double scale,
                                      const TruncationPolicy& trunc,
                                      double& tail_bound) {
  if (!(trunc.eps_tail > 0.0))
    throw InvalidInput("truncation policy needs eps_tail > 0");
  if (!(x <= kMaxMeanPhotons))
    throw InvalidInput("mean photon number " + std::to_string(x) +
                       " exceeds the supported maximum of 700");
  const double start = std::ceil(x + trunc.sigma_multiple * std::sqrt(x + 1.0));
  auto n_max = std::max(trunc.min_n_max, static_cast<std::size_t>(start));
  auto terms = poisson_terms(x, n_max);
  tail_bound = scale * poisson_tail_bound(x, n_max, terms.back());
  while (tail_bound > trunc.eps_tail) {
    if (n_max >= trunc.max_n_max)
      throw InvalidInput("photon-number cutoff exceeded max_n_max before the "
                         "tail bound reached eps_tail");
    terms.push_back(terms.back() * x / static_cast<double>(n_max + 1));
    ++n_max;
    tail_bound = scale * poisson_tail_bound(x, n_max, terms.back());
  }
  return terms;
}

} // namespace

PhotonDistribution coherent_distribution(std::complex<double> alpha,
                                         const TruncationPolicy& trunc) {
  const double x = std::norm(alpha);
  double tail = 0.0;
  auto probs = truncated_poisson(x, 1.0, trunc, tail);
  return PhotonDistribution(std::move(probs), tail, x);
}

double cat_norm_squared(std::complex<double> alpha, double phi) {
  const double x = std::norm(alpha);
  const double c = std::cos(phi);
  // 1 − e^{−2x} loses every digit to cancellation for small x.
  if (c == -1.0) return -2.0 * std::expm1(-2.0 * x);
  return 2.0 * (1.0 + std::exp(-2.0 * x) * c);
}

double cat_norm(std::complex<double> alpha, double phi) {
  return std::sqrt(std::max(0.0, cat_norm_squared(alpha, phi)));
}

double odd_cat_alpha_floor(double eps_norm) {
  return std::sqrt(-0.5 * std::log1p(-0.5 * eps_norm));
}

PhotonDistribution cat_distribution(std::complex<double> alpha, double phi,
                                    const TruncationPolicy& trunc) {
  const double n2 = cat_norm_squared(alpha, phi);
  if (!(n2 >= trunc.eps_norm))
    throw DegenerateCat(std::abs(alpha), phi, n2);
  const double x = std::norm(alpha);
  const double c = std::cos(phi);
  const double scale = 2.0 / n2;
  double tail = 0.0;
  auto probs = truncated_poisson(x, scale * (1.0 + std::abs(c)), trunc, tail);
  for (std::size_t n = 0; n < probs.size(); ++n) {
    const double parity = (n % 2 == 0) ? 1.0 + c : 1.0 - c;
    probs[n] = parity == 0.0 ? 0.0 : scale * probs[n] * parity;
  }
  // ⟨n⟩ = |α|²(1 − e^{−2|α|²}cos φ)/(1 + e^{−2|α|²}cos φ)
  const double mean = x * cat_norm_squared(alpha, phi + std::numbers::pi) / n2;
  return PhotonDistribution(std::move(probs), tail, mean);
}

PhotonDistribution fock_distribution(unsigned n0, const TruncationPolicy& trunc) {
  std::vector<double> probs(std::max<std::size_t>(trunc.min_n_max, n0) + 1, 0.0);
  probs[n0] = 1.0;
  return PhotonDistribution(std::move(probs), 0.0, static_cast<double>(n0));
}

PhotonDistribution make_distribution(const FieldSpec& field,
                                     const TruncationPolicy& trunc) {
  struct Visitor {
    const TruncationPolicy& trunc;
    PhotonDistribution operator()(const FockField& f) const {
      return fock_distribution(f.n0, trunc);
    }
    PhotonDistribution operator()(const CoherentField& f) const {
      return coherent_distribution(f.alpha, trunc);
    }
    PhotonDistribution operator()(const CatField& f) const {
      return cat_distribution(f.alpha, f.phi, trunc);
    }
  };
  return std::visit(Visitor{trunc}, field.kind);
}

} // namespace cavityline
