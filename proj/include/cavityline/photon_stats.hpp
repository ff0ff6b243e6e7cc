#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cavityline/field_spec.hpp"

namespace cavityline {

/// Controls where the infinite photon-number sums are cut.
///
/// The cutoff starts at max(min_n_max, ⌈n̄ + sigma_multiple·√(n̄+1)⌉) and grows
/// until a rigorous upper bound on the discarded probability is ≤ eps_tail.
struct TruncationPolicy {
  double eps_tail = 1e-12;
  std::size_t min_n_max = 32;
  double sigma_multiple = 12.0;
  /// Cat states with N² below this are rejected as degenerate.
  double eps_norm = 1e-9;
  /// Largest cutoff the growth loop may reach.
  std::size_t max_n_max = 1u << 20;
};

/// Largest mean photon number the recurrence handles before e^{−n̄} underflows.
inline constexpr double kMaxMeanPhotons = 700.0;

/// Truncated photon-number distribution P_0..P_{n_max}.
class PhotonDistribution {
public:
  /// Validates: every entry in [0,1], Σ + tail ≥ 1 − 1e-12, Σ ≤ 1 + 1e-12.
  /// Throws InvalidInput otherwise.
  PhotonDistribution(std::vector<double> probs, double tail_bound,
                     double mean_n);

  std::span<const double> probs() const noexcept { return probs_; }
  /// P_n, zero past the cutoff.
  double operator[](std::size_t n) const noexcept {
    return n < probs_.size() ? probs_[n] : 0.0;
  }
  std::size_t n_max() const noexcept { return probs_.size() - 1; }
  double tail_bound() const noexcept { return tail_bound_; }
  double mean_n() const noexcept { return mean_n_; }
  double total() const noexcept;

private:
  std::vector<double> probs_;
  double tail_bound_;
  double mean_n_;
};

/// Poisson distribution e^{−n̄} n̄ⁿ/n! with n̄ = |α|².
PhotonDistribution coherent_distribution(std::complex<double> alpha,
                                         const TruncationPolicy& trunc = {});

/// (2/N²)·e^{−|α|²}|α|^{2n}/n!·[1 + (−1)ⁿ cos φ]. Throws DegenerateCat when
/// N² < trunc.eps_norm.
PhotonDistribution cat_distribution(std::complex<double> alpha, double phi,
                                    const TruncationPolicy& trunc = {});

/// Number state |n0⟩. The cutoff is max(min_n_max, n0).
PhotonDistribution fock_distribution(unsigned n0,
                                     const TruncationPolicy& trunc = {});

/// Normalization N = sqrt(2[1 + e^{−2|α|²} cos φ]) of the cat superposition.
double cat_norm(std::complex<double> alpha, double phi);

/// N², computed without cancellation for the odd cat (cos φ = −1).
double cat_norm_squared(std::complex<double> alpha, double phi);

/// Smallest |α| whose odd cat (φ = π) still clears eps_norm.
double odd_cat_alpha_floor(double eps_norm);

PhotonDistribution make_distribution(const FieldSpec& field,
                                     const TruncationPolicy& trunc = {});

} // namespace cavityline
