#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cavityline/photon_stats.hpp"

namespace cavityline {

using complex = std::complex<double>;

/// Interaction-picture parameters, all angular frequencies (units of g in
/// every bundled default). The bare frequencies only enter through the
/// detuning ω_eg − ω_c.
struct ModelParams {
  double detuning = 0.0;
  double stark = 0.0;
  double coupling = 1.0;

  /// Throws InvalidInput unless coupling > 0 and all values are finite.
  void validate() const;
  /// The effective Stark Hamiltonian is only trusted for |χ| ≤ 1.
  bool within_validity_range() const noexcept { return std::abs(stark) <= 1.0; }
};

enum class AtomState { excited, ground };

std::string_view to_string(AtomState atom);
/// Accepts "excited" / "ground". Throws InvalidInput.
AtomState parse_atom_state(std::string_view text);

/// Generalized Rabi frequency of sector n:
/// β_n = sqrt([Δ + χ(2n+1)]² + 4g²(n+1)).
double rabi_freq(const ModelParams& params, std::size_t n);

/// Δ + χ(2n+1), the effective detuning of sector n.
inline double sector_detuning(const ModelParams& params, std::size_t n) {
  return params.detuning + params.stark * (2.0 * static_cast<double>(n) + 1.0);
}

/// Propagator of the two-dimensional sector {|n,e⟩, |n+1,g⟩}:
///   [C_n(t), D_n(t)]ᵀ = global_phase · [[m11, m12], [m12, conj(m11)]] · [C_n(0), D_n(0)]ᵀ.
struct SectorPropagator {
  std::size_t n = 0;
  double beta_n = 0.0;
  complex m11{1.0, 0.0};
  complex m12{0.0, 0.0};
  complex global_phase{1.0, 0.0};

  complex m21() const noexcept { return m12; }
  complex m22() const noexcept { return std::conj(m11); }
};

SectorPropagator sector_propagator(const ModelParams& params, std::size_t n,
                                   double t);

/// Amplitudes of |n,e⟩ (c) and |n+1,g⟩ (d).
struct SectorAmplitudes {
  complex c;
  complex d;
};

/// Joint atom-field state expanded over the sectors n = 0..size()-1.
struct JointState {
  std::vector<SectorAmplitudes> sectors;

  /// Σ |C_n|² + |D_n|².
  double norm_squared() const noexcept;
  std::size_t size() const noexcept { return sectors.size(); }
};

/// How a ground-atom state built from a field distribution is weighted. The
/// vacuum component has no place in the |n+1,g⟩ ladder, so raw weights sum to
/// 1 − P_0.
enum class GroundWeighting {
  renormalize,  ///< D_n = sqrt(P_{n+1}/(1 − P_0)); unit norm.
  raw,          ///< D_n = sqrt(P_{n+1}); matches the closed-form ground inversion.
};

/// Builds C_n = sqrt(P_n)e^{iθ_n} (excited) or D_n = sqrt(P_{n+1})e^{iθ_n}
/// (ground). Missing phases default to zero. Throws InvalidInput when a
/// renormalized ground state would have zero weight (field in vacuum).
JointState state_from(const PhotonDistribution& dist, AtomState atom,
                      std::span<const double> phases = {},
                      GroundWeighting weighting = GroundWeighting::renormalize);

/// Applies every sector propagator, global phase included.
JointState evolve(const JointState& initial, const ModelParams& params,
                  double t);

/// ⟨σ_z⟩ = Σ |C_n|² − |D_n|².
double inversion(const JointState& state);

/// Closed-form W(t) for an excited atom: Σ (P_n/β_n²){[Δ+(2n+1)χ]² + 4g²(n+1)cos(β_n t)}.
double inversion_excited(const PhotonDistribution& dist,
                         const ModelParams& params, double t);

/// Closed-form W(t) for a ground atom with raw weights P_{n+1}:
/// −Σ (P_{n+1}/β_n²){[Δ+(2n+1)χ]² + 4g²(n+1)cos(β_n t)}.
double inversion_ground(const PhotonDistribution& dist,
                        const ModelParams& params, double t);

/// Dispatches on the atom state.
double inversion_closed_form(const PhotonDistribution& dist, AtomState atom,
                             const ModelParams& params, double t);

} // namespace cavityline
