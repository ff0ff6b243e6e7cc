#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cavityline/field_spec.hpp"
#include "cavityline/jc_dynamics.hpp"
#include "cavityline/photon_stats.hpp"

namespace cavityline {

/// Line shape Δ ↦ W̄(Δ) for one field and initial atom state.
struct LineShape {
  std::vector<double> deltas;
  std::vector<double> values;
  AtomState atom_init = AtomState::excited;
  FieldSpec field;
  double stark = 0.0;
  double coupling = 1.0;
  TruncationPolicy truncation;
  std::size_t n_max = 0;
};

/// Even-minus-odd cat line-shape differences over an (α, Δ) grid. Rows whose
/// odd cat falls below the normalization floor are left empty.
struct DiscriminationMap {
  std::vector<double> alphas;
  std::vector<double> deltas;
  /// diff[i][j] = W̄(Δ_j; cat(α_i, 0)) − W̄(Δ_j; cat(α_i, π)).
  std::vector<std::optional<std::vector<double>>> diff;
  AtomState atom_init = AtomState::excited;
  double stark = 0.0;
  double coupling = 1.0;
  TruncationPolicy truncation;
  double alpha_floor = 0.0;

  /// max_Δ |diff| of row i; nullopt for a missing row.
  std::optional<double> max_abs_diff(std::size_t i) const;
};

/// Σ P_n [(Δ+(2n+1)χ)/β_n]², in [0, 1].
double avg_inversion_excited(const PhotonDistribution& dist, double stark,
                             double coupling, double detuning);

/// −Σ P_{n+1} [(Δ+(2n+1)χ)/β_n]², in [−1, 0].
double avg_inversion_ground(const PhotonDistribution& dist, double stark,
                            double coupling, double detuning);

double avg_inversion(const PhotonDistribution& dist, AtomState atom,
                     double stark, double coupling, double detuning);

/// Long-time average for a general initial state with real non-negative
/// amplitudes:
///   Σ [(Δ+(2n+1)χ)/β_n]²(C_n² − D_n²) + Σ 4g√(n+1)(Δ+(2n+1)χ)/β_n² · C_n D_n.
/// Throws ComplexAmplitudes for complex or negative amplitudes.
double avg_inversion_general(const JointState& state0, double stark,
                             double coupling, double detuning);

/// Throws InvalidInput unless the grid is nonempty, finite and strictly
/// increasing.
void check_grid(std::span<const double> grid, const char* what);

/// Uniform grid of `count` points on [lo, hi]; count = 1 requires lo == hi.
std::vector<double> linspace(double lo, double hi, std::size_t count);

LineShape sweep(const FieldSpec& field, AtomState atom_init, double stark,
                double coupling, std::span<const double> delta_grid,
                const TruncationPolicy& trunc = {});

DiscriminationMap discrimination_map(std::span<const double> alphas,
                                     AtomState atom_init, double stark,
                                     double coupling,
                                     std::span<const double> delta_grid,
                                     const TruncationPolicy& trunc = {});

} // namespace cavityline
