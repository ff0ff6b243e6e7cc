#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavityline/jc_dynamics.hpp"

namespace cavityline::oracle {

/// Interaction-picture Hamiltonian restricted to n = 0..n_max, in the ordered
/// basis {|0,e⟩, |1,g⟩, |1,e⟩, |2,g⟩, ...}: index 2n is |n,e⟩, 2n+1 is |n+1,g⟩.
/// The matrix is assembled term by term from the operator form
/// (Δ/2 + χ n̂)σ_z + g(σ₊a + σ₋a†) and stored dense.
struct TruncatedHamiltonian {
  ModelParams params;
  std::size_t n_max = 0;
  Eigen::MatrixXd entries;

  Eigen::Index dim() const noexcept { return entries.rows(); }
  /// 2×2 diagonal block of sector n.
  Eigen::Matrix2d sector_block(std::size_t n) const;
  /// Largest |H_ij| outside the 2×2 diagonal blocks.
  double max_off_block() const;
  /// max |H − Hᵀ|.
  double max_asymmetry() const;
};

TruncatedHamiltonian build_hamiltonian(const ModelParams& params,
                                       std::size_t n_max);

/// Difference between the two eigenvalues of sector n, from a numerical
/// eigensolve.
double sector_gap(const TruncatedHamiltonian& h, std::size_t n);

enum class Method { eigen, rk_adaptive };

struct RkSettings {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  double initial_step = 1e-3;
  std::size_t max_steps = 50'000'000;
};

/// Solves i dψ/dt = Hψ from state0 over [0, t]. The eigen method diagonalizes
/// each sector block; rk_adaptive integrates the full truncated system with
/// a controlled Dormand-Prince stepper. Throws StepFailure when the
/// integrator exhausts max_steps.
JointState propagate_numeric(const JointState& state0, const ModelParams& params,
                             double t, Method method = Method::eigen,
                             const RkSettings& rk = {});

/// ⟨σ_z⟩ on states propagated by the eigen method, one entry per time.
std::vector<double> inversion_numeric(const JointState& state0,
                                      const ModelParams& params,
                                      std::span<const double> times);

/// Flattens to the ordered basis used by TruncatedHamiltonian.
Eigen::VectorXcd to_vector(const JointState& state);
JointState from_vector(const Eigen::VectorXcd& psi);

} // namespace cavityline::oracle
