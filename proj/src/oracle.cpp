#include "cavityline/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "cavityline/errors.hpp"

namespace cavityline::oracle {
namespace {

enum class Level { e, g };

struct Ket {
  std::size_t photons;
  Level atom;
};

Ket basis_ket(Eigen::Index index) {
  const auto n = static_cast<std::size_t>(index / 2);
  return index % 2 == 0 ? Ket{n, Level::e} : Ket{n + 1, Level::g};
}

/// Position of a ket in the truncated basis, or -1 if it lies outside.
Eigen::Index basis_index(const Ket& ket, std::size_t n_max) {
  if (ket.atom == Level::e)
    return ket.photons <= n_max ? static_cast<Eigen::Index>(2 * ket.photons) : -1;
  if (ket.photons == 0 || ket.photons - 1 > n_max) return -1;
  return static_cast<Eigen::Index>(2 * (ket.photons - 1) + 1);
}

} // namespace

TruncatedHamiltonian build_hamiltonian(const ModelParams& params,
                                       std::size_t n_max) {
  params.validate();
  TruncatedHamiltonian h;
  h.params = params;
  h.n_max = n_max;
  const auto dim = static_cast<Eigen::Index>(2 * (n_max + 1));
  h.entries = Eigen::MatrixXd::Zero(dim, dim);

  for (Eigen::Index col = 0; col < dim; ++col) {
    const Ket ket = basis_ket(col);
    const double m = static_cast<double>(ket.photons);
    // (Δ/2 + χ n̂) σ_z
    const double sz = ket.atom == Level::e ? 1.0 : -1.0;
    h.entries(col, col) += (0.5 * params.detuning + params.stark * m) * sz;
    // g σ₊ a : |m, g⟩ → √m |m−1, e⟩
    if (ket.atom == Level::g && ket.photons > 0) {
      const auto row = basis_index({ket.photons - 1, Level::e}, n_max);
      if (row >= 0) h.entries(row, col) += params.coupling * std::sqrt(m);
    }
    // g σ₋ a† : |m, e⟩ → √(m+1) |m+1, g⟩
    if (ket.atom == Level::e) {
      const auto row = basis_index({ket.photons + 1, Level::g}, n_max);
      if (row >= 0) h.entries(row, col) += params.coupling * std::sqrt(m + 1.0);
    }
  }
  return h;
}

Eigen::Matrix2d TruncatedHamiltonian::sector_block(std::size_t n) const {
  const auto i = static_cast<Eigen::Index>(2 * n);
  return entries.block<2, 2>(i, i);
}

double TruncatedHamiltonian::max_off_block() const {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < dim(); ++r)
    for (Eigen::Index c = 0; c < dim(); ++c)
      if (r / 2 != c / 2) worst = std::max(worst, std::abs(entries(r, c)));
  return worst;
}

double TruncatedHamiltonian::max_asymmetry() const {
  return (entries - entries.transpose()).cwiseAbs().maxCoeff();
}

double sector_gap(const TruncatedHamiltonian& h, std::size_t n) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(h.sector_block(n));
  const auto& ev = solver.eigenvalues();
  return ev(1) - ev(0);
}

Eigen::VectorXcd to_vector(const JointState& state) {
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(2 * state.sectors.size()));
  for (std::size_t n = 0; n < state.sectors.size(); ++n) {
    psi(static_cast<Eigen::Index>(2 * n)) = state.sectors[n].c;
    psi(static_cast<Eigen::Index>(2 * n + 1)) = state.sectors[n].d;
  }
  return psi;
}

JointState from_vector(const Eigen::VectorXcd& psi) {
  JointState state;
  state.sectors.resize(static_cast<std::size_t>(psi.size() / 2));
  for (std::size_t n = 0; n < state.sectors.size(); ++n)
    state.sectors[n] = {psi(static_cast<Eigen::Index>(2 * n)),
                        psi(static_cast<Eigen::Index>(2 * n + 1))};
  return state;
}

namespace {

/// Per-sector eigendecomposition H_n = V diag(λ) Vᵀ.
struct SectorSpectrum {
  Eigen::Matrix2d vectors;
  Eigen::Vector2d values;
};

std::vector<SectorSpectrum> diagonalize(const TruncatedHamiltonian& h) {
  std::vector<SectorSpectrum> spectra(h.n_max + 1);
  for (std::size_t n = 0; n <= h.n_max; ++n) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(h.sector_block(n));
    spectra[n] = {solver.eigenvectors(), solver.eigenvalues()};
  }
  return spectra;
}

JointState propagate_eigen(const JointState& state0,
                           const std::vector<SectorSpectrum>& spectra, double t) {
  JointState out;
  out.sectors.resize(state0.sectors.size());
  for (std::size_t n = 0; n < state0.sectors.size(); ++n) {
    const auto& sp = spectra[n];
    const Eigen::Vector2cd v0(state0.sectors[n].c, state0.sectors[n].d);
    Eigen::Vector2cd coeff = sp.vectors.transpose().cast<complex>() * v0;
    for (int k = 0; k < 2; ++k) coeff(k) *= std::polar(1.0, -sp.values(k) * t);
    const Eigen::Vector2cd v = sp.vectors.cast<complex>() * coeff;
    out.sectors[n] = {v(0), v(1)};
  }
  return out;
}

using RkState = std::vector<complex>;

JointState propagate_rk(const JointState& state0, const TruncatedHamiltonian& h,
                        double t, const RkSettings& rk) {
  namespace odeint = boost::numeric::odeint;
  const Eigen::MatrixXcd hc = h.entries.cast<complex>();
  const auto dim = h.dim();
  const auto rhs = [&](const RkState& x, RkState& dxdt, double /*t*/) {
    Eigen::Map<const Eigen::VectorXcd> xv(x.data(), dim);
    Eigen::Map<Eigen::VectorXcd> dv(dxdt.data(), dim);
    dv.noalias() = complex(0.0, -1.0) * (hc * xv);
  };

  const Eigen::VectorXcd psi0 = to_vector(state0);
  RkState x(psi0.data(), psi0.data() + psi0.size());
  if (t == 0.0) return state0;

  auto stepper = odeint::make_controlled(
      rk.abs_tol, rk.rel_tol, odeint::runge_kutta_dopri5<RkState>());
  const double direction = t > 0 ? 1.0 : -1.0;
  double now = 0.0;
  double dt = direction * std::min(rk.initial_step, std::abs(t));
  std::size_t attempts = 0;
  while (direction * (t - now) > 0.0) {
    if (direction * (now + dt - t) > 0.0) dt = t - now;
    if (++attempts > rk.max_steps)
      throw StepFailure("adaptive integrator exceeded " +
                        std::to_string(rk.max_steps) + " step attempts at t=" +
                        std::to_string(now));
    stepper.try_step(rhs, x, now, dt);
    if (std::abs(dt) < 1e-300)
      throw StepFailure("adaptive integrator step size underflow");
  }
  return from_vector(Eigen::Map<const Eigen::VectorXcd>(x.data(), dim));
}

} // namespace

JointState propagate_numeric(const JointState& state0, const ModelParams& params,
                             double t, Method method, const RkSettings& rk) {
  if (state0.sectors.empty()) return state0;
  const auto h = build_hamiltonian(params, state0.sectors.size() - 1);
  if (method == Method::eigen) return propagate_eigen(state0, diagonalize(h), t);
  return propagate_rk(state0, h, t, rk);
}

std::vector<double> inversion_numeric(const JointState& state0,
                                      const ModelParams& params,
                                      std::span<const double> times) {
  std::vector<double> out;
  out.reserve(times.size());
  if (times.empty()) return out;
  if (state0.sectors.empty()) {
    out.assign(times.size(), 0.0);
    return out;
  }
  const auto h = build_hamiltonian(params, state0.sectors.size() - 1);
  const auto spectra = diagonalize(h);
  for (double t : times) {
    const auto psi = propagate_eigen(state0, spectra, t);
    double w = 0.0;
    for (const auto& s : psi.sectors) w += std::norm(s.c) - std::norm(s.d);
    out.push_back(w);
  }
  return out;
}

} // namespace cavityline::oracle
