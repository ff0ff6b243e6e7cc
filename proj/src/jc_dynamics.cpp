#include "cavityline/jc_dynamics.hpp"

#include <cassert>
#include <string>

#include "cavityline/errors.hpp"

namespace cavityline {

void ModelParams::validate() const {
  if (!std::isfinite(detuning) || !std::isfinite(stark) ||
      !std::isfinite(coupling))
    throw InvalidInput("model parameters must be finite");
  if (!(coupling > 0.0))
    throw InvalidInput("coupling g must be positive");
}

std::string_view to_string(AtomState atom) {
  return atom == AtomState::excited ? "excited" : "ground";
}

AtomState parse_atom_state(std::string_view text) {
  if (text == "excited") return AtomState::excited;
  if (text == "ground") return AtomState::ground;
  throw InvalidInput("atom state must be 'excited' or 'ground', got '" +
                     std::string(text) + "'");
}

double rabi_freq(const ModelParams& params, std::size_t n) {
  const double eff = sector_detuning(params, n);
  const double g = params.coupling;
  return std::sqrt(eff * eff + 4.0 * g * g * static_cast<double>(n + 1));
}

SectorPropagator sector_propagator(const ModelParams& params, std::size_t n,
                                   double t) {
  SectorPropagator prop;
  prop.n = n;
  prop.beta_n = rabi_freq(params, n);
  assert(prop.beta_n > 0.0);
  const double half = 0.5 * prop.beta_n * t;
  const double c = std::cos(half);
  const double s = std::sin(half);
  const double eff = sector_detuning(params, n);
  const double mix =
      2.0 * params.coupling * std::sqrt(static_cast<double>(n + 1));
  prop.m11 = complex(c, -eff / prop.beta_n * s);
  prop.m12 = complex(0.0, -mix / prop.beta_n * s);
  prop.global_phase = std::polar(1.0, 0.5 * params.stark * t);
  return prop;
}

double JointState::norm_squared() const noexcept {
  double sum = 0.0;
  for (const auto& s : sectors) sum += std::norm(s.c) + std::norm(s.d);
  return sum;
}

JointState state_from(const PhotonDistribution& dist, AtomState atom,
                      std::span<const double> phases,
                      GroundWeighting weighting) {
  const auto phase = [&](std::size_t n) {
    const double theta = n < phases.size() ? phases[n] : 0.0;
    return std::polar(1.0, theta);
  };
  JointState state;
  if (atom == AtomState::excited) {
    state.sectors.resize(dist.n_max() + 1);
    for (std::size_t n = 0; n <= dist.n_max(); ++n)
      state.sectors[n] = {std::sqrt(dist[n]) * phase(n), complex{}};
    return state;
  }
  double scale = 1.0;
  if (weighting == GroundWeighting::renormalize) {
    const double weight = dist.total() - dist[0];
    if (!(weight > 0.0))
      throw InvalidInput("ground-atom state needs at least one photon: the "
                         "field has no weight outside the vacuum");
    scale = 1.0 / weight;
  }
  // Sector n holds |n+1, g⟩, so a distribution cut at n_max fills n_max sectors.
  state.sectors.resize(std::max<std::size_t>(dist.n_max(), 1));
  for (std::size_t n = 0; n < state.sectors.size(); ++n)
    state.sectors[n] = {complex{}, std::sqrt(dist[n + 1] * scale) * phase(n)};
  return state;
}

JointState evolve(const JointState& initial, const ModelParams& params,
                  double t) {
  JointState out;
  out.sectors.resize(initial.sectors.size());
  for (std::size_t n = 0; n < initial.sectors.size(); ++n) {
    const auto prop = sector_propagator(params, n, t);
    const auto [c0, d0] = initial.sectors[n];
    out.sectors[n].c = prop.global_phase * (prop.m11 * c0 + prop.m12 * d0);
    out.sectors[n].d = prop.global_phase * (prop.m21() * c0 + prop.m22() * d0);
  }
  return out;
}

double inversion(const JointState& state) {
  double w = 0.0;
  for (const auto& s : state.sectors) w += std::norm(s.c) - std::norm(s.d);
  return w;
}

namespace {

/// Σ_n weight(n)/β_n² {[Δ+(2n+1)χ]² + 4g²(n+1)cos(β_n t)} over n < count.
template <typename Weight>
double sector_sum(const ModelParams& params, std::size_t count, double t,
                  Weight weight) {
  const double g2 = params.coupling * params.coupling;
  double w = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    const double p = weight(n);
    if (p == 0.0) continue;
    const double eff = sector_detuning(params, n);
    const double mix = 4.0 * g2 * static_cast<double>(n + 1);
    const double beta2 = eff * eff + mix;
    const double beta = std::sqrt(beta2);
    w += p / beta2 * (eff * eff + mix * std::cos(beta * t));
  }
  return w;
}

} // namespace

double inversion_excited(const PhotonDistribution& dist,
                         const ModelParams& params, double t) {
  return sector_sum(params, dist.n_max() + 1, t,
                    [&](std::size_t n) { return dist[n]; });
}

double inversion_ground(const PhotonDistribution& dist,
                        const ModelParams& params, double t) {
  return -sector_sum(params, dist.n_max(), t,
                     [&](std::size_t n) { return dist[n + 1]; });
}

double inversion_closed_form(const PhotonDistribution& dist, AtomState atom,
                             const ModelParams& params, double t) {
  return atom == AtomState::excited ? inversion_excited(dist, params, t)
                                    : inversion_ground(dist, params, t);
}

} // namespace cavityline
