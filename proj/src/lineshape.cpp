#include "cavityline/lineshape.hpp"

#include <cassert>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cavityline/errors.hpp"
#include "cavityline/parallel.hpp"

namespace cavityline {
namespace {

/// [(Δ+(2n+1)χ)/β_n]², the long-time population imbalance of sector n.
double sector_ratio(double stark, double coupling, double detuning,
                    std::size_t n) {
  const double eff = detuning + stark * (2.0 * static_cast<double>(n) + 1.0);
  const double beta2 =
      eff * eff + 4.0 * coupling * coupling * static_cast<double>(n + 1);
  assert(beta2 > 0.0);
  return eff * eff / beta2;
}

} // namespace

double avg_inversion_excited(const PhotonDistribution& dist, double stark,
                             double coupling, double detuning) {
  double w = 0.0;
  for (std::size_t n = 0; n <= dist.n_max(); ++n)
    if (dist[n] != 0.0)
      w += dist[n] * sector_ratio(stark, coupling, detuning, n);
  return w;
}

double avg_inversion_ground(const PhotonDistribution& dist, double stark,
                            double coupling, double detuning) {
  double w = 0.0;
  for (std::size_t n = 0; n < dist.n_max(); ++n)
    if (dist[n + 1] != 0.0)
      w += dist[n + 1] * sector_ratio(stark, coupling, detuning, n);
  return -w;
}

double avg_inversion(const PhotonDistribution& dist, AtomState atom,
                     double stark, double coupling, double detuning) {
  return atom == AtomState::excited
             ? avg_inversion_excited(dist, stark, coupling, detuning)
             : avg_inversion_ground(dist, stark, coupling, detuning);
}

double avg_inversion_general(const JointState& state0, double stark,
                             double coupling, double detuning) {
  double w = 0.0;
  for (std::size_t n = 0; n < state0.sectors.size(); ++n) {
    const auto [c, d] = state0.sectors[n];
    if (c.imag() != 0.0 || d.imag() != 0.0 || c.real() < 0.0 || d.real() < 0.0)
      throw ComplexAmplitudes("sector " + std::to_string(n) +
                              " has a complex or negative amplitude");
    const double eff = detuning + stark * (2.0 * static_cast<double>(n) + 1.0);
    const double root = std::sqrt(static_cast<double>(n + 1));
    const double beta2 = eff * eff + 4.0 * coupling * coupling * (n + 1.0);
    const double cr = c.real();
    const double dr = d.real();
    w += eff * eff / beta2 * (cr * cr - dr * dr) +
         4.0 * coupling * root * eff / beta2 * cr * dr;
  }
  return w;
}

void check_grid(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw InvalidInput(std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]))
      throw InvalidInput(std::string(what) + " grid has a non-finite entry");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw InvalidInput(std::string(what) + " grid must be strictly increasing");
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) throw InvalidInput("grid needs at least one point");
  if (count == 1) {
    if (lo != hi)
      throw InvalidInput("a one-point grid needs equal endpoints");
    return {lo};
  }
  std::vector<double> grid(count);
  // Weighted form keeps a grid on [−a, a] exactly mirror-symmetric.
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double k = static_cast<double>(i);
    grid[i] = ((last - k) * lo + k * hi) / last;
  }
  return grid;
}

LineShape sweep(const FieldSpec& field, AtomState atom_init, double stark,
                double coupling, std::span<const double> delta_grid,
                const TruncationPolicy& trunc) {
  check_grid(delta_grid, "detuning");
  ModelParams{0.0, stark, coupling}.validate();
  const auto dist = make_distribution(field, trunc);

  LineShape shape;
  shape.deltas.assign(delta_grid.begin(), delta_grid.end());
  shape.values.resize(delta_grid.size());
  shape.atom_init = atom_init;
  shape.field = field;
  shape.stark = stark;
  shape.coupling = coupling;
  shape.truncation = trunc;
  shape.n_max = dist.n_max();
  parallel_for(delta_grid.size(), [&](std::size_t j) {
    shape.values[j] = avg_inversion(dist, atom_init, stark, coupling, delta_grid[j]);
  });
  return shape;
}

std::optional<double> DiscriminationMap::max_abs_diff(std::size_t i) const {
  if (!diff.at(i)) return std::nullopt;
  double best = 0.0;
  for (double v : *diff[i]) best = std::max(best, std::abs(v));
  return best;
}

DiscriminationMap discrimination_map(std::span<const double> alphas,
                                     AtomState atom_init, double stark,
                                     double coupling,
                                     std::span<const double> delta_grid,
                                     const TruncationPolicy& trunc) {
  check_grid(delta_grid, "detuning");
  check_grid(alphas, "alpha");
  ModelParams{0.0, stark, coupling}.validate();

  DiscriminationMap map;
  map.alphas.assign(alphas.begin(), alphas.end());
  map.deltas.assign(delta_grid.begin(), delta_grid.end());
  map.diff.resize(alphas.size());
  map.atom_init = atom_init;
  map.stark = stark;
  map.coupling = coupling;
  map.truncation = trunc;
  map.alpha_floor = odd_cat_alpha_floor(trunc.eps_norm);

  for (std::size_t i = 0; i < alphas.size(); ++i) {
    std::optional<PhotonDistribution> even;
    std::optional<PhotonDistribution> odd;
    try {
      even.emplace(cat_distribution(alphas[i], 0.0, trunc));
      odd.emplace(cat_distribution(alphas[i], std::numbers::pi, trunc));
    } catch (const DegenerateCat&) {
      continue;
    }
    std::vector<double> row(delta_grid.size());
    parallel_for(delta_grid.size(), [&](std::size_t j) {
      row[j] = avg_inversion(*even, atom_init, stark, coupling, delta_grid[j]) -
               avg_inversion(*odd, atom_init, stark, coupling, delta_grid[j]);
    });
    map.diff[i] = std::move(row);
  }
  return map;
}

} // namespace cavityline
