// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cavityline/jc_dynamics.hpp"
#include "cavityline/lineshape.hpp"
#include "cavityline/oracle.hpp"
#include "cavityline/photon_stats.hpp"

using namespace cavityline;
using std::numbers::pi;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %-34s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<double> kDeltas{0.0, 1.0, 5.0};
const std::vector<double> kStarks{0.0, 0.25, 0.5};

std::vector<FieldSpec> grid_fields() {
  return {FieldSpec::fock(0), FieldSpec::fock(3), FieldSpec::coherent(2.0),
          FieldSpec::cat(2.0, 0.0), FieldSpec::cat(2.0, pi)};
}

void oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  const auto times = linspace(0.0, 50.0, 200);
  double worst = 0.0;
  int cases = 0;
  for (double delta : kDeltas)
    for (double chi : kStarks)
      for (const auto& field : grid_fields()) {
        const ModelParams p{delta, chi, 1.0};
        const auto dist = make_distribution(field);
        for (auto atom : {AtomState::excited, AtomState::ground}) {
          const auto state0 = state_from(dist, atom, {}, GroundWeighting::raw);
          const auto numeric = oracle::inversion_numeric(state0, p, times);
          for (std::size_t k = 0; k < times.size(); ++k)
            worst = std::max(worst, std::abs(inversion_closed_form(dist, atom, p, times[k]) -
                                              numeric[k]));
          ++cases;
        }
      }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(worst <= 1e-8 && secs <= 30.0 && cases == 90, "oracle equivalence",
         fmt("%d cases x 200 times: max |W_closed - W_oracle| = %.2e (tol 1e-8), %.2f s "
             "(limit 30 s)",
             cases, worst, secs));
}

void rabi_gap() {
  double worst = 0.0;
  for (double delta : kDeltas)
    for (double chi : kStarks) {
      const ModelParams p{delta, chi, 1.0};
      const auto h = oracle::build_hamiltonian(p, 200);
      for (std::size_t n = 0; n <= 200; ++n)
        worst = std::max(worst, std::abs(oracle::sector_gap(h, n) - rabi_freq(p, n)));
    }
  report(worst <= 1e-10, "Rabi-frequency validation",
         fmt("n <= 200 over 9 (delta, chi) pairs: max |gap - beta_n| = %.2e (tol 1e-10)", worst));
}

void vacuum_rabi() {
  const auto dist = fock_distribution(0);
  const ModelParams p{0.0, 0.0, 1.0};
  double worst = 0.0;
  for (double t : linspace(0.0, 50.0, 5001))
    worst = std::max(worst, std::abs(inversion_excited(dist, p, t) - std::cos(2.0 * t)));
  report(worst <= 1e-12, "vacuum Rabi",
         fmt("max |W(t) - cos 2t| on [0, 50] = %.2e (tol 1e-12)", worst));
}

/// Centered sliding maximum over +-half_width samples.
std::vector<double> sliding_max(const std::vector<double>& v, std::size_t half_width) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t lo = i > half_width ? i - half_width : 0;
    const std::size_t hi = std::min(v.size() - 1, i + half_width);
    out[i] = *std::max_element(v.begin() + lo, v.begin() + hi + 1);
  }
  return out;
}

struct Revival {
  double collapse_time = NAN;
  double peak_time = NAN;
};

/// First post-collapse peak of the oscillation envelope |W - W̄|.
Revival first_revival(const std::vector<double>& times, const std::vector<double>& env) {
  Revival r;
  const double e0 = env.front();
  std::size_t i = 0;
  while (i < env.size() && env[i] >= 0.1 * e0) ++i;
  if (i == env.size()) return r;
  r.collapse_time = times[i];
  while (i < env.size() && env[i] <= 0.5 * e0) ++i;
  if (i == env.size()) return r;
  std::size_t best = i;
  while (i < env.size() && env[i] > 0.5 * e0) {
    if (env[i] > env[best]) best = i;
    ++i;
  }
  r.peak_time = times[best];
  return r;
}

void collapse_revival() {
  const auto times = linspace(0.0, 50.0, 5001);  // dt = 0.01
  const std::size_t half = 100;                   // window width 2/g
  const auto dist = coherent_distribution(4.0);

  auto trace = [&](double chi) {
    std::vector<double> w(times.size());
    const ModelParams p{1.0, chi, 1.0};
    for (std::size_t k = 0; k < times.size(); ++k) w[k] = inversion_excited(dist, p, times[k]);
    return w;
  };

  // (a) collapse then revival of |W| at chi = 0.
  const auto w0 = trace(0.0);
  std::vector<double> abs_w(w0.size());
  std::transform(w0.begin(), w0.end(), abs_w.begin(), [](double x) { return std::abs(x); });
  const auto env_abs = sliding_max(abs_w, half);
  std::size_t k = 0;
  while (k < env_abs.size() && env_abs[k] >= 0.1) ++k;
  const bool collapsed = k < env_abs.size();
  const double t_collapse = collapsed ? times[k] : NAN;
  double revival_max = 0.0, t_revival = NAN;
  for (std::size_t j = k; j < env_abs.size(); ++j)
    if (env_abs[j] > revival_max) {
      revival_max = env_abs[j];
      t_revival = times[j];
    }
  report(collapsed && revival_max > 0.3, "collapse and revival",
         fmt("chi=0: envelope of |W| < 0.1 from t=%.2f, revives to %.3f at t=%.2f (needs > 0.3)",
             t_collapse, revival_max, t_revival));

  // (b) first revival earlier at chi = 0.5.
  auto oscillation_envelope = [&](double chi, const std::vector<double>& w) {
    const double mean = avg_inversion_excited(dist, chi, 1.0, 1.0);
    std::vector<double> osc(w.size());
    std::transform(w.begin(), w.end(), osc.begin(),
                   [&](double x) { return std::abs(x - mean); });
    return sliding_max(osc, half);
  };
  const auto r0 = first_revival(times, oscillation_envelope(0.0, w0));
  const auto r5 = first_revival(times, oscillation_envelope(0.5, trace(0.5)));
  report(std::isfinite(r0.peak_time) && std::isfinite(r5.peak_time) &&
             r5.peak_time < r0.peak_time,
         "earlier revival with Stark shift",
         fmt("first post-collapse envelope peak: chi=0.5 at t=%.2f < chi=0 at t=%.2f",
             r5.peak_time, r0.peak_time));
}

void lineshape_properties() {
  const auto deltas = linspace(-20.0, 20.0, 801);
  const auto nbars = linspace(0.0, 20.0, 81);
  double asym = 0.0;
  double we_min = 1.0, we_max = 0.0, wb_min = 0.0, wb_max = -1.0;
  bool center_zero = true;
  for (double nbar : nbars) {
    const auto dist = coherent_distribution(std::sqrt(nbar));
    for (std::size_t j = 0; j < deltas.size(); ++j) {
      const double d = deltas[j];
      const double we0 = avg_inversion_excited(dist, 0.0, 1.0, d);
      const double wb0 = avg_inversion_ground(dist, 0.0, 1.0, d);
      asym = std::max({asym, std::abs(we0 - avg_inversion_excited(dist, 0.0, 1.0, -d)),
                       std::abs(wb0 - avg_inversion_ground(dist, 0.0, 1.0, -d))});
      for (double chi : kStarks) {
        const double we = avg_inversion_excited(dist, chi, 1.0, d);
        const double wb = avg_inversion_ground(dist, chi, 1.0, d);
        we_min = std::min(we_min, we);
        we_max = std::max(we_max, we);
        wb_min = std::min(wb_min, wb);
        wb_max = std::max(wb_max, wb);
      }
    }
    center_zero = center_zero && avg_inversion_excited(dist, 0.0, 1.0, 0.0) == 0.0;
  }
  const bool bounds = we_min >= 0.0 && we_max <= 1.0 && wb_min >= -1.0 && wb_max <= 0.0;
  report(asym <= 1e-12 && bounds && center_zero, "line-shape properties",
         fmt("max asymmetry %.1e (tol 1e-12); We in [%.4f, %.4f], Wb in [%.4f, %.4f]; "
             "We(0, chi=0) == 0: %s",
             asym, we_min, we_max, wb_min, wb_max, center_zero ? "yes" : "no"));
}

void ground_peak() {
  // Height of the Δ = 0 ridge above the window edge Δ = ±20.
  double best_height = -1.0, best_nbar = NAN, literal = 0.0;
  for (double nbar : linspace(0.0, 20.0, 2001)) {
    const auto dist = coherent_distribution(std::sqrt(nbar));
    const double center = avg_inversion_ground(dist, 0.0, 1.0, 0.0);
    const double edge = std::min(avg_inversion_ground(dist, 0.0, 1.0, -20.0),
                                 avg_inversion_ground(dist, 0.0, 1.0, 20.0));
    literal = std::max(literal, std::abs(center));
    if (center - edge > best_height) {
      best_height = center - edge;
      best_nbar = nbar;
    }
  }
  report(best_nbar >= 3.0 && best_nbar <= 5.0, "ground-surface peak",
         fmt("Delta=0 ridge height over the |Delta|=20 edge peaks at nbar=%.2f (height %.4f), "
             "needs [3, 5]; max |Wb(0)| at chi=0 is %.1e",
             best_nbar, best_height, literal));
}

double max_discrimination(double alpha, AtomState atom) {
  const auto deltas = linspace(-20.0, 20.0, 801);
  const std::vector<double> alphas{alpha};
  return *discrimination_map(alphas, atom, 0.5, 1.0, deltas).max_abs_diff(0);
}

void discrimination_decay() {
  const double d1 = max_discrimination(1.0, AtomState::excited);
  const double d4 = max_discrimination(2.0, AtomState::excited);
  const double d9 = max_discrimination(3.0, AtomState::excited);
  report(d1 > d4 && d4 > d9, "discrimination decay",
         fmt("excited, chi=0.5: max|diff| at nbar=1,4,9 = %.4e > %.4e > %.4e", d1, d4, d9));
}

void ground_vs_excited() {
  const double ex = max_discrimination(1.0, AtomState::excited);
  const double gr = max_discrimination(1.0, AtomState::ground);
  report(gr > ex, "ground-vs-excited discrimination",
         fmt("alpha=1, chi=0.5: ground %.4f > excited %.4f", gr, ex));
}

void parity_exactness() {
  std::size_t checked = 0;
  bool exact = true;
  for (double a : linspace(0.01, 6.0, 120)) {
    const auto even = cat_distribution(a, 0.0);
    const auto odd = cat_distribution(a, pi);
    for (std::size_t n = 1; n <= even.n_max(); n += 2, ++checked) exact &= even[n] == 0.0;
    for (std::size_t n = 0; n <= odd.n_max(); n += 2, ++checked) exact &= odd[n] == 0.0;
  }
  report(exact, "parity exactness",
         fmt("%zu forbidden-parity probabilities over 120 alphas, all exactly zero: %s", checked,
             exact ? "yes" : "no"));
}

void time_average() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double dt = 0.01;
  const double t_end = 2e4;
  bool ok = true;
  std::string detail;
  for (int c = 0; c < 5; ++c) {
    const std::size_t sectors = 1 + static_cast<std::size_t>(5 * u(rng));
    JointState s;
    s.sectors.resize(sectors);
    double norm = 0.0;
    for (auto& sec : s.sectors) {
      sec = {u(rng), u(rng)};
      norm += std::norm(sec.c) + std::norm(sec.d);
    }
    for (auto& sec : s.sectors) {
      sec.c /= std::sqrt(norm);
      sec.d /= std::sqrt(norm);
    }
    const double delta = 6.0 * u(rng) - 3.0;
    const double chi = u(rng) - 0.5;
    const ModelParams p{delta, chi, 1.0};
    const double closed = avg_inversion_general(s, chi, 1.0, delta);

    // Checkpoints T' in [1e3, 2e3] and [1e4, 2e4], 201 each.
    std::vector<std::size_t> marks;
    for (double base : {1e3, 1e4})
      for (int k = 0; k <= 200; ++k)
        marks.push_back(static_cast<std::size_t>(std::llround(base * (1.0 + k / 200.0) / dt)));
    std::sort(marks.begin(), marks.end());

    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    double integral = 0.0;
    double prev = inversion(s);
    std::size_t next_mark = 0;
    double env3 = 0.0, env4 = 0.0, err_1e4 = NAN;
    for (std::size_t i = 1; i <= steps && next_mark < marks.size(); ++i) {
      const double t = static_cast<double>(i) * dt;
      const double w = inversion(evolve(s, p, t));
      integral += 0.5 * (prev + w) * dt;
      prev = w;
      if (i == marks[next_mark]) {
        const double err = std::abs(integral / t - closed);
        if (t < 5e3)
          env3 = std::max(env3, err);
        else
          env4 = std::max(env4, err);
        if (i == static_cast<std::size_t>(std::llround(1e4 / dt))) err_1e4 = err;
        ++next_mark;
      }
    }
    const double ratio = env3 / env4;
    const bool case_ok = err_1e4 <= 5e-3 && ratio >= 7.0 && ratio <= 14.0;
    ok = ok && case_ok;
    detail += fmt("\n      case %d (%zu sectors, delta=%.3f, chi=%.3f): err(T=1e4)=%.2e, "
                  "E(1e3)/E(1e4)=%.2f",
                  c, sectors, delta, chi, err_1e4, ratio);
  }
  report(ok, "time-average consistency",
         "err(T=1e4) <= 5e-3 and window-max error ratio in [7, 14]" + detail);
}

} // namespace

int main() {
  oracle_equivalence();
  rabi_gap();
  vacuum_rabi();
  collapse_revival();
  lineshape_properties();
  ground_peak();
  discrimination_decay();
  ground_vs_excited();
  parity_exactness();
  time_average();
  std::printf("%s: %d criterion/criteria failed\n", failures ? "FAILED" : "ALL PASSED",
              failures);
  return failures ? 1 : 0;
}
