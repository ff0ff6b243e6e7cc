#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cavityline/field_spec.hpp"
#include "cavityline/jc_dynamics.hpp"
#include "cavityline/photon_stats.hpp"

namespace cavityline::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

/// `a:b:n`, n uniform points on [a, b].
struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;

  std::vector<double> points() const;
  std::string text() const;
};

/// Throws InvalidInput on anything but `<real>:<real>:<count>`.
GridRange parse_range(const std::string& text);

struct DynamicsConfig {
  FieldSpec field = FieldSpec::coherent(4.0);
  AtomState atom = AtomState::excited;
  ModelParams params{1.0, 0.0, 1.0};
  double t_max = 50.0;
  std::size_t t_samples = 5001;
  std::vector<double> phases;
  TruncationPolicy trunc;
};

struct LineshapeConfig {
  /// Single curve when set; otherwise a coherent-state surface over nbar.
  std::optional<FieldSpec> field;
  AtomState atom = AtomState::excited;
  double stark = 0.0;
  double coupling = 1.0;
  GridRange deltas{-20.0, 20.0, 801};
  GridRange nbars{0.0, 20.0, 41};
  TruncationPolicy trunc;
};

struct DiscriminateConfig {
  /// Both atom states when unset.
  std::optional<AtomState> atom;
  double stark = 0.5;
  double coupling = 1.0;
  GridRange deltas{-20.0, 20.0, 801};
  GridRange alphas{0.05, 2.0, 40};
  TruncationPolicy trunc;
};

struct VerifyConfig {
  std::vector<double> deltas{0.0, 1.0, 5.0};
  std::vector<double> starks{0.0, 0.25, 0.5};
  double coupling = 1.0;
  std::vector<std::string> fields{"fock:0", "fock:3", "coherent:2", "cat:2:0",
                                  "cat:2:pi"};
  double t_max = 50.0;
  std::size_t t_samples = 200;
  std::size_t gap_n_max = 200;
  /// Perturbs the closed-form Rabi frequencies (via g → g(1 + 1e-6)) so the
  /// checks must fail.
  bool inject_fault = false;
  TruncationPolicy trunc;
};

struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_deviation <= tolerance; }
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  std::string render() const;
};

/// CSV text for each command. Diagnostics (validity warnings, skipped rows)
/// go to `warn`.
std::string cmd_dynamics(const DynamicsConfig& cfg, std::ostream& warn);
std::string cmd_lineshape(const LineshapeConfig& cfg, std::ostream& warn);
std::string cmd_discriminate(const DiscriminateConfig& cfg, std::ostream& warn);
/// Throws InvalidInput on an empty grid.
VerifyReport cmd_verify(const VerifyConfig& cfg);

/// Parses argv, runs one command, writes CSV to --out (atomically) or `out`.
/// Returns kExitOk, kExitCheckFailure or kExitUsage.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cavityline::cli
