#include "cavityline/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <sstream>

#include "cavityline/csv_output.hpp"
#include "cavityline/errors.hpp"
#include "cavityline/lineshape.hpp"
#include "cavityline/oracle.hpp"
#include "cavityline/parallel.hpp"

namespace cavityline::cli {
namespace {

double parse_number(const std::string& token, const std::string& what) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value))
    throw InvalidInput(what + ": not a finite number: '" + token + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  if (text.empty()) return parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (text.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  for (const auto& tok : split(text, ',')) values.push_back(parse_number(tok, what));
  return values;
}

std::string trunc_flags(const TruncationPolicy& trunc) {
  return " --trunc-tail " + format_real(trunc.eps_tail);
}

void warn_validity(double stark, std::ostream& warn, CsvMetadata& meta) {
  if (std::abs(stark) <= 1.0) return;
  warn << "warning: |chi| = " << format_real(std::abs(stark))
       << " exceeds 1, outside the validity range of the Stark-shift model\n";
  meta.add("warning", "|chi| > 1 is outside the model's validity range");
}

void add_truncation(CsvMetadata& meta, const TruncationPolicy& trunc,
                    std::size_t n_max) {
  meta.add("trunc_eps_tail", trunc.eps_tail);
  meta.add("trunc_min_n_max", std::to_string(trunc.min_n_max));
  meta.add("trunc_sigma_multiple", trunc.sigma_multiple);
  meta.add("n_max", std::to_string(n_max));
}

std::string atom_text(AtomState atom) { return std::string(to_string(atom)); }

} // namespace

std::vector<double> GridRange::points() const { return linspace(lo, hi, count); }

std::string GridRange::text() const {
  return format_real(lo) + ":" + format_real(hi) + ":" + std::to_string(count);
}

GridRange parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3)
    throw InvalidInput("range '" + text + "' must look like <lo>:<hi>:<count>");
  GridRange range;
  range.lo = parse_number(parts[0], "range '" + text + "'");
  range.hi = parse_number(parts[1], "range '" + text + "'");
  const auto& c = parts[2];
  auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), range.count);
  if (c.empty() || ec != std::errc{} || ptr != c.data() + c.size() ||
      range.count == 0)
    throw InvalidInput("range '" + text + "': count must be a positive integer");
  if (range.count > 1 && !(range.hi > range.lo))
    throw InvalidInput("range '" + text + "': need lo < hi");
  if (range.count == 1 && range.lo != range.hi)
    throw InvalidInput("range '" + text + "': a one-point range needs lo == hi");
  return range;
}

std::string cmd_dynamics(const DynamicsConfig& cfg, std::ostream& warn) {
  cfg.params.validate();
  if (cfg.t_samples == 0) throw InvalidInput("--t-samples must be positive");
  const auto times = linspace(0.0, cfg.t_max, cfg.t_samples);
  const auto dist = make_distribution(cfg.field, cfg.trunc);

  std::vector<double> w(times.size());
  if (cfg.phases.empty()) {
    parallel_for(times.size(), [&](std::size_t k) {
      w[k] = inversion_closed_form(dist, cfg.atom, cfg.params, times[k]);
    });
  } else {
    const auto state0 =
        state_from(dist, cfg.atom, cfg.phases, GroundWeighting::raw);
    parallel_for(times.size(), [&](std::size_t k) {
      w[k] = inversion(evolve(state0, cfg.params, times[k]));
    });
  }

  CsvMetadata meta;
  std::string command = "cavityline dynamics --field " + to_string(cfg.field) +
                        " --atom " + atom_text(cfg.atom) +
                        " --delta " + format_real(cfg.params.detuning) +
                        " --chi " + format_real(cfg.params.stark) +
                        " --coupling " + format_real(cfg.params.coupling) +
                        " --t-max " + format_real(cfg.t_max) +
                        " --t-samples " + std::to_string(cfg.t_samples) +
                        trunc_flags(cfg.trunc);
  if (!cfg.phases.empty()) {
    command += " --phases ";
    for (std::size_t i = 0; i < cfg.phases.size(); ++i)
      command += (i ? "," : "") + format_real(cfg.phases[i]);
  }
  meta.add("command", command);
  meta.add("field", to_string(cfg.field));
  meta.add("atom_init", atom_text(cfg.atom));
  meta.add("delta", cfg.params.detuning);
  meta.add("chi", cfg.params.stark);
  meta.add("g", cfg.params.coupling);
  add_truncation(meta, cfg.trunc, dist.n_max());
  if (cfg.atom == AtomState::ground && dist[0] > 0.0) {
    meta.add("note", "ground-atom inversion uses raw weights P_{n+1}; the "
                     "vacuum weight P_0 cannot couple to the ground ladder");
    meta.add("P_0", dist[0]);
    meta.add("renormalized_W", "W/(1-P_0)");
  }
  warn_validity(cfg.params.stark, warn, meta);

  std::ostringstream out;
  meta.write(out);
  out << "t,W\n";
  for (std::size_t k = 0; k < times.size(); ++k)
    out << format_real(times[k]) << ',' << format_real(w[k]) << '\n';
  return out.str();
}

std::string cmd_lineshape(const LineshapeConfig& cfg, std::ostream& warn) {
  const auto deltas = cfg.deltas.points();
  std::ostringstream out;
  if (cfg.field) {
    const auto shape =
        sweep(*cfg.field, cfg.atom, cfg.stark, cfg.coupling, deltas, cfg.trunc);
    CsvMetadata meta;
    meta.add("command", "cavityline lineshape --field " + to_string(*cfg.field) +
                            " --atom " + atom_text(cfg.atom) +
                            " --chi " + format_real(cfg.stark) +
                            " --coupling " + format_real(cfg.coupling) +
                            " --delta-range " + cfg.deltas.text() +
                            trunc_flags(cfg.trunc));
    warn_validity(cfg.stark, warn, meta);
    meta.write(out);
    write_csv(out, shape);
    return out.str();
  }

  const auto nbars = cfg.nbars.points();
  if (nbars.front() < 0.0) throw InvalidInput("mean photon numbers must be >= 0");
  std::vector<LineShape> rows;
  rows.reserve(nbars.size());
  for (double nbar : nbars)
    rows.push_back(sweep(FieldSpec::coherent(std::sqrt(nbar)), cfg.atom,
                         cfg.stark, cfg.coupling, deltas, cfg.trunc));

  CsvMetadata meta;
  meta.add("command", "cavityline lineshape --atom " + atom_text(cfg.atom) +
                          " --chi " + format_real(cfg.stark) +
                          " --coupling " + format_real(cfg.coupling) +
                          " --delta-range " + cfg.deltas.text() +
                          " --nbar-range " + cfg.nbars.text() +
                          trunc_flags(cfg.trunc));
  meta.add("field", "coherent:sqrt(nbar)");
  meta.add("chi", cfg.stark);
  meta.add("g", cfg.coupling);
  meta.add("atom_init", atom_text(cfg.atom));
  std::size_t n_max = 0;
  for (const auto& r : rows) n_max = std::max(n_max, r.n_max);
  add_truncation(meta, cfg.trunc, n_max);
  warn_validity(cfg.stark, warn, meta);
  meta.write(out);
  out << "nbar,delta,value\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < deltas.size(); ++j)
      out << format_real(nbars[i]) << ',' << format_real(deltas[j]) << ','
          << format_real(rows[i].values[j]) << '\n';
  return out.str();
}

std::string cmd_discriminate(const DiscriminateConfig& cfg, std::ostream& warn) {
  const auto deltas = cfg.deltas.points();
  const auto alphas = cfg.alphas.points();
  std::vector<AtomState> atoms;
  if (cfg.atom)
    atoms.push_back(*cfg.atom);
  else
    atoms = {AtomState::excited, AtomState::ground};

  std::vector<DiscriminationMap> maps;
  for (auto atom : atoms)
    maps.push_back(discrimination_map(alphas, atom, cfg.stark, cfg.coupling,
                                      deltas, cfg.trunc));

  CsvMetadata meta;
  std::string command = "cavityline discriminate --chi " + format_real(cfg.stark) +
                        " --coupling " + format_real(cfg.coupling) +
                        " --delta-range " + cfg.deltas.text() +
                        " --alpha-range " + cfg.alphas.text() +
                        trunc_flags(cfg.trunc);
  if (cfg.atom) command += " --atom " + atom_text(*cfg.atom);
  meta.add("command", command);
  meta.add("field", "cat:<alpha>:0 minus cat:<alpha>:pi");
  meta.add("chi", cfg.stark);
  meta.add("g", cfg.coupling);
  meta.add("atom_init", cfg.atom ? atom_text(*cfg.atom) : "excited,ground");
  meta.add("trunc_eps_tail", cfg.trunc.eps_tail);
  meta.add("trunc_eps_norm", cfg.trunc.eps_norm);
  meta.add("alpha_floor", maps.front().alpha_floor);
  warn_validity(cfg.stark, warn, meta);

  std::ostringstream out;
  meta.write(out);
  out << "alpha,delta";
  for (auto atom : atoms)
    out << (atoms.size() == 1 ? ",diff" : ",diff_" + atom_text(atom));
  out << '\n';
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!maps.front().diff[i]) {
      warn << "warning: alpha=" << format_real(alphas[i])
           << " skipped, odd cat is below the normalization floor\n";
      out << "# missing alpha=" << format_real(alphas[i])
          << " (odd cat below normalization floor)\n";
      continue;
    }
    for (std::size_t j = 0; j < deltas.size(); ++j) {
      out << format_real(alphas[i]) << ',' << format_real(deltas[j]);
      for (const auto& m : maps) out << ',' << format_real((*m.diff[i])[j]);
      out << '\n';
    }
  }
  return out.str();
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed(); });
}

std::string VerifyReport::render() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    char line[200];
    std::snprintf(line, sizeof line, "%-4s %-44s max_dev=%.3e tol=%.1e\n",
                  c.passed() ? "ok" : "FAIL", c.name.c_str(), c.max_deviation,
                  c.tolerance);
    out << line;
  }
  out << (passed() ? "verify: all checks passed\n" : "verify: FAILED\n");
  return out.str();
}

VerifyReport cmd_verify(const VerifyConfig& cfg) {
  if (cfg.deltas.empty() || cfg.starks.empty() || cfg.fields.empty() ||
      cfg.t_samples == 0)
    throw InvalidInput("verify grid is empty");
  std::vector<FieldSpec> fields;
  for (const auto& f : cfg.fields) fields.push_back(parse_field_spec(f));
  const auto times = linspace(0.0, cfg.t_max, cfg.t_samples);
  const double fault = cfg.inject_fault ? 1e-6 : 0.0;

  CheckResult inversion_check{"inversion closed form vs oracle", 0.0, 1e-8};
  CheckResult amplitude_check{"amplitudes closed form vs oracle", 0.0, 1e-8};
  CheckResult gap_check{"sector gap vs Rabi frequency (n<=" +
                            std::to_string(cfg.gap_n_max) + ")",
                        0.0, 1e-10};
  CheckResult structure_check{"hamiltonian symmetry and block structure", 0.0,
                              1e-14};
  CheckResult rk_check{"rk_adaptive vs eigen propagation", 0.0, 1e-8};
  CheckResult norm_check{"norm drift over t=1000", 0.0, 1e-9};

  struct Case {
    ModelParams params;
    FieldSpec field;
  };
  std::vector<Case> cases;
  for (double delta : cfg.deltas)
    for (double chi : cfg.starks)
      for (const auto& f : fields) cases.push_back({{delta, chi, cfg.coupling}, f});

  std::vector<double> inv_dev(cases.size()), amp_dev(cases.size());
  parallel_for(cases.size(), [&](std::size_t k) {
    const auto& [params, field] = cases[k];
    ModelParams closed = params;
    closed.coupling *= 1.0 + fault;
    const auto dist = make_distribution(field, cfg.trunc);
    for (auto atom : {AtomState::excited, AtomState::ground}) {
      const auto state0 = state_from(dist, atom, {}, GroundWeighting::raw);
      const auto numeric = oracle::inversion_numeric(state0, params, times);
      for (std::size_t i = 0; i < times.size(); ++i)
        inv_dev[k] = std::max(
            inv_dev[k],
            std::abs(inversion_closed_form(dist, atom, closed, times[i]) - numeric[i]));
    }
    // Mixed, phased state: exercises the global phase and the cross terms.
    JointState mixed;
    mixed.sectors.resize(dist.n_max() + 1);
    for (std::size_t n = 0; n <= dist.n_max(); ++n)
      mixed.sectors[n] = {std::polar(std::sqrt(0.5 * dist[n]), 0.3 * n),
                          std::polar(std::sqrt(0.5 * dist[n + 1]), -0.7 * n)};
    for (std::size_t i = 0; i < times.size(); i += 20) {
      const auto a = evolve(mixed, closed, times[i]);
      const auto b = oracle::propagate_numeric(mixed, params, times[i]);
      for (std::size_t n = 0; n < a.size(); ++n)
        amp_dev[k] = std::max({amp_dev[k], std::abs(a.sectors[n].c - b.sectors[n].c),
                               std::abs(a.sectors[n].d - b.sectors[n].d)});
    }
  });
  inversion_check.max_deviation = *std::max_element(inv_dev.begin(), inv_dev.end());
  amplitude_check.max_deviation = *std::max_element(amp_dev.begin(), amp_dev.end());

  for (double delta : cfg.deltas)
    for (double chi : cfg.starks) {
      const ModelParams params{delta, chi, cfg.coupling};
      ModelParams closed = params;
      closed.coupling *= 1.0 + fault;
      const auto h = oracle::build_hamiltonian(params, cfg.gap_n_max);
      structure_check.max_deviation = std::max(
          {structure_check.max_deviation, h.max_asymmetry(), h.max_off_block()});
      for (std::size_t n = 0; n <= cfg.gap_n_max; ++n)
        gap_check.max_deviation =
            std::max(gap_check.max_deviation,
                     std::abs(oracle::sector_gap(h, n) - rabi_freq(closed, n)));

      // Structurally different integrator on a small mixed state.
      JointState small;
      small.sectors.resize(6);
      for (std::size_t n = 0; n < small.size(); ++n)
        small.sectors[n] = {std::polar(1.0 / std::sqrt(12.0), 0.4 * n),
                            std::polar(1.0 / std::sqrt(12.0), -0.9 * n)};
      const auto eig = oracle::propagate_numeric(small, params, 10.0);
      const auto rk =
          oracle::propagate_numeric(small, params, 10.0, oracle::Method::rk_adaptive);
      for (std::size_t n = 0; n < small.size(); ++n)
        rk_check.max_deviation = std::max({rk_check.max_deviation,
                                           std::abs(eig.sectors[n].c - rk.sectors[n].c),
                                           std::abs(eig.sectors[n].d - rk.sectors[n].d)});
      const auto late = oracle::propagate_numeric(small, params, 1000.0);
      norm_check.max_deviation =
          std::max(norm_check.max_deviation,
                   std::abs(late.norm_squared() - small.norm_squared()));
    }

  VerifyReport report;
  report.checks = {inversion_check, amplitude_check, gap_check,
                   structure_check, rk_check, norm_check};
  return report;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jaynes-Cummings dynamics with an AC Stark term: inversion traces, "
               "line shapes and cat-state discrimination maps"};
  app.require_subcommand(1);

  std::string out_path;
  std::string field_text;
  std::string atom_text_in;
  std::string phases_text;
  std::string delta_range_text;
  std::string alpha_range_text;
  std::string nbar_range_text;
  std::optional<double> delta;
  std::optional<double> chi;
  std::optional<double> coupling;
  double t_max = 50.0;
  std::size_t t_samples = 5001;
  double trunc_tail = 1e-12;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Output CSV path (stdout if omitted)");
    sub->add_option("--chi", chi, "AC Stark strength chi");
    sub->add_option("--coupling", coupling, "Atom-field coupling g (> 0)");
    sub->add_option("--trunc-tail", trunc_tail,
                    "Bound on discarded photon-number probability")
        ->check(CLI::PositiveNumber);
  };

  auto* dyn = app.add_subcommand("dynamics", "Atomic inversion W(t)");
  add_common(dyn);
  dyn->add_option("--field", field_text, "fock:<n> | coherent:<re>[,<im>] | cat:<re>[,<im>]:<phi>");
  dyn->add_option("--atom", atom_text_in, "excited | ground")
      ->check(CLI::IsMember({"excited", "ground"}));
  dyn->add_option("--delta", delta, "Detuning Delta");
  dyn->add_option("--t-max", t_max, "Final time (units of 1/g)");
  dyn->add_option("--t-samples", t_samples, "Number of time samples");
  dyn->add_option("--phases", phases_text, "Comma-separated initial phases theta_n");

  auto* ls = app.add_subcommand("lineshape", "Time-averaged inversion vs detuning");
  add_common(ls);
  ls->add_option("--field", field_text, "Single-curve field (default: coherent surface over nbar)");
  ls->add_option("--atom", atom_text_in, "excited | ground")
      ->check(CLI::IsMember({"excited", "ground"}));
  ls->add_option("--delta", delta, "Evaluate at a single detuning");
  ls->add_option("--delta-range", delta_range_text, "lo:hi:count detuning grid");
  ls->add_option("--nbar-range", nbar_range_text, "lo:hi:count mean photon numbers");

  auto* disc = app.add_subcommand("discriminate", "Even-minus-odd cat line-shape maps");
  add_common(disc);
  disc->add_option("--atom", atom_text_in, "excited | ground (default: both)")
      ->check(CLI::IsMember({"excited", "ground"}));
  disc->add_option("--delta-range", delta_range_text, "lo:hi:count detuning grid");
  disc->add_option("--alpha-range", alpha_range_text, "lo:hi:count cat amplitude grid");

  auto* ver = app.add_subcommand("verify", "Closed forms vs brute-force propagation");
  std::string deltas_list = "0,1,5";
  std::string chis_list = "0,0.25,0.5";
  std::string fields_list = "fock:0;fock:3;coherent:2;cat:2:0;cat:2:pi";
  std::size_t verify_samples = 200;
  bool inject_fault = false;
  ver->add_option("--deltas", deltas_list, "Comma-separated detunings");
  ver->add_option("--chis", chis_list, "Comma-separated Stark strengths");
  ver->add_option("--fields", fields_list, "Semicolon-separated field specs");
  ver->add_option("--coupling", coupling, "Atom-field coupling g (> 0)");
  ver->add_option("--t-max", t_max, "Final time");
  ver->add_option("--t-samples", verify_samples, "Number of sample times");
  ver->add_option("--trunc-tail", trunc_tail, "Tail bound")->check(CLI::PositiveNumber);
  ver->add_flag("--inject-fault", inject_fault, "Corrupt the closed-form Rabi frequencies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  TruncationPolicy trunc;
  trunc.eps_tail = trunc_tail;

  const auto emit = [&](const std::string& csv) {
    if (out_path.empty())
      out << csv;
    else
      write_file_atomically(out_path, csv);
  };

  try {
    if (dyn->parsed()) {
      DynamicsConfig cfg;
      if (!field_text.empty()) cfg.field = parse_field_spec(field_text);
      if (!atom_text_in.empty()) cfg.atom = parse_atom_state(atom_text_in);
      if (delta) cfg.params.detuning = *delta;
      if (chi) cfg.params.stark = *chi;
      if (coupling) cfg.params.coupling = *coupling;
      cfg.t_max = t_max;
      cfg.t_samples = t_samples;
      cfg.phases = parse_list(phases_text, "--phases");
      cfg.trunc = trunc;
      emit(cmd_dynamics(cfg, err));
    } else if (ls->parsed()) {
      LineshapeConfig cfg;
      if (!field_text.empty()) cfg.field = parse_field_spec(field_text);
      if (!atom_text_in.empty()) cfg.atom = parse_atom_state(atom_text_in);
      if (chi) cfg.stark = *chi;
      if (coupling) cfg.coupling = *coupling;
      if (!delta_range_text.empty())
        cfg.deltas = parse_range(delta_range_text);
      else if (delta)
        cfg.deltas = {*delta, *delta, 1};
      if (!nbar_range_text.empty()) cfg.nbars = parse_range(nbar_range_text);
      cfg.trunc = trunc;
      emit(cmd_lineshape(cfg, err));
    } else if (disc->parsed()) {
      DiscriminateConfig cfg;
      if (!atom_text_in.empty()) cfg.atom = parse_atom_state(atom_text_in);
      if (chi) cfg.stark = *chi;
      if (coupling) cfg.coupling = *coupling;
      if (!delta_range_text.empty()) cfg.deltas = parse_range(delta_range_text);
      if (!alpha_range_text.empty()) cfg.alphas = parse_range(alpha_range_text);
      cfg.trunc = trunc;
      emit(cmd_discriminate(cfg, err));
    } else {
      VerifyConfig cfg;
      cfg.deltas = parse_list(deltas_list, "--deltas");
      cfg.starks = parse_list(chis_list, "--chis");
      cfg.fields = split(fields_list, ';');
      if (coupling) cfg.coupling = *coupling;
      cfg.t_max = t_max;
      cfg.t_samples = verify_samples;
      cfg.inject_fault = inject_fault;
      cfg.trunc = trunc;
      const auto report = cmd_verify(cfg);
      out << report.render();
      return report.passed() ? kExitOk : kExitCheckFailure;
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateCat& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailure;
  }
  return kExitOk;
}

} // namespace cavityline::cli
