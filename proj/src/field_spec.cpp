#include "cavityline/field_spec.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "cavityline/errors.hpp"

namespace cavityline {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_real(std::string_view token, std::string_view context) {
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (token.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value))
    throw InvalidInput("field spec '" + std::string(context) +
                       "': not a finite number: '" + std::string(token) + "'");
  return value;
}

double parse_phase(std::string_view token, std::string_view context) {
  if (token == "pi") return std::numbers::pi;
  if (token == "-pi") return -std::numbers::pi;
  return parse_real(token, context);
}

std::complex<double> parse_amplitude(std::string_view token,
                                     std::string_view context) {
  const auto parts = split(token, ',');
  if (parts.size() > 2)
    throw InvalidInput("field spec '" + std::string(context) +
                       "': amplitude must be <re>[,<im>]");
  const double re = parse_real(parts[0], context);
  const double im = parts.size() == 2 ? parse_real(parts[1], context) : 0.0;
  return {re, im};
}

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string amplitude_text(std::complex<double> a) {
  if (a.imag() == 0.0) return real_text(a.real());
  return real_text(a.real()) + "," + real_text(a.imag());
}

} // namespace

FieldSpec parse_field_spec(std::string_view text) {
  const auto parts = split(text, ':');
  const auto kind = parts[0];
  if (kind == "fock" && parts.size() == 2) {
    unsigned n0 = 0;
    const auto tok = parts[1];
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n0);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
      throw InvalidInput("field spec '" + std::string(text) +
                         "': photon number must be a non-negative integer");
    return FieldSpec::fock(n0);
  }
  if (kind == "coherent" && parts.size() == 2)
    return FieldSpec::coherent(parse_amplitude(parts[1], text));
  if (kind == "cat" && parts.size() == 3)
    return FieldSpec::cat(parse_amplitude(parts[1], text),
                          parse_phase(parts[2], text));
  throw InvalidInput("field spec '" + std::string(text) +
                     "': expected fock:<n>, coherent:<re>[,<im>] or "
                     "cat:<re>[,<im>]:<phi>");
}

std::string to_string(const FieldSpec& spec) {
  struct Visitor {
    std::string operator()(const FockField& f) const {
      return "fock:" + std::to_string(f.n0);
    }
    std::string operator()(const CoherentField& f) const {
      return "coherent:" + amplitude_text(f.alpha);
    }
    std::string operator()(const CatField& f) const {
      std::string phase;
      if (f.phi == std::numbers::pi)
        phase = "pi";
      else if (f.phi == -std::numbers::pi)
        phase = "-pi";
      else
        phase = real_text(f.phi);
      return "cat:" + amplitude_text(f.alpha) + ":" + phase;
    }
  };
  return std::visit(Visitor{}, spec.kind);
}

} // namespace cavityline
