#include "cavityline/csv_output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <unistd.h>

#include "cavityline/errors.hpp"

namespace cavityline {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

void CsvMetadata::add(std::string key, std::string value) {
  entries.emplace_back(std::move(key), std::move(value));
}

void CsvMetadata::add(std::string key, double value) {
  entries.emplace_back(std::move(key), format_real(value));
}

void CsvMetadata::write(std::ostream& out) const {
  for (const auto& [key, value] : entries) out << "# " << key << '=' << value << '\n';
}

namespace {

void add_truncation(CsvMetadata& meta, const TruncationPolicy& trunc) {
  meta.add("trunc_eps_tail", trunc.eps_tail);
  meta.add("trunc_min_n_max", std::to_string(trunc.min_n_max));
  meta.add("trunc_sigma_multiple", trunc.sigma_multiple);
  meta.add("trunc_eps_norm", trunc.eps_norm);
}

} // namespace

void write_csv(std::ostream& out, const LineShape& shape) {
  CsvMetadata meta;
  meta.add("field", to_string(shape.field));
  meta.add("chi", shape.stark);
  meta.add("g", shape.coupling);
  meta.add("atom_init", std::string(to_string(shape.atom_init)));
  add_truncation(meta, shape.truncation);
  meta.add("n_max", std::to_string(shape.n_max));
  meta.write(out);
  out << "delta,value\n";
  for (std::size_t j = 0; j < shape.deltas.size(); ++j)
    out << format_real(shape.deltas[j]) << ',' << format_real(shape.values[j])
        << '\n';
}

void write_csv(std::ostream& out, const DiscriminationMap& map) {
  CsvMetadata meta;
  meta.add("field", "cat:<alpha>:0 minus cat:<alpha>:pi");
  meta.add("chi", map.stark);
  meta.add("g", map.coupling);
  meta.add("atom_init", std::string(to_string(map.atom_init)));
  add_truncation(meta, map.truncation);
  meta.add("alpha_floor", map.alpha_floor);
  meta.write(out);
  out << "alpha,delta,diff\n";
  for (std::size_t i = 0; i < map.alphas.size(); ++i) {
    if (!map.diff[i]) {
      out << "# missing alpha=" << format_real(map.alphas[i])
          << " (odd cat below normalization floor)\n";
      continue;
    }
    const auto& row = *map.diff[i];
    for (std::size_t j = 0; j < map.deltas.size(); ++j)
      out << format_real(map.alphas[i]) << ',' << format_real(map.deltas[j])
          << ',' << format_real(row[j]) << '\n';
  }
}

void write_file_atomically(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into place at '" + path + "'");
  }
}

} // namespace cavityline
