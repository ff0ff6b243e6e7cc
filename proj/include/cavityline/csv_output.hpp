#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cavityline/lineshape.hpp"

namespace cavityline {

/// Formats a real with 15 significant digits ("nan" / "inf" spelled out).
std::string format_real(double value);

/// `# key=value` provenance lines written ahead of the CSV header.
struct CsvMetadata {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value);
  void add(std::string key, double value);
  void write(std::ostream& out) const;
};

/// `#` metadata (field, chi, g, atom_init, truncation), then `delta,value`.
void write_csv(std::ostream& out, const LineShape& shape);

/// `#` metadata, then `alpha,delta,diff`. Missing rows become a
/// `# missing alpha=...` line.
void write_csv(std::ostream& out, const DiscriminationMap& map);

/// Writes through a sibling temporary file and renames it into place.
/// Throws Error if the file cannot be written.
void write_file_atomically(const std::string& path, std::string_view content);

} // namespace cavityline
