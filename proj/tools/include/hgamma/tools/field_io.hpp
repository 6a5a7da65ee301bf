#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hgamma/energies.hpp"
#include "hgamma/lattice.hpp"

namespace hgamma::tools {

struct FieldTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Columns eta1..eta2n, t, value (and z for cylinder fields), values printed with %.9g.
void write_field_csv(const std::filesystem::path& path, const ScalarField& f);
void write_field_csv(const std::filesystem::path& path, const CylinderField& f);
FieldTable read_field_csv(const std::filesystem::path& path);

// Binary 8-bit PGM; values are clamped to [0, 1] and scaled to 0..255.  Row 0 is the top.
void write_pgm(const std::filesystem::path& path, int width, int height, const std::vector<double>& values);

struct PgmImage {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> pixels;
};
PgmImage read_pgm(const std::filesystem::path& path);

// Writes <stem>.csv and/or <stem>_z<l>.pgm (the t = 0 slice at each level, n = 1)
// according to format (csv, pgm, both, none).  Returns the files written.
std::vector<std::filesystem::path> dump_field(const CylinderField& f, const std::filesystem::path& dir,
                                              const std::string& stem, const std::string& format);

}  // namespace hgamma::tools
