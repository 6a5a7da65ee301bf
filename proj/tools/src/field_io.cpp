#include "hgamma/tools/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hgamma/errors.hpp"

namespace hgamma::tools {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string header(int n, bool with_z) {
  std::string h;
  for (int i = 1; i <= 2 * n; ++i) h += "eta" + std::to_string(i) + ",";
  h += "t,";
  if (with_z) h += "z,";
  return h + "value\n";
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const ScalarField& f) {
  f.validate();
  const Lattice lat(f.spec);
  auto out = open_out(path);
  out << header(f.spec.n, false);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    for (double c : lat.coords(i)) out << fmt(c) << ',';
    out << fmt(f.values[i]) << '\n';
  }
}

void write_field_csv(const std::filesystem::path& path, const CylinderField& f) {
  f.validate();
  const Lattice lat(f.spec);
  auto out = open_out(path);
  out << header(f.spec.n, true);
  for (std::size_t l = 0; l < f.z.size(); ++l)
    for (std::size_t i = 0; i < lat.size(); ++i) {
      for (double c : lat.coords(i)) out << fmt(c) << ',';
      out << fmt(f.z[l]) << ',' << fmt(f.at(i, l)) << '\n';
    }
}

FieldTable read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  FieldTable t;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
  std::stringstream hs(line);
  for (std::string c; std::getline(hs, c, ',');) t.columns.push_back(c);
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) {
      try {
        row.push_back(c == "nan" ? std::nan("") : std::stod(c));
      } catch (const std::exception&) {
        throw ConfigError(path.string() + ":" + std::to_string(number) + ": bad number '" + c + "'");
      }
    }
    if (row.size() != t.columns.size())
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": wrong column count");
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_pgm(const std::filesystem::path& path, int width, int height, const std::vector<double>& values) {
  if (width <= 0 || height <= 0 || values.size() != static_cast<std::size_t>(width) * height)
    throw ConfigError("pgm size does not match the pixel count");
  auto out = open_out(path, true);
  out << "P5\n" << width << ' ' << height << "\n255\n";
  std::vector<unsigned char> px(values.size());
  std::transform(values.begin(), values.end(), px.begin(), [](double v) {
    const double c = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    return static_cast<unsigned char>(std::lround(255.0 * c));
  });
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

PgmImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  int maxval = 0;
  PgmImage img;
  in >> magic >> img.width >> img.height >> maxval;
  if (!in || magic != "P5" || maxval != 255) throw ConfigError(path.string() + ": not an 8-bit P5 image");
  in.get();
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!in) throw ConfigError(path.string() + ": truncated image");
  return img;
}

std::vector<std::filesystem::path> dump_field(const CylinderField& f, const std::filesystem::path& dir,
                                              const std::string& stem, const std::string& format) {
  std::vector<std::filesystem::path> written;
  if (format == "none") return written;
  if (format == "csv" || format == "both") {
    written.push_back(dir / (stem + ".csv"));
    write_field_csv(written.back(), f);
  }
  if (format == "pgm" || format == "both") {
    if (f.spec.n != 1) throw ConfigError("pgm slices need n = 1");
    const Lattice lat(f.spec);
    const int w = f.spec.eta_extent();
    for (std::size_t l = 0; l < f.z.size(); ++l) {
      std::vector<double> px(static_cast<std::size_t>(w) * w);
      for (int r = 0; r < w; ++r)
        for (int c = 0; c < w; ++c) {
          const NodeIndex ix{{c - f.spec.eta_cells, f.spec.eta_cells - r}, 0};
          px[static_cast<std::size_t>(r) * w + c] = f.at(lat.index(ix), l);
        }
      written.push_back(dir / (stem + "_z" + std::to_string(l) + ".pgm"));
      write_pgm(written.back(), w, w, px);
    }
  }
  if (written.empty()) throw ConfigError("unknown field format '" + format + "'");
  return written;
}

}  // namespace hgamma::tools
