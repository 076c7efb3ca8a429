#include "spdc_cli/grid_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "spdc/atomic_file.hpp"
#include "spdc/errors.hpp"

namespace spdc::cli {
namespace {

constexpr const char* kModule = "cli";
constexpr const char* kMagic = "GRD1";

void require_finite(const GridData& g) {
  for (double v : g.values) {
    if (!std::isfinite(v)) throw DomainError(kModule, "refusing to write non-finite values");
  }
  std::size_t n = 1;
  for (auto s : g.shape) n *= s;
  if (n != g.values.size() || g.shape.size() != g.axes.size()) {
    throw DomainError(kModule, "grid shape, axes and values disagree");
  }
}

void require_2d(const GridData& g, const char* format) {
  if (g.shape.size() != 2) throw DomainError(kModule, std::string(format) + " output needs a 2D array");
}

double coordinate(const GridData& g, std::size_t axis, std::size_t k) {
  return (static_cast<double>(k) - static_cast<double>(g.shape[axis] / 2)) * g.axes[axis].bin_width;
}

}  // namespace

GridData grid_from(const Distribution& dist, std::string fingerprint) {
  GridData g;
  g.shape = dist.shape();
  for (const auto& a : dist.axes()) g.axes.push_back({a.name, a.bin_width, a.unit});
  g.values.assign(dist.values().begin(), dist.values().end());
  g.fingerprint = std::move(fingerprint);
  return g;
}

void write_grd(const GridData& grid, const std::filesystem::path& path) {
  require_finite(grid);
  nlohmann::json header = {{"magic", kMagic},
                           {"shape", grid.shape},
                           {"dtype", "float64le"},
                           {"order", "row-major"},
                           {"fingerprint", grid.fingerprint}};
  for (const auto& a : grid.axes) {
    header["axes"].push_back(a.name);
    header["bin_widths"].push_back(a.bin_width);
    header["units"].push_back(a.unit);
  }
  write_atomically(path, [&](std::ostream& out) {
    out << header.dump() << '\n';
    std::vector<unsigned char> bytes(grid.values.size() * 8);
    for (std::size_t k = 0; k < grid.values.size(); ++k) {
      const auto bits = std::bit_cast<std::uint64_t>(grid.values[k]);
      for (int b = 0; b < 8; ++b) bytes[8 * k + b] = static_cast<unsigned char>(bits >> (8 * b));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  });
}

GridData read_grd(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(kModule, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError(kModule, path.string() + ": missing GRD1 header");
  GridData g;
  try {
    const auto header = nlohmann::json::parse(line);
    if (header.at("magic").get<std::string>() != kMagic) {
      throw IoError(kModule, path.string() + ": not a GRD1 file");
    }
    g.shape = header.at("shape").get<std::vector<std::size_t>>();
    const auto names = header.at("axes").get<std::vector<std::string>>();
    const auto widths = header.at("bin_widths").get<std::vector<double>>();
    const auto units = header.at("units").get<std::vector<std::string>>();
    if (names.size() != g.shape.size() || widths.size() != names.size() || units.size() != names.size()) {
      throw IoError(kModule, path.string() + ": inconsistent axis metadata");
    }
    for (std::size_t a = 0; a < names.size(); ++a) g.axes.push_back({names[a], widths[a], units[a]});
    g.fingerprint = header.at("fingerprint").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(kModule, path.string() + ": bad GRD1 header: " + e.what());
  }
  std::size_t n = 1;
  for (auto s : g.shape) n *= s;
  std::vector<unsigned char> bytes(n * 8);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
    throw IoError(kModule, path.string() + ": truncated GRD1 data");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IoError(kModule, path.string() + ": trailing bytes after GRD1 data");
  }
  g.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[8 * k + b]) << (8 * b);
    g.values[k] = std::bit_cast<double>(bits);
  }
  return g;
}

void write_csv(const GridData& grid, const std::filesystem::path& path) {
  require_finite(grid);
  require_2d(grid, "CSV");
  write_atomically(path, [&](std::ostream& out) {
    out << std::setprecision(17);
    out << "# fingerprint " << grid.fingerprint << "; rows " << grid.axes[0].name << " ["
        << grid.axes[0].unit << "], columns " << grid.axes[1].name << " [" << grid.axes[1].unit
        << "]\n";
    out << grid.axes[0].name << "\\" << grid.axes[1].name;
    for (std::size_t c = 0; c < grid.shape[1]; ++c) out << ',' << coordinate(grid, 1, c);
    out << '\n';
    for (std::size_t r = 0; r < grid.shape[0]; ++r) {
      out << coordinate(grid, 0, r);
      for (std::size_t c = 0; c < grid.shape[1]; ++c) out << ',' << grid.values[r * grid.shape[1] + c];
      out << '\n';
    }
  });
}

void write_pgm(const GridData& grid, const std::filesystem::path& path) {
  require_finite(grid);
  require_2d(grid, "PGM");
  const double peak = *std::max_element(grid.values.begin(), grid.values.end());
  std::vector<unsigned char> pixels(grid.values.size(), 0);
  if (peak > 0.0) {
    for (std::size_t k = 0; k < pixels.size(); ++k) {
      const double v = std::clamp(grid.values[k] / peak, 0.0, 1.0);
      pixels[k] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
  }
  write_atomically(path, [&](std::ostream& out) {
    out << "P5\n# fingerprint " << grid.fingerprint << '\n'
        << grid.shape[1] << ' ' << grid.shape[0] << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  });
}

}  // namespace spdc::cli
