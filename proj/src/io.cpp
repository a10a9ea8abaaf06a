#include "mrecon/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace mrecon::io {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  return is;
}

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_doubles(std::ostream& os, std::span<const double> values) {
  std::vector<unsigned char> bytes(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Vector read_doubles(std::istream& is, std::size_t count, const fs::path& path) {
  std::vector<unsigned char> bytes(count * 8);
  is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(is.gcount()) != bytes.size()) {
    throw IoError("'" + path.string() + "': truncated data section");
  }
  Vector out(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[i * 8 + b]) << (8 * b);
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

std::string read_line(std::istream& is, const fs::path& path) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("'" + path.string() + "': truncated header");
  return line;
}

// Next whitespace-delimited PGM header token, skipping # comments.
std::string pgm_token(std::istream& is, const fs::path& path) {
  std::string tok;
  while (true) {
    const int c = is.get();
    if (c == EOF) break;
    if (c == '#') {
      std::string dummy;
      std::getline(is, dummy);
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw IoError("'" + path.string() + "': malformed PGM header");
  return tok;
}

struct Gray {
  int width = 0;
  int height = 0;
  std::vector<int> values;
};

Gray read_pgm(const fs::path& path) {
  auto is = open_in(path);
  const std::string magic = pgm_token(is, path);
  if (magic != "P2" && magic != "P5") throw IoError("'" + path.string() + "': not a PGM file");
  Gray g;
  int maxval = 0;
  try {
    g.width = std::stoi(pgm_token(is, path));
    g.height = std::stoi(pgm_token(is, path));
    maxval = std::stoi(pgm_token(is, path));
  } catch (const std::logic_error&) {
    throw IoError("'" + path.string() + "': malformed PGM header");
  }
  if (g.width < 1 || g.height < 1 || maxval < 1 || maxval > 65535) {
    throw IoError("'" + path.string() + "': invalid PGM dimensions");
  }
  const std::size_t count = static_cast<std::size_t>(g.width) * g.height;
  g.values.resize(count);
  if (magic == "P2") {
    for (auto& v : g.values) {
      if (!(is >> v)) throw IoError("'" + path.string() + "': truncated PGM data");
    }
  } else {
    const int bpp = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(count * bpp);
    is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(is.gcount()) != raw.size()) {
      throw IoError("'" + path.string() + "': truncated PGM data");
    }
    for (std::size_t i = 0; i < count; ++i) {
      g.values[i] = bpp == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
    }
  }
  return g;
}

void write_pgm(const fs::path& path, int side, const std::vector<unsigned char>& gray) {
  auto os = open_out(path);
  os << "P5\n" << side << " " << side << "\n255\n";
  os.write(reinterpret_cast<const char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

void write_image(const fs::path& path, const Image& image) {
  auto os = open_out(path);
  os << "MRIMG1\n" << image.side() << " " << image.side() << "\n";
  write_doubles(os, image.pixels());
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

Image read_image(const fs::path& path) {
  auto is = open_in(path);
  if (read_line(is, path) != "MRIMG1") throw IoError("'" + path.string() + "': not an MRIMG1 file");
  std::istringstream dims(read_line(is, path));
  int w = 0;
  int h = 0;
  if (!(dims >> w >> h) || w < 1 || w != h) {
    throw IoError("'" + path.string() + "': expected a square image header");
  }
  return Image(w, read_doubles(is, static_cast<std::size_t>(w) * h, path));
}

void write_sinogram(const fs::path& path, const ct::Sinogram& s) {
  s.validate();
  auto os = open_out(path);
  os << "MRSINO1\n"
     << s.projections() << " " << s.detectors.count << " " << real(s.detectors.pitch) << " "
     << real(s.detectors.origin) << "\n";
  for (int k = 0; k < s.projections(); ++k) os << (k ? " " : "") << real(s.angles[k]);
  os << "\n";
  write_doubles(os, s.data);
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

ct::Sinogram read_sinogram(const fs::path& path) {
  auto is = open_in(path);
  if (read_line(is, path) != "MRSINO1") {
    throw IoError("'" + path.string() + "': not an MRSINO1 file");
  }
  std::istringstream head(read_line(is, path));
  int k = 0;
  ct::Sinogram s;
  if (!(head >> k >> s.detectors.count >> s.detectors.pitch >> s.detectors.origin) || k < 1) {
    throw IoError("'" + path.string() + "': malformed sinogram header");
  }
  std::istringstream angles(read_line(is, path));
  s.angles.resize(k);
  for (auto& a : s.angles) {
    if (!(angles >> a)) throw IoError("'" + path.string() + "': angle list too short");
  }
  s.data = read_doubles(is, static_cast<std::size_t>(k) * s.detectors.count, path);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  }
  return s;
}

void write_mask_pgm(const fs::path& path, const Mask& mask) {
  std::vector<unsigned char> gray(mask.pixel_count());
  const auto m = mask.membership();
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = m[i] ? 255 : 0;
  write_pgm(path, mask.side(), gray);
}

Mask read_mask_pgm(const fs::path& path) {
  const Gray g = read_pgm(path);
  if (g.width != g.height) throw IoError("'" + path.string() + "': mask must be square");
  std::vector<std::uint8_t> m(g.values.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = g.values[i] != 0 ? 1 : 0;
  try {
    return Mask(g.width, std::move(m));
  } catch (const std::invalid_argument& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  }
}

void write_image_pgm(const fs::path& path, const Image& image, double lo, double hi) {
  std::vector<unsigned char> gray(image.size());
  const double span = hi > lo ? hi - lo : 1.0;
  const auto px = image.pixels();
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const double v = std::clamp((px[i] - lo) / span, 0.0, 1.0);
    gray[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  write_pgm(path, image.side(), gray);
}

Image read_any_image(const fs::path& path) {
  std::string magic;
  {
    auto is = open_in(path);
    std::getline(is, magic);
  }
  if (magic == "MRIMG1") return read_image(path);
  const Gray g = read_pgm(path);
  if (g.width != g.height) throw IoError("'" + path.string() + "': image must be square");
  Vector px(g.values.begin(), g.values.end());
  return Image(g.width, std::move(px));
}

}  // namespace mrecon::io
