#include "tubal/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tubal/errors.hpp"

namespace tubal::io {

namespace {

namespace fs = std::filesystem;

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open for reading: " + path);
  in.seekg(0, std::ios::end);
  const std::streamoff len = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> buf(static_cast<std::size_t>(len));
  if (len > 0) in.read(reinterpret_cast<char*>(buf.data()), len);
  if (!in) throw Error("read failed: " + path);
  return buf;
}

// .t3b payloads are little-endian on disk regardless of host order.
template <class T>
T load_le(const unsigned char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&v);
    std::reverse(b, b + sizeof(T));
  }
  return v;
}

template <class T>
void store_le(T v, unsigned char* p) {
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&v);
    std::reverse(b, b + sizeof(T));
  }
  std::memcpy(p, &v, sizeof(T));
}

constexpr char kMagic[4] = {'T', '3', 'B', '1'};
constexpr std::size_t kHeaderBytes = 4 + 3 * 8;
constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 31;

}  // namespace

Tensor3 load_tensor(const std::string& path) {
  const std::vector<unsigned char> buf = read_file(path);
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw FormatError(path + ": not a .t3b file (bad magic)",
                      buf.size() < 4 ? buf.size() : 0);
  if (buf.size() < kHeaderBytes)
    throw FormatError(path + ": truncated header", buf.size());
  std::uint64_t dims[3];
  std::uint64_t total = 1;
  for (int d = 0; d < 3; ++d) {
    dims[d] = load_le<std::uint64_t>(buf.data() + 4 + 8 * d);
    if (dims[d] == 0 || dims[d] > kMaxEntries)
      throw FormatError(path + ": dimension " + std::to_string(d + 1) +
                            " out of range",
                        4 + 8 * static_cast<std::size_t>(d));
    total *= dims[d];
    if (total > kMaxEntries)
      throw FormatError(path + ": entry count overflows",
                        4 + 8 * static_cast<std::size_t>(d));
  }
  const std::size_t expected =
      kHeaderBytes + 8 * static_cast<std::size_t>(total);
  if (buf.size() < expected)
    throw FormatError(path + ": truncated payload", buf.size());
  if (buf.size() > expected)
    throw FormatError(path + ": trailing bytes after payload", expected);
  Tensor3 t(static_cast<Index>(dims[0]), static_cast<Index>(dims[1]),
            static_cast<Index>(dims[2]));
  for (std::uint64_t p = 0; p < total; ++p)
    t.data()[p] = load_le<double>(buf.data() + kHeaderBytes + 8 * p);
  return t;
}

void save_tensor(const Tensor3& t, const std::string& path) {
  std::vector<unsigned char> buf(kHeaderBytes +
                                 8 * static_cast<std::size_t>(t.size()));
  std::memcpy(buf.data(), kMagic, 4);
  const std::uint64_t dims[3] = {static_cast<std::uint64_t>(t.n1()),
                                 static_cast<std::uint64_t>(t.n2()),
                                 static_cast<std::uint64_t>(t.n3())};
  for (int d = 0; d < 3; ++d) store_le(dims[d], buf.data() + 4 + 8 * d);
  for (Index p = 0; p < t.size(); ++p)
    store_le(t.data()[p],
             buf.data() + kHeaderBytes + 8 * static_cast<std::size_t>(p));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

Mask tensor_to_mask(const Tensor3& t) {
  Mask m(t.n1(), t.n2(), t.n3());
  for (Index p = 0; p < t.size(); ++p) m.set(p, t.data()[p] != 0.0);
  return m;
}

Tensor3 mask_to_tensor(const Mask& m) {
  Tensor3 t(m.n1(), m.n2(), m.n3());
  for (Index p = 0; p < t.size(); ++p) t.data()[p] = m[p] ? 1.0 : 0.0;
  return t;
}

namespace {

// Reads the next base-10 integer token of a PGM header, skipping
// whitespace and '#' comments.
std::uint64_t pgm_token(const std::string& path,
                        const std::vector<unsigned char>& buf,
                        std::size_t& pos) {
  for (;;) {
    while (pos < buf.size() && std::isspace(buf[pos])) ++pos;
    if (pos < buf.size() && buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  if (pos >= buf.size())
    throw FormatError(path + ": truncated PGM header", buf.size());
  if (!std::isdigit(buf[pos]))
    throw FormatError(path + ": expected integer in PGM header", pos);
  std::uint64_t v = 0;
  while (pos < buf.size() && std::isdigit(buf[pos])) {
    v = v * 10 + static_cast<std::uint64_t>(buf[pos] - '0');
    if (v > kMaxEntries)
      throw FormatError(path + ": PGM header value out of range", pos);
    ++pos;
  }
  return v;
}

struct PgmImage {
  Index width = 0, height = 0;
  std::vector<unsigned char> pixels;  // row-major
};

PgmImage load_pgm(const std::string& path) {
  const std::vector<unsigned char> buf = read_file(path);
  if (buf.size() < 2 || buf[0] != 'P' || buf[1] != '5')
    throw FormatError(path + ": not a binary PGM (expected P5)", 0);
  std::size_t pos = 2;
  const std::uint64_t w = pgm_token(path, buf, pos);
  const std::uint64_t h = pgm_token(path, buf, pos);
  const std::size_t maxval_at = pos;
  const std::uint64_t maxval = pgm_token(path, buf, pos);
  if (w == 0 || h == 0)
    throw FormatError(path + ": zero PGM dimension", 2);
  if (w * h > kMaxEntries)
    throw FormatError(path + ": PGM raster too large", 2);
  if (maxval != 255)
    throw FormatError(path + ": only 8-bit PGM (maxval 255) is supported",
                      maxval_at);
  if (pos >= buf.size() || !std::isspace(buf[pos]))
    throw FormatError(path + ": missing whitespace before PGM raster", pos);
  ++pos;  // exactly one whitespace byte separates header and raster
  const std::size_t raster = static_cast<std::size_t>(w * h);
  if (buf.size() < pos + raster)
    throw FormatError(path + ": truncated PGM raster", buf.size());
  if (buf.size() > pos + raster)
    throw FormatError(path + ": trailing bytes after PGM raster",
                      pos + raster);
  PgmImage img;
  img.width = static_cast<Index>(w);
  img.height = static_cast<Index>(h);
  img.pixels.assign(buf.begin() + static_cast<std::ptrdiff_t>(pos),
                    buf.end());
  return img;
}

}  // namespace

Tensor3 load_image_stack(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm") files.push_back(entry.path().string());
  }
  if (files.empty())
    throw InvalidConfig("load_image_stack: no .pgm files in " + dir);
  std::sort(files.begin(), files.end());
  std::vector<PgmImage> images;
  images.reserve(files.size());
  for (const std::string& f : files) {
    images.push_back(load_pgm(f));
    if (images.back().width != images.front().width ||
        images.back().height != images.front().height)
      throw InconsistentStack("load_image_stack: " + f + " is " +
                              std::to_string(images.back().width) + "x" +
                              std::to_string(images.back().height) +
                              ", expected " +
                              std::to_string(images.front().width) + "x" +
                              std::to_string(images.front().height));
  }
  const Index h = images.front().height;
  const Index w = images.front().width;
  Tensor3 t(h, w, static_cast<Index>(images.size()));
  for (std::size_t k = 0; k < images.size(); ++k)
    for (Index i = 0; i < h; ++i)
      for (Index j = 0; j < w; ++j)
        t(i, j, static_cast<Index>(k)) =
            static_cast<double>(
                images[k].pixels[static_cast<std::size_t>(i * w + j)]) /
            255.0;
  return t;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void write_grid_csv(const synth::SuccessGrid& grid, const std::string& path) {
  if (grid.cells.size() != grid.axis1.size() * grid.axis2.size())
    throw InvalidConfig("write_grid_csv: cell count does not match axes");
  std::string out;
  for (double rate : grid.axis2) out += "," + format_double(rate);
  out += "\n";
  for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
    out += std::to_string(grid.axis1[i]);
    for (std::size_t j = 0; j < grid.axis2.size(); ++j)
      out += "," + format_double(grid.cell(i, j));
    out += "\n";
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  f.flush();
  if (!f) throw Error("write failed: " + path);
}

void write_manifest(const RunManifest& m, const std::string& path) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["inputs"] = m.inputs;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [key, value] : m.config) cfg[key] = value;
  j["config"] = cfg;
  j["seed"] = m.seed;
  j["version"] = m.version;
  j["duration_seconds"] = m.duration_seconds;
  j["outputs"] = m.outputs;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open for writing: " + tmp);
    const std::string text = j.dump(2) + "\n";
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.flush();
    if (!f) throw Error("write failed: " + tmp);
  }
  fs::rename(tmp, path);
}

}  // namespace tubal::io
