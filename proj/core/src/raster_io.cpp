#include "specmcd/raster_io.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace specmcd {
namespace {

using nlohmann::json;

std::string quoted(const std::filesystem::path& p) {
  return "'" + p.string() + "'";
}

std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + quoted(path) + " for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + quoted(path));
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, const void* data,
                      std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + quoted(path) + " for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw IoError("write failure on " + quoted(path));
}

struct PgmHeader {
  int width = 0;
  int height = 0;
  long maxval = 0;
  std::size_t data_offset = 0;
};

// Parses a P5 header: magic, then width/height/maxval separated by whitespace
// and optional '#' comment lines, then a single whitespace byte before data.
PgmHeader parse_pgm_header(const std::vector<unsigned char>& bytes,
                           const std::filesystem::path& path) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> void {
    throw IoError("malformed PGM " + quoted(path) + ": " + why);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    fail("missing P5 magic");
  }
  pos = 2;
  auto next_token = [&]() -> long {
    // Skip whitespace and comments.
    while (pos < bytes.size()) {
      if (std::isspace(bytes[pos])) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
      fail("truncated header");
    }
    long value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1'000'000'000L) fail("header value out of range");
      ++pos;
    }
    return value;
  };
  PgmHeader h;
  h.width = static_cast<int>(next_token());
  h.height = static_cast<int>(next_token());
  h.maxval = next_token();
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    fail("missing whitespace after maxval");
  }
  h.data_offset = pos + 1;
  if (h.width <= 0 || h.height <= 0) fail("non-positive dimensions");
  return h;
}

std::vector<std::uint16_t> read_pgm16(const std::filesystem::path& path,
                                      int expect_width, int expect_height) {
  const auto bytes = read_file_bytes(path);
  const PgmHeader h = parse_pgm_header(bytes, path);
  if (h.maxval != 65535) {
    throw IoError("band file " + quoted(path) + " has maxval " +
                  std::to_string(h.maxval) + ", expected 65535");
  }
  if (h.width != expect_width || h.height != expect_height) {
    throw IoError("band file " + quoted(path) + " is " +
                  std::to_string(h.width) + "x" + std::to_string(h.height) +
                  ", container declares " + std::to_string(expect_width) +
                  "x" + std::to_string(expect_height));
  }
  const std::size_t n =
      static_cast<std::size_t>(h.width) * static_cast<std::size_t>(h.height);
  const std::size_t need = h.data_offset + 2 * n;
  if (bytes.size() < need) {
    throw IoError("band file " + quoted(path) + " truncated");
  }
  if (bytes.size() > need) {
    throw IoError("band file " + quoted(path) + " oversized: " +
                  std::to_string(bytes.size() - need) + " trailing bytes");
  }
  std::vector<std::uint16_t> samples(n);
  const unsigned char* p = bytes.data() + h.data_offset;
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]);
  }
  return samples;
}

void write_pgm16(const std::filesystem::path& path, int width, int height,
                 const std::vector<std::uint16_t>& samples) {
  std::ostringstream header;
  header << "P5\n" << width << " " << height << "\n65535\n";
  const std::string head = header.str();
  std::vector<unsigned char> bytes;
  bytes.reserve(head.size() + samples.size() * 2);
  bytes.insert(bytes.end(), head.begin(), head.end());
  for (std::uint16_t s : samples) {
    bytes.push_back(static_cast<unsigned char>(s >> 8));
    bytes.push_back(static_cast<unsigned char>(s & 0xff));
  }
  write_file_bytes(path, bytes.data(), bytes.size());
}

json parse_json_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  json j = json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded()) {
    throw IoError("malformed JSON in " + quoted(path));
  }
  return j;
}

}  // namespace

MultibandRaster load_multiband(const std::filesystem::path& dir) {
  const auto meta_path = dir / "meta.json";
  const json meta = parse_json_file(meta_path);
  if (!meta.contains("width") || !meta.contains("height") ||
      !meta.contains("bands") || !meta["bands"].is_array()) {
    throw IoError("container " + quoted(meta_path) +
                  " must declare width, height and a bands array");
  }
  const int width = meta["width"].get<int>();
  const int height = meta["height"].get<int>();

  std::vector<Band> bands;
  for (const json& entry : meta["bands"]) {
    if (!entry.contains("name") || !entry.contains("file")) {
      throw IoError("band entry in " + quoted(meta_path) +
                    " must declare name and file");
    }
    const std::string name_text = entry["name"].get<std::string>();
    const auto name = parse_band_name(name_text);
    if (!name) {
      throw IoError("unknown band name '" + name_text + "' in " +
                    quoted(meta_path));
    }
    const auto band_path = dir / entry["file"].get<std::string>();
    if (!std::filesystem::exists(band_path)) {
      throw IoError("missing band file " + quoted(band_path));
    }
    bands.push_back(Band{*name, read_pgm16(band_path, width, height)});
  }
  try {
    return MultibandRaster(width, height, std::move(bands));
  } catch (const Error& e) {
    throw IoError("container " + quoted(dir) + " invalid: " + e.what());
  }
}

void save_multiband(const MultibandRaster& raster,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json meta;
  meta["width"] = raster.width();
  meta["height"] = raster.height();
  meta["bands"] = json::array();
  for (const Band& band : raster.bands()) {
    const std::string file = std::string(to_string(band.name)) + ".pgm";
    meta["bands"].push_back({{"name", std::string(to_string(band.name))},
                             {"file", file}});
    write_pgm16(dir / file, raster.width(), raster.height(), band.samples);
  }
  const std::string text = meta.dump(2) + "\n";
  write_file_bytes(dir / "meta.json", text.data(), text.size());
}

void save_grid(const Grid& grid, const std::filesystem::path& path,
               std::string_view role) {
  for (float v : grid.values) {
    if (!std::isfinite(v)) {
      throw IoError("grid for " + quoted(path) + " holds non-finite values");
    }
  }
  std::vector<unsigned char> bytes(grid.values.size() * 4);
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    std::uint32_t u;
    std::memcpy(&u, &grid.values[i], 4);
    bytes[4 * i + 0] = static_cast<unsigned char>(u & 0xff);
    bytes[4 * i + 1] = static_cast<unsigned char>((u >> 8) & 0xff);
    bytes[4 * i + 2] = static_cast<unsigned char>((u >> 16) & 0xff);
    bytes[4 * i + 3] = static_cast<unsigned char>((u >> 24) & 0xff);
  }
  write_file_bytes(path, bytes.data(), bytes.size());
  json sidecar;
  sidecar["width"] = grid.width;
  sidecar["height"] = grid.height;
  sidecar["role"] = std::string(role);
  const std::string text = sidecar.dump(2) + "\n";
  auto sidecar_path = path;
  sidecar_path += ".json";
  write_file_bytes(sidecar_path, text.data(), text.size());
}

Grid load_grid(const std::filesystem::path& path) {
  auto sidecar_path = path;
  sidecar_path += ".json";
  const json sidecar = parse_json_file(sidecar_path);
  if (!sidecar.contains("width") || !sidecar.contains("height")) {
    throw IoError("grid sidecar " + quoted(sidecar_path) +
                  " must declare width and height");
  }
  const int width = sidecar["width"].get<int>();
  const int height = sidecar["height"].get<int>();
  if (width <= 0 || height <= 0) {
    throw IoError("grid sidecar " + quoted(sidecar_path) +
                  " declares non-positive dimensions");
  }
  const auto bytes = read_file_bytes(path);
  const std::size_t n =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() != n * 4) {
    throw IoError("grid payload " + quoted(path) + " holds " +
                  std::to_string(bytes.size()) + " bytes, expected " +
                  std::to_string(n * 4));
  }
  Grid grid;
  grid.width = width;
  grid.height = height;
  grid.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t u = static_cast<std::uint32_t>(bytes[4 * i]) |
                      (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8) |
                      (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16) |
                      (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
    std::memcpy(&grid.values[i], &u, 4);
    if (!std::isfinite(grid.values[i])) {
      throw IoError("grid payload " + quoted(path) + " holds non-finite values");
    }
  }
  return grid;
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  std::ostringstream header;
  header << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  const std::string head = header.str();
  std::vector<unsigned char> bytes;
  bytes.reserve(head.size() + mask.values.size());
  bytes.insert(bytes.end(), head.begin(), head.end());
  for (std::uint8_t v : mask.values) {
    bytes.push_back(v ? 255 : 0);
  }
  write_file_bytes(path, bytes.data(), bytes.size());
}

BinaryMask load_mask(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const PgmHeader h = parse_pgm_header(bytes, path);
  if (h.maxval != 255) {
    throw IoError("mask file " + quoted(path) + " has maxval " +
                  std::to_string(h.maxval) + ", expected 255");
  }
  const std::size_t n =
      static_cast<std::size_t>(h.width) * static_cast<std::size_t>(h.height);
  const std::size_t need = h.data_offset + n;
  if (bytes.size() < need) {
    throw IoError("mask file " + quoted(path) + " truncated");
  }
  if (bytes.size() > need) {
    throw IoError("mask file " + quoted(path) + " oversized: " +
                  std::to_string(bytes.size() - need) + " trailing bytes");
  }
  BinaryMask mask = BinaryMask::zeros(h.width, h.height);
  const unsigned char* p = bytes.data() + h.data_offset;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] == 0) {
      mask.values[i] = 0;
    } else if (p[i] == 255) {
      mask.values[i] = 1;
    } else {
      throw IoError("mask file " + quoted(path) + " holds sample value " +
                    std::to_string(p[i]) + "; only 0 and 255 are allowed");
    }
  }
  return mask;
}

}  // namespace specmcd
