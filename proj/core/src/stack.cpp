#include "arstack/stack.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "arstack/errors.hpp"
#include "arstack/io.hpp"

namespace arstack {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- Raster

Raster::Raster(std::size_t width, std::size_t height, double pixel_area_m2, float fill)
    : Raster(width, height, pixel_area_m2, std::vector<float>(width * height, fill)) {}

Raster::Raster(std::size_t width, std::size_t height, double pixel_area_m2,
               std::vector<float> pixels)
    : width_(width), height_(height), pixel_area_m2_(pixel_area_m2), pixels_(std::move(pixels)) {
  if (width == 0 || height == 0) throw InvalidArgument("raster dimensions must be positive");
  if (pixels_.size() != width * height) {
    throw InvalidArgument("raster pixel count " + std::to_string(pixels_.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  if (!(pixel_area_m2 > 0.0) || !std::isfinite(pixel_area_m2)) {
    throw InvalidArgument("pixel area must be a positive number of square meters");
  }
}

double Raster::area_km2() const noexcept {
  return static_cast<double>(pixels_.size()) * pixel_area_m2_ / 1e6;
}

bool Raster::same_geometry(const Raster& other) const noexcept {
  return width_ == other.width_ && height_ == other.height_ &&
         pixel_area_m2_ == other.pixel_area_m2_;
}

// ---------------------------------------------------------------- ImageStack

ImageStack::ImageStack(std::vector<Raster> layers, std::vector<std::string> labels)
    : layers_(std::move(layers)), labels_(std::move(labels)) {
  if (layers_.size() < 2) throw InvalidArgument("stack requires >= 2 layers");
  if (labels_.size() != layers_.size()) {
    throw InvalidArgument("stack needs exactly one label per layer");
  }
  for (std::size_t i = 1; i < layers_.size(); ++i) {
    if (!layers_[i].same_geometry(layers_[0])) {
      throw InvalidArgument("layer '" + labels_[i] + "' geometry " +
                            std::to_string(layers_[i].width()) + "x" +
                            std::to_string(layers_[i].height()) + " does not match layer '" +
                            labels_[0] + "' " + std::to_string(layers_[0].width()) + "x" +
                            std::to_string(layers_[0].height()));
    }
  }
}

std::optional<std::size_t> ImageStack::find_label(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

void ImageStack::gather(std::size_t x, std::size_t y, std::vector<double>& out) const {
  out.resize(layers_.size());
  const std::size_t idx = y * width() + x;
  for (std::size_t n = 0; n < layers_.size(); ++n) out[n] = layers_[n].pixels()[idx];
}

Series pixel_series(const ImageStack& stack, std::size_t x, std::size_t y) {
  if (x >= stack.width() || y >= stack.height()) {
    throw InvalidArgument("pixel (" + std::to_string(x) + ", " + std::to_string(y) +
                          ") outside " + std::to_string(stack.width()) + "x" +
                          std::to_string(stack.height()) + " stack");
  }
  std::vector<double> values;
  stack.gather(x, y, values);
  return Series(std::move(values));
}

// ---------------------------------------------------------------- raw rasters

namespace {

std::uint32_t to_little(std::uint32_t v) noexcept {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xff) << 24) | ((v & 0xff00) << 8) | ((v >> 8) & 0xff00) | (v >> 24);
  }
  return v;
}

bool has_extension(const fs::path& p, const char* ext) {
  auto e = p.extension().string();
  for (auto& ch : e) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return e == ext;
}

}  // namespace

Raster read_raw_raster(const fs::path& path, std::size_t width, std::size_t height,
                       double pixel_area_m2) {
  const std::string bytes = read_file(path);
  const std::size_t expected = width * height * sizeof(float);
  if (bytes.size() != expected) {
    throw LoadError(path.string() + ": expected " + std::to_string(expected) + " bytes for " +
                    std::to_string(width) + "x" + std::to_string(height) + " float32, found " +
                    std::to_string(bytes.size()));
  }
  std::vector<float> pixels(width * height);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    std::uint32_t word;
    std::memcpy(&word, bytes.data() + i * sizeof(float), sizeof(word));
    pixels[i] = std::bit_cast<float>(to_little(word));
  }
  return Raster(width, height, pixel_area_m2, std::move(pixels));
}

void write_raw_raster(const fs::path& path, const Raster& raster) {
  std::string bytes(raster.size() * sizeof(float), '\0');
  const auto px = raster.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const std::uint32_t word = to_little(std::bit_cast<std::uint32_t>(px[i]));
    std::memcpy(bytes.data() + i * sizeof(float), &word, sizeof(word));
  }
  write_file_atomic(path, bytes);
}

Raster read_pgm(const fs::path& path, double pixel_area_m2) {
  const std::string bytes = read_file(path);
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
  };
  auto next_int = [&](const char* what) -> std::size_t {
    const std::string tok = next_token();
    std::size_t value = 0;
    try {
      std::size_t used = 0;
      value = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw LoadError(path.string() + ": bad PGM " + what + " '" + tok + "'");
    }
    return value;
  };

  if (next_token() != "P5") throw LoadError(path.string() + ": not a binary PGM (P5)");
  const std::size_t width = next_int("width");
  const std::size_t height = next_int("height");
  const std::size_t maxval = next_int("maxval");
  if (width == 0 || height == 0) throw LoadError(path.string() + ": empty PGM");
  if (maxval == 0 || maxval > 65535) throw LoadError(path.string() + ": PGM maxval out of range");
  ++pos;  // single whitespace byte after maxval

  const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
  if (bytes.size() < pos + width * height * sample_bytes) {
    throw LoadError(path.string() + ": truncated PGM data");
  }
  std::vector<float> pixels(width * height);
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const unsigned v = sample_bytes == 2 ? (unsigned{data[2 * i]} << 8) | data[2 * i + 1]
                                         : unsigned{data[i]};
    pixels[i] = static_cast<float>(static_cast<double>(v) / static_cast<double>(maxval));
  }
  return Raster(width, height, pixel_area_m2, std::move(pixels));
}

// ---------------------------------------------------------------- manifests

ImageStack load_stack(const fs::path& manifest_path) {
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw LoadError(manifest_path.string() + ": invalid JSON: " + e.what());
  }

  const fs::path base = manifest_path.parent_path();
  std::vector<Raster> layers;
  std::vector<std::string> labels;
  try {
    const double area = manifest.at("pixel_area_m2").get<double>();
    if (!(area > 0.0)) throw LoadError(manifest_path.string() + ": pixel_area_m2 must be > 0");
    const auto& entries = manifest.at("layers");
    if (!entries.is_array()) throw LoadError(manifest_path.string() + ": 'layers' must be a list");
    if (entries.size() < 2) {
      throw LoadError(manifest_path.string() + ": stack requires >= 2 layers, manifest lists " +
                      std::to_string(entries.size()));
    }

    std::size_t width0 = 0, height0 = 0;
    std::string label0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      const std::string label = e.contains("label") ? e.at("label").get<std::string>()
                                                    : "layer_" + std::to_string(i);
      const auto width = e.at("width").get<std::size_t>();
      const auto height = e.at("height").get<std::size_t>();
      if (i == 0) {
        width0 = width;
        height0 = height;
        label0 = label;
      } else if (width != width0 || height != height0) {
        throw LoadError(manifest_path.string() + ": dimension mismatch: layer '" + label + "' is " +
                        std::to_string(width) + "x" + std::to_string(height) + " but layer '" +
                        label0 + "' is " + std::to_string(width0) + "x" +
                        std::to_string(height0));
      }
      for (const auto& seen : labels) {
        if (seen == label) throw LoadError(manifest_path.string() + ": duplicate layer label '" + label + "'");
      }

      fs::path path = e.at("path").get<std::string>();
      if (path.is_relative()) path = base / path;
      Raster r;
      try {
        r = has_extension(path, ".pgm") ? read_pgm(path, area)
                                        : read_raw_raster(path, width, height, area);
      } catch (const Error& err) {
        throw LoadError("layer '" + label + "': " + err.what());
      }
      if (r.width() != width || r.height() != height) {
        throw LoadError("layer '" + label + "': file is " + std::to_string(r.width()) + "x" +
                        std::to_string(r.height()) + ", manifest says " + std::to_string(width) +
                        "x" + std::to_string(height));
      }
      const auto px = r.pixels();
      for (std::size_t k = 0; k < px.size(); ++k) {
        if (!std::isfinite(px[k])) {
          throw LoadError("layer '" + label + "': non-finite pixel at (" +
                          std::to_string(k % width) + ", " + std::to_string(k / width) + ")");
        }
      }
      layers.push_back(std::move(r));
      labels.push_back(label);
    }
  } catch (const json::exception& e) {
    throw LoadError(manifest_path.string() + ": malformed manifest: " + e.what());
  }
  return ImageStack(std::move(layers), std::move(labels));
}

void save_stack(const fs::path& manifest_path, const ImageStack& stack,
                const std::string& raster_prefix) {
  const fs::path base = manifest_path.parent_path();
  json layers = json::array();
  for (std::size_t i = 0; i < stack.size(); ++i) {
    const std::string name = raster_prefix + std::to_string(i) + ".raw";
    write_raw_raster(base / name, stack.layer(i));
    layers.push_back({{"path", name},
                      {"label", stack.label(i)},
                      {"width", stack.width()},
                      {"height", stack.height()}});
  }
  json manifest = {{"pixel_area_m2", stack.pixel_area_m2()}, {"layers", layers}};
  write_file_atomic(manifest_path, manifest.dump(2) + "\n");
}

}  // namespace arstack
