#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "arstack/raster.hpp"
#include "arstack/timeseries.hpp"

namespace arstack {

/// Co-registered layers in temporal order.  Layer index n is sample n of
/// every pixel series.
class ImageStack {
public:
  /// Throws InvalidArgument unless there are >= 2 layers sharing geometry
  /// and one label per layer.
  ImageStack(std::vector<Raster> layers, std::vector<std::string> labels);

  std::size_t size() const noexcept { return layers_.size(); }
  std::size_t width() const noexcept { return layers_.front().width(); }
  std::size_t height() const noexcept { return layers_.front().height(); }
  double pixel_area_m2() const noexcept { return layers_.front().pixel_area_m2(); }

  const Raster& layer(std::size_t i) const { return layers_.at(i); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<Raster>& layers() const noexcept { return layers_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> find_label(const std::string& label) const;

  /// Copies the samples at (x, y) into `out` (resized to size()).
  void gather(std::size_t x, std::size_t y, std::vector<double>& out) const;

private:
  std::vector<Raster> layers_;
  std::vector<std::string> labels_;
};

/// Length-N series at (x, y).  Throws InvalidArgument when out of bounds.
Series pixel_series(const ImageStack& stack, std::size_t x, std::size_t y);

/// Reads a stack manifest (JSON) and every raster it lists.  Raster paths
/// are resolved relative to the manifest's directory.
ImageStack load_stack(const std::filesystem::path& manifest_path);

/// Writes each layer as `<prefix><index>.raw` next to the manifest and a
/// manifest referencing them.
void save_stack(const std::filesystem::path& manifest_path, const ImageStack& stack,
                const std::string& raster_prefix = "layer_");

/// Headerless little-endian float32, row-major.
Raster read_raw_raster(const std::filesystem::path& path, std::size_t width,
                       std::size_t height, double pixel_area_m2);
void write_raw_raster(const std::filesystem::path& path, const Raster& raster);

/// Binary PGM (P5).  Samples are scaled by 1/maxval into [0, 1].
Raster read_pgm(const std::filesystem::path& path, double pixel_area_m2);

}  // namespace arstack
