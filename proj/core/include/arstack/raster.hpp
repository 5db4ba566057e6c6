#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace arstack {

/// Single-channel row-major raster of 32-bit samples.
///
/// Amplitude rasters are non-negative; difference rasters may be negative,
/// so the class itself only requires finite values where it checks at all.
class Raster {
public:
  Raster() = default;
  Raster(std::size_t width, std::size_t height, double pixel_area_m2, float fill = 0.0f);
  Raster(std::size_t width, std::size_t height, double pixel_area_m2, std::vector<float> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  double pixel_area_m2() const noexcept { return pixel_area_m2_; }
  double area_km2() const noexcept;

  float at(std::size_t x, std::size_t y) const noexcept { return pixels_[y * width_ + x]; }
  float& at(std::size_t x, std::size_t y) noexcept { return pixels_[y * width_ + x]; }

  std::span<const float> pixels() const noexcept { return pixels_; }
  std::span<float> pixels() noexcept { return pixels_; }

  /// Same width, height and pixel area.
  bool same_geometry(const Raster& other) const noexcept;

  friend bool operator==(const Raster&, const Raster&) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  double pixel_area_m2_ = 1.0;
  std::vector<float> pixels_;
};

}  // namespace arstack
