#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "arstack/estimate.hpp"
#include "arstack/raster.hpp"
#include "arstack/stack.hpp"

namespace arstack {

enum class ThresholdMode {
  one_sided,  // diff >= lambda
  two_sided,  // |diff - mu| >= c * sigma
};

struct ThresholdSpec {
  double c = 0.0;
  double mu_hat = 0.0;
  double sigma_hat = 1.0;
  double lambda = 0.0;  // mu_hat + c * sigma_hat
  ThresholdMode mode = ThresholdMode::one_sided;
};

/// Mean and standard deviation (denominator N) of one or more rasters,
/// accumulated in double.
struct PixelMoments {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

PixelMoments pixel_moments(std::span<const Raster> rasters);

/// Threshold from the statistics of a single difference image.
/// Throws DegenerateInput when the image is constant.
ThresholdSpec make_threshold(const Raster& diff, double c,
                             ThresholdMode mode = ThresholdMode::one_sided);

/// Threshold from moments pooled over several difference images.
ThresholdSpec make_threshold(const PixelMoments& moments, double c,
                             ThresholdMode mode = ThresholdMode::one_sided);

class BinaryMask {
public:
  BinaryMask() = default;
  BinaryMask(std::size_t width, std::size_t height, bool fill = false);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool test(std::size_t x, std::size_t y) const noexcept { return bits_[y * width_ + x] != 0; }
  void set(std::size_t x, std::size_t y, bool value = true) noexcept {
    bits_[y * width_ + x] = value ? 1 : 0;
  }

  std::size_t count() const noexcept;
  /// Every set bit of *this is also set in `other`.
  bool subset_of(const BinaryMask& other) const noexcept;

  /// One byte per pixel, 0 or 1.
  std::span<const std::uint8_t> bytes() const noexcept { return bits_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> bits_;
};

BinaryMask threshold(const Raster& diff, const ThresholdSpec& spec);

/// Square structuring element of side 2*radius+1; pixels outside the image
/// count as background.  radius 0 is the identity.
BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask dilate(const BinaryMask& mask, int radius);
/// Erosion followed by dilation with the same element.
BinaryMask morph_open(const BinaryMask& mask, int radius);

struct Detection {
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  std::size_t pixel_count = 0;
  double peak_value = 0.0;
};

/// 8-connected components of `mask` with at least `min_cluster_size`
/// pixels, ordered by descending peak value, then centroid row, then
/// centroid column.
std::vector<Detection> cluster(const BinaryMask& mask, const Raster& diff,
                               std::size_t min_cluster_size);

struct DetectParams {
  double c = 4.5;
  int se_radius = 1;
  std::size_t min_cluster_size = 2;
  ThresholdMode mode = ThresholdMode::one_sided;
  /// Use moments pooled over all difference images instead of per image.
  bool pooled_stats = false;
};

struct LayerDetections {
  std::string label;
  ThresholdSpec spec;
  BinaryMask mask;  // after opening
  std::vector<Detection> detections;
};

/// threshold -> morph_open -> cluster on one difference image.
LayerDetections detect_layer(const std::string& label, const Raster& diff,
                             const ThresholdSpec& spec, const DetectParams& params);

/// Difference images of every stack layer against the ground estimate.
std::vector<Raster> difference_images(const ImageStack& stack, const GroundEstimate& ground,
                                      unsigned threads = 0);

/// Full detection over every layer of the stack.  Layers are processed in
/// parallel; the result is in layer order.
std::vector<LayerDetections> detect_stack(const ImageStack& stack,
                                          std::span<const Raster> diffs,
                                          const DetectParams& params, unsigned threads = 0);

/// Header `layer_label,centroid_x,centroid_y,pixel_count,peak_value`.
std::string detections_csv(std::span<const LayerDetections> layers);
/// Inverse of detections_csv; only `label` and `detections` are filled in.
/// Layers appear in first-seen order.
std::vector<LayerDetections> load_detections(const std::filesystem::path& path);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;
};

/// Equal-width histogram over [mu - 8 sigma, mu + 8 sigma]; values outside
/// are clamped into the end bins.
Histogram difference_histogram(const Raster& diff, const PixelMoments& moments,
                               std::size_t bins = 256);
std::string histogram_csv(const Histogram& h);

}  // namespace arstack
