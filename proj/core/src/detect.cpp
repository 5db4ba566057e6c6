#include "arstack/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "arstack/errors.hpp"
#include "arstack/io.hpp"
#include "arstack/parallel.hpp"

namespace arstack {

// ---------------------------------------------------------------- thresholds

PixelMoments pixel_moments(std::span<const Raster> rasters) {
  PixelMoments m;
  double sum = 0.0;
  for (const auto& r : rasters) {
    for (float v : r.pixels()) sum += v;
    m.count += r.size();
  }
  if (m.count == 0) throw InvalidArgument("pixel_moments: no pixels");
  m.mean = sum / static_cast<double>(m.count);

  double ss = 0.0;
  for (const auto& r : rasters) {
    for (float v : r.pixels()) {
      const double d = static_cast<double>(v) - m.mean;
      ss += d * d;
    }
  }
  m.stddev = std::sqrt(ss / static_cast<double>(m.count));
  return m;
}

ThresholdSpec make_threshold(const PixelMoments& moments, double c, ThresholdMode mode) {
  if (!std::isfinite(c)) throw InvalidArgument("detection constant must be finite");
  if (!(moments.stddev > 0.0)) {
    throw DegenerateInput(
        "difference image has zero variance; no detection is meaningful on a constant image");
  }
  return ThresholdSpec{c, moments.mean, moments.stddev, moments.mean + c * moments.stddev, mode};
}

ThresholdSpec make_threshold(const Raster& diff, double c, ThresholdMode mode) {
  if (diff.empty()) throw InvalidArgument("make_threshold: empty difference image");
  return make_threshold(pixel_moments(std::span(&diff, 1)), c, mode);
}

// ---------------------------------------------------------------- masks

BinaryMask::BinaryMask(std::size_t width, std::size_t height, bool fill)
    : width_(width), height_(height), bits_(width * height, fill ? 1 : 0) {}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BinaryMask::subset_of(const BinaryMask& other) const noexcept {
  if (other.width_ != width_ || other.height_ != height_) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

BinaryMask threshold(const Raster& diff, const ThresholdSpec& spec) {
  BinaryMask mask(diff.width(), diff.height());
  const auto px = diff.pixels();
  const double lower = spec.mu_hat - spec.c * spec.sigma_hat;
  for (std::size_t y = 0; y < diff.height(); ++y) {
    for (std::size_t x = 0; x < diff.width(); ++x) {
      const double v = px[y * diff.width() + x];
      bool hit = v >= spec.lambda;
      if (spec.mode == ThresholdMode::two_sided) hit = hit || v <= lower;
      if (hit) mask.set(x, y);
    }
  }
  return mask;
}

namespace {

enum class MorphOp { erode, dilate };

// One separable pass of a (2r+1)-wide window along rows (horizontal) or
// columns.  Out-of-image samples are background.
BinaryMask morph_pass(const BinaryMask& in, int radius, MorphOp op, bool horizontal) {
  const std::size_t w = in.width(), h = in.height();
  const std::size_t lines = horizontal ? h : w;
  const std::size_t len = horizontal ? w : h;
  const auto r = static_cast<std::ptrdiff_t>(radius);
  const auto n = static_cast<std::ptrdiff_t>(len);

  BinaryMask out(w, h);
  std::vector<std::size_t> prefix(len + 1);
  for (std::size_t line = 0; line < lines; ++line) {
    auto at = [&](std::size_t i) {
      return horizontal ? in.test(i, line) : in.test(line, i);
    };
    prefix[0] = 0;
    for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + (at(i) ? 1 : 0);

    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const std::ptrdiff_t lo = i - r, hi = i + r;
      bool value;
      if (op == MorphOp::erode) {
        value = lo >= 0 && hi < n &&
                prefix[static_cast<std::size_t>(hi + 1)] - prefix[static_cast<std::size_t>(lo)] ==
                    static_cast<std::size_t>(2 * r + 1);
      } else {
        const auto clo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(lo, 0));
        const auto chi = static_cast<std::size_t>(std::min<std::ptrdiff_t>(hi, n - 1));
        value = prefix[chi + 1] - prefix[clo] > 0;
      }
      if (value) {
        const auto idx = static_cast<std::size_t>(i);
        horizontal ? out.set(idx, line) : out.set(line, idx);
      }
    }
  }
  return out;
}

BinaryMask morph(const BinaryMask& mask, int radius, MorphOp op) {
  if (radius < 0) throw InvalidArgument("structuring element radius must be >= 0");
  if (radius == 0 || mask.size() == 0) return mask;
  return morph_pass(morph_pass(mask, radius, op, true), radius, op, false);
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, int radius) { return morph(mask, radius, MorphOp::erode); }

BinaryMask dilate(const BinaryMask& mask, int radius) {
  return morph(mask, radius, MorphOp::dilate);
}

BinaryMask morph_open(const BinaryMask& mask, int radius) {
  return dilate(erode(mask, radius), radius);
}

// ---------------------------------------------------------------- clustering

std::vector<Detection> cluster(const BinaryMask& mask, const Raster& diff,
                               std::size_t min_cluster_size) {
  if (mask.width() != diff.width() || mask.height() != diff.height()) {
    throw InvalidArgument("cluster: mask and difference image dimensions differ");
  }
  const std::size_t w = mask.width(), h = mask.height();
  std::vector<std::uint8_t> visited(w * h, 0);
  std::vector<std::size_t> frontier;
  std::vector<Detection> out;

  for (std::size_t start = 0; start < w * h; ++start) {
    if (visited[start] || !mask.test(start % w, start / w)) continue;
    visited[start] = 1;
    frontier.assign(1, start);

    double sum_x = 0.0, sum_y = 0.0;
    std::size_t count = 0;
    double peak = -std::numeric_limits<double>::infinity();
    while (!frontier.empty()) {
      const std::size_t idx = frontier.back();
      frontier.pop_back();
      const std::size_t x = idx % w, y = idx / w;
      sum_x += static_cast<double>(x);
      sum_y += static_cast<double>(y);
      ++count;
      peak = std::max(peak, static_cast<double>(diff.pixels()[idx]));

      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const auto nx = static_cast<std::ptrdiff_t>(x) + dx;
          const auto ny = static_cast<std::ptrdiff_t>(y) + dy;
          if (nx < 0 || ny < 0 || nx >= static_cast<std::ptrdiff_t>(w) ||
              ny >= static_cast<std::ptrdiff_t>(h)) {
            continue;
          }
          const auto nidx = static_cast<std::size_t>(ny) * w + static_cast<std::size_t>(nx);
          if (!visited[nidx] && mask.test(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny))) {
            visited[nidx] = 1;
            frontier.push_back(nidx);
          }
        }
      }
    }
    if (count >= min_cluster_size) {
      out.push_back(Detection{sum_x / static_cast<double>(count),
                              sum_y / static_cast<double>(count), count, peak});
    }
  }

  std::sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
    if (a.peak_value != b.peak_value) return a.peak_value > b.peak_value;
    if (a.centroid_y != b.centroid_y) return a.centroid_y < b.centroid_y;
    return a.centroid_x < b.centroid_x;
  });
  return out;
}

// ---------------------------------------------------------------- pipeline

LayerDetections detect_layer(const std::string& label, const Raster& diff,
                             const ThresholdSpec& spec, const DetectParams& params) {
  LayerDetections out;
  out.label = label;
  out.spec = spec;
  out.mask = morph_open(threshold(diff, spec), params.se_radius);
  out.detections = cluster(out.mask, diff, params.min_cluster_size);
  return out;
}

std::vector<Raster> difference_images(const ImageStack& stack, const GroundEstimate& ground,
                                      unsigned threads) {
  std::vector<Raster> diffs(stack.size());
  parallel_for(stack.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) diffs[i] = difference_image(stack.layer(i), ground);
  });
  return diffs;
}

std::vector<LayerDetections> detect_stack(const ImageStack& stack, std::span<const Raster> diffs,
                                          const DetectParams& params, unsigned threads) {
  if (diffs.size() != stack.size()) {
    throw InvalidArgument("detect_stack: one difference image per layer required");
  }
  std::vector<ThresholdSpec> specs(diffs.size());
  if (params.pooled_stats) {
    const auto pooled = make_threshold(pixel_moments(diffs), params.c, params.mode);
    std::fill(specs.begin(), specs.end(), pooled);
  }

  std::vector<LayerDetections> out(diffs.size());
  parallel_for(diffs.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const ThresholdSpec spec =
          params.pooled_stats ? specs[i] : make_threshold(diffs[i], params.c, params.mode);
      out[i] = detect_layer(stack.label(i), diffs[i], spec, params);
    }
  });
  return out;
}

std::string detections_csv(std::span<const LayerDetections> layers) {
  std::string out = "layer_label,centroid_x,centroid_y,pixel_count,peak_value\n";
  for (const auto& layer : layers) {
    for (const auto& d : layer.detections) {
      out += format("%s,%.4f,%.4f,%zu,%.6f\n", layer.label.c_str(), d.centroid_x, d.centroid_y,
                    d.pixel_count, d.peak_value);
    }
  }
  return out;
}

std::vector<LayerDetections> load_detections(const std::filesystem::path& path) {
  const auto rows =
      read_csv(path, {"layer_label", "centroid_x", "centroid_y", "pixel_count", "peak_value"});
  std::vector<LayerDetections> layers;
  for (const auto& row : rows) {
    auto it = std::find_if(layers.begin(), layers.end(),
                           [&](const LayerDetections& l) { return l.label == row[0]; });
    if (it == layers.end()) {
      layers.push_back(LayerDetections{row[0], {}, {}, {}});
      it = layers.end() - 1;
    }
    const double count = parse_double(row[3], "pixel_count");
    if (count < 1.0 || count != std::floor(count)) {
      throw InvalidData(path.string() + ": pixel_count must be a positive integer");
    }
    it->detections.push_back(Detection{parse_double(row[1], "centroid_x"),
                                       parse_double(row[2], "centroid_y"),
                                       static_cast<std::size_t>(count),
                                       parse_double(row[4], "peak_value")});
  }
  return layers;
}

Histogram difference_histogram(const Raster& diff, const PixelMoments& moments,
                               std::size_t bins) {
  if (bins == 0) throw InvalidArgument("histogram needs at least one bin");
  if (!(moments.stddev > 0.0)) throw DegenerateInput("histogram of a constant image");
  Histogram h{moments.mean - 8.0 * moments.stddev, moments.mean + 8.0 * moments.stddev,
              std::vector<std::uint64_t>(bins, 0)};
  const double scale = static_cast<double>(bins) / (h.hi - h.lo);
  for (float v : diff.pixels()) {
    const double pos = std::floor((static_cast<double>(v) - h.lo) * scale);
    const auto bin = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    ++h.counts[bin];
  }
  return h;
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "bin_lo,bin_hi,count\n";
  const double width = (h.hi - h.lo) / static_cast<double>(h.counts.size());
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out += format("%.6g,%.6g,%llu\n", h.lo + width * static_cast<double>(i),
                  h.lo + width * static_cast<double>(i + 1),
                  static_cast<unsigned long long>(h.counts[i]));
  }
  return out;
}

}  // namespace arstack
