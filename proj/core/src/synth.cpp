#include "arstack/synth.hpp"

#include <cmath>
#include <random>
#include <string>

#include <json.hpp>

#include "arstack/errors.hpp"
#include "arstack/io.hpp"
#include "arstack/parallel.hpp"

namespace arstack {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void validate(const SynthSpec& spec) {
  if (spec.width == 0 || spec.height == 0) throw InvalidArgument("synth: empty raster");
  if (spec.n_layers < 2) throw InvalidArgument("synth: stack requires >= 2 layers");
  if (!(std::abs(spec.clutter_coef) < 1.0)) {
    throw InvalidArgument("synth: clutter_coef must lie in (-1, 1) for a stationary process");
  }
  if (!(spec.clutter_sigma > 0.0) || !std::isfinite(spec.clutter_sigma)) {
    throw InvalidArgument("synth: clutter_sigma must be > 0");
  }
  if (spec.scene_mean.width() != spec.width || spec.scene_mean.height() != spec.height) {
    throw InvalidArgument("synth: scene_mean must be " + std::to_string(spec.width) + "x" +
                          std::to_string(spec.height));
  }
  for (const auto& t : spec.targets) {
    if (t.layer >= spec.n_layers) {
      throw InvalidArgument("synth: target layer " + std::to_string(t.layer) + " out of range");
    }
    if (!(t.x >= 0.0 && t.y >= 0.0 && t.x <= static_cast<double>(spec.width - 1) &&
          t.y <= static_cast<double>(spec.height - 1))) {
      throw InvalidArgument("synth: target site outside the raster");
    }
    if (!(t.radius_px >= 0.0) || !std::isfinite(t.amplitude)) {
      throw InvalidArgument("synth: target radius must be >= 0 and amplitude finite");
    }
  }
}

}  // namespace

std::string synth_layer_label(std::size_t index) { return "layer_" + std::to_string(index); }

SynthScene generate(const SynthSpec& spec, unsigned threads) {
  validate(spec);
  const std::size_t w = spec.width, h = spec.height, n = spec.n_layers;
  const double a = spec.clutter_coef;
  const double sigma = spec.clutter_sigma;
  const double stationary_sd = sigma / std::sqrt(1.0 - a * a);

  std::vector<std::vector<float>> layers(n, std::vector<float>(w * h));
  parallel_for(h, threads, [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t y = row_begin; y < row_end; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const std::size_t idx = y * w + x;
        std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(idx)));
        std::normal_distribution<double> innovation(0.0, sigma);
        std::normal_distribution<double> initial(0.0, stationary_sd);
        const double background = spec.scene_mean.pixels()[idx];

        double value = initial(rng);
        layers[0][idx] = static_cast<float>(background + value);
        for (std::size_t k = 1; k < n; ++k) {
          value = -a * value + innovation(rng);
          layers[k][idx] = static_cast<float>(background + value);
        }
      }
    }
  });

  for (const auto& t : spec.targets) {
    const auto r = static_cast<std::ptrdiff_t>(std::ceil(t.radius_px));
    const auto cx = static_cast<std::ptrdiff_t>(std::lround(t.x));
    const auto cy = static_cast<std::ptrdiff_t>(std::lround(t.y));
    for (std::ptrdiff_t y = cy - r; y <= cy + r; ++y) {
      for (std::ptrdiff_t x = cx - r; x <= cx + r; ++x) {
        if (x < 0 || y < 0 || x >= static_cast<std::ptrdiff_t>(w) ||
            y >= static_cast<std::ptrdiff_t>(h)) {
          continue;
        }
        const double dx = static_cast<double>(x) - t.x, dy = static_cast<double>(y) - t.y;
        if (dx * dx + dy * dy > t.radius_px * t.radius_px) continue;
        auto& px = layers[t.layer][static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)];
        px = static_cast<float>(static_cast<double>(px) + t.amplitude);
      }
    }
  }

  std::vector<Raster> rasters;
  std::vector<std::string> labels;
  rasters.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    rasters.emplace_back(w, h, spec.scene_mean.pixel_area_m2(), std::move(layers[k]));
    labels.push_back(synth_layer_label(k));
  }

  std::vector<GroundTruth> truths;
  for (std::size_t k = 0; k < n; ++k) {
    GroundTruth truth{labels[k], {}};
    for (const auto& t : spec.targets) {
      if (t.layer == k) truth.targets.push_back(TargetPosition{t.x, t.y});
    }
    if (!truth.targets.empty()) truths.push_back(std::move(truth));
  }
  return SynthScene{ImageStack(std::move(rasters), std::move(labels)), std::move(truths)};
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": invalid JSON: " + e.what());
  }
  try {
    SynthSpec spec;
    spec.width = j.at("width").get<std::size_t>();
    spec.height = j.at("height").get<std::size_t>();
    spec.n_layers = j.at("n_layers").get<std::size_t>();
    spec.clutter_coef = j.at("clutter_coef").get<double>();
    spec.clutter_sigma = j.at("clutter_sigma").get<double>();
    spec.seed = j.value("seed", std::uint64_t{0});
    const double area = j.value("pixel_area_m2", 1.0);

    const auto& mean = j.at("scene_mean");
    if (mean.is_number()) {
      spec.scene_mean = Raster(spec.width, spec.height, area, mean.get<float>());
    } else {
      std::filesystem::path raster = mean.at("path").get<std::string>();
      if (raster.is_relative()) raster = path.parent_path() / raster;
      spec.scene_mean = read_raw_raster(raster, spec.width, spec.height, area);
    }

    for (const auto& t : j.value("targets", json::array())) {
      spec.targets.push_back(SynthTarget{t.at("layer").get<std::size_t>(), t.at("x").get<double>(),
                                         t.at("y").get<double>(), t.at("amplitude").get<double>(),
                                         t.value("radius_px", 1.0)});
    }
    return spec;
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": malformed synth spec: " + e.what());
  }
}

SynthSpec reference_scene_spec(std::uint64_t seed) {
  SynthSpec spec;
  spec.width = 100;
  spec.height = 100;
  spec.n_layers = 8;
  spec.clutter_coef = -0.5;
  spec.clutter_sigma = 1.0;
  // 600 m^2 pixels give each layer the 6 km^2 footprint of a full scene.
  spec.scene_mean = Raster(spec.width, spec.height, 600.0, 10.0f);
  spec.seed = seed;
  for (int row = 0; row < 5; ++row) {
    for (int col = 0; col < 5; ++col) {
      spec.targets.push_back(SynthTarget{7, 10.0 + 20.0 * col, 10.0 + 20.0 * row, 8.0, 1.5});
    }
  }
  return spec;
}

}  // namespace arstack
