#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "arstack/metrics.hpp"
#include "arstack/raster.hpp"
#include "arstack/stack.hpp"

namespace arstack {

/// A disc of constant added amplitude present in one layer only.
struct SynthTarget {
  std::size_t layer = 0;
  double x = 0.0;
  double y = 0.0;
  double amplitude = 0.0;
  double radius_px = 1.0;
};

struct SynthSpec {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t n_layers = 0;
  /// True AR(1) coefficient a in y[n] = -a y[n-1] + u[n]; |a| < 1.
  double clutter_coef = 0.0;
  /// Standard deviation of the Gaussian innovation u[n].
  double clutter_sigma = 1.0;
  /// Static background added to every layer; must be width x height.
  Raster scene_mean;
  std::vector<SynthTarget> targets;
  std::uint64_t seed = 0;
};

struct SynthScene {
  ImageStack stack;
  /// One entry per layer that carries targets, in layer order.
  std::vector<GroundTruth> truths;
};

/// Seeded per pixel, so the output does not depend on `threads`.
SynthScene generate(const SynthSpec& spec, unsigned threads = 0);

/// Layer labels used by generate(): "layer_0", "layer_1", ...
std::string synth_layer_label(std::size_t index);

/// Reads a JSON spec.  `scene_mean` is either a number (uniform background)
/// or an object {"path": ..., } naming a raw float32 raster of the spec's
/// dimensions, resolved relative to the spec file.
SynthSpec load_synth_spec(const std::filesystem::path& path);

/// The 100x100x8 scene: AR(1) clutter a=-0.5, sigma=1 over a uniform
/// background of 10, and 25 targets of amplitude 8 and radius 1.5 px (a
/// 3x3 footprint) on a 20 px grid in the last layer.  Pixels are 600 m^2 so
/// each layer covers 6 km^2.
SynthSpec reference_scene_spec(std::uint64_t seed = 20190417);

}  // namespace arstack
