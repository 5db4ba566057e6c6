#pragma once

#include "arstack/raster.hpp"
#include "arstack/stack.hpp"

namespace arstack {

/// Per-pixel AR forecast of the stack: the predicted change-free scene.
struct GroundEstimate {
  Raster forecast;
  /// |a[1]| for order 1, Euclidean norm of the coefficient vector otherwise.
  Raster coef_magnitude;
  int order = 1;
  int horizon = 1;
};

/// Fits an AR(order) model to every pixel series and forecasts `horizon`
/// steps ahead.  Output is bit-identical for any thread count.
GroundEstimate estimate_ground(const ImageStack& stack, int order = 1, int horizon = 1,
                               unsigned threads = 0);

/// surveillance - forecast, pixelwise.
Raster difference_image(const Raster& surveillance, const Raster& forecast);
Raster difference_image(const Raster& surveillance, const GroundEstimate& ground);

}  // namespace arstack
