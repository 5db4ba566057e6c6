#include "arstack/estimate.hpp"

#include <cmath>
#include <vector>

#include "arstack/errors.hpp"
#include "arstack/parallel.hpp"
#include "arstack/timeseries.hpp"

namespace arstack {

GroundEstimate estimate_ground(const ImageStack& stack, int order, int horizon,
                               unsigned threads) {
  if (order < 1 || static_cast<std::size_t>(order) >= stack.size()) {
    throw InvalidArgument("AR order must satisfy 1 <= p < N (p=" + std::to_string(order) +
                          ", N=" + std::to_string(stack.size()) + ")");
  }
  if (horizon < 1) throw InvalidArgument("forecast horizon must be >= 1");

  const std::size_t width = stack.width();
  const std::size_t height = stack.height();
  GroundEstimate out{Raster(width, height, stack.pixel_area_m2()),
                     Raster(width, height, stack.pixel_area_m2()), order, horizon};

  parallel_for(height, threads, [&](std::size_t row_begin, std::size_t row_end) {
    std::vector<double> series;
    for (std::size_t y = row_begin; y < row_end; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        stack.gather(x, y, series);
        const ArModel m = fit_yule_walker(series, order);
        out.forecast.at(x, y) = static_cast<float>(forecast(m, series, horizon));

        double magnitude;
        if (order == 1) {
          magnitude = std::abs(m.coefficients[0]);
        } else {
          double ss = 0.0;
          for (double a : m.coefficients) ss += a * a;
          magnitude = std::sqrt(ss);
        }
        out.coef_magnitude.at(x, y) = static_cast<float>(magnitude);
      }
    }
  });
  return out;
}

Raster difference_image(const Raster& surveillance, const Raster& forecast) {
  if (surveillance.width() != forecast.width() || surveillance.height() != forecast.height()) {
    throw InvalidArgument("difference_image: surveillance is " +
                          std::to_string(surveillance.width()) + "x" +
                          std::to_string(surveillance.height()) + ", ground estimate is " +
                          std::to_string(forecast.width()) + "x" +
                          std::to_string(forecast.height()));
  }
  Raster out(surveillance.width(), surveillance.height(), surveillance.pixel_area_m2());
  const auto s = surveillance.pixels();
  const auto f = forecast.pixels();
  auto d = out.pixels();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = s[i] - f[i];
  return out;
}

Raster difference_image(const Raster& surveillance, const GroundEstimate& ground) {
  return difference_image(surveillance, ground.forecast);
}

}  // namespace arstack
