#include "lungkit/phantom.hpp"

#include <cmath>

#include "lungkit/rng.hpp"

namespace lungkit {

void PhantomSpec::validate() const {
  if (!(air_sd > 0.0) || !std::isfinite(air_sd)) throw Error(ErrorCode::InvalidArgument, "air_sd must be > 0");
  const std::int64_t min_dim = lung_shape == LungShape::Box ? 4 : 8;
  if (dims.x < min_dim || dims.y < min_dim || dims.z < min_dim)
    throw Error(ErrorCode::InvalidArgument,
                "phantom dims must be >= " + std::to_string(min_dim) + " along every axis");
  Geometry(dims, spacing);  // validates spacing
}

Mask3D phantom_lung(const PhantomSpec& spec) {
  spec.validate();
  const Geometry g(spec.dims, spec.spacing);
  const Index3 d = spec.dims;
  Mask3D lung(g);

  if (spec.lung_shape == LungShape::Box) {
    const Index3 lo{d.x / 4, d.y / 4, d.z / 4};
    const Index3 hi{lo.x + d.x / 2, lo.y + d.y / 2, lo.z + d.z / 2};
    for (std::int64_t z = lo.z; z < hi.z; ++z)
      for (std::int64_t y = lo.y; y < hi.y; ++y)
        for (std::int64_t x = lo.x; x < hi.x; ++x) lung.set(Index3{x, y, z});
    return lung;
  }

  const double ax = 0.2 * static_cast<double>(d.x), ay = 0.3 * static_cast<double>(d.y),
               az = 0.35 * static_cast<double>(d.z);
  const double cy = 0.5 * static_cast<double>(d.y), cz = 0.5 * static_cast<double>(d.z);
  for (double cx : {0.28 * static_cast<double>(d.x), 0.72 * static_cast<double>(d.x)}) {
    for (std::int64_t z = 1; z + 1 < d.z; ++z)
      for (std::int64_t y = 1; y + 1 < d.y; ++y)
        for (std::int64_t x = 1; x + 1 < d.x; ++x) {
          const double u = (static_cast<double>(x) + 0.5 - cx) / ax;
          const double v = (static_cast<double>(y) + 0.5 - cy) / ay;
          const double w = (static_cast<double>(z) + 0.5 - cz) / az;
          if (u * u + v * v + w * w <= 1.0) lung.set(Index3{x, y, z});
        }
  }
  return lung;
}

std::pair<Volume3D, Mask3D> make_phantom(const PhantomSpec& spec) {
  Mask3D lung = phantom_lung(spec);
  Volume3D ct(lung.geometry());
  CounterRng rng(spec.rng_seed);
  for (std::size_t i = 0; i < ct.size(); ++i)
    ct[i] = lung[i] ? static_cast<float>(spec.air_mean + spec.air_sd * rng.standard_normal())
                    : static_cast<float>(spec.wall_hu);
  return {std::move(ct), std::move(lung)};
}

}  // namespace lungkit
