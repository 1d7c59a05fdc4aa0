#pragma once

#include <cstdint>
#include <utility>

#include "lungkit/volume.hpp"

namespace lungkit {

enum class LungShape { EllipsoidPair, Box };

/// Synthetic chest: Gaussian air inside a lung region, constant wall outside.
struct PhantomSpec {
  Index3 dims{128, 128, 128};
  Vec3 spacing{1.0, 1.0, 1.0};
  LungShape lung_shape = LungShape::Box;
  double air_mean = -900.0;
  double air_sd = 20.0;
  double wall_hu = 0.0;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Region occupied by the lung for `spec` (no intensities).
///
/// Box: the central half of the grid along every axis, i.e. indices
/// [d/4, d/4 + d/2) per axis. EllipsoidPair: two ellipsoids side by side along
/// x, each with semi-axes (0.2 dx, 0.3 dy, 0.35 dz), centred at x = 0.28 dx and
/// 0.72 dx. Both shapes stay clear of the outer voxel layer.
Mask3D phantom_lung(const PhantomSpec& spec);

/// CT plus exact lung mask. Lung voxels are air_mean + air_sd * N(0, 1) drawn
/// in ascending linear index from CounterRng(rng_seed); other voxels hold wall_hu.
std::pair<Volume3D, Mask3D> make_phantom(const PhantomSpec& spec);

}  // namespace lungkit
