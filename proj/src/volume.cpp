#include "lungkit/volume.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lungkit {

Volume3D::Volume3D(Geometry geometry)
    : geometry_(geometry), values_(geometry.voxel_count(), 0.0f) {}

Volume3D::Volume3D(Geometry geometry, std::vector<float> values)
    : geometry_(geometry), values_(std::move(values)) {
  if (values_.size() != geometry_.voxel_count())
    throw Error(ErrorCode::SizeMismatch, "volume data length does not match grid dimensions");
  if (!std::all_of(values_.begin(), values_.end(), [](float v) { return std::isfinite(v); }))
    throw Error(ErrorCode::InvalidArgument, "volume contains non-finite values");
}

Mask3D::Mask3D(Geometry geometry) : geometry_(geometry), bits_(geometry.voxel_count(), 0) {}

Mask3D::Mask3D(Geometry geometry, std::vector<std::uint8_t> bits)
    : geometry_(geometry), bits_(std::move(bits)) {
  if (bits_.size() != geometry_.voxel_count())
    throw Error(ErrorCode::SizeMismatch, "mask data length does not match grid dimensions");
  if (!std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b <= 1; }))
    throw Error(ErrorCode::InvalidArgument, "mask elements must be 0 or 1");
}

std::size_t Mask3D::count() const noexcept {
  return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0});
}

}  // namespace lungkit
