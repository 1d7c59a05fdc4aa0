#pragma once

#include <cstdint>
#include <vector>

#include "lungkit/volume.hpp"

namespace lungkit {

enum class BoolOp { And, Or, AndNot, Xor };

Mask3D boolean_op(const Mask3D& a, const Mask3D& b, BoolOp op);

/// Lesion segmentation from the three model masks:
///   M_s = M_lung and not M_healthy and not M_air   (voxelwise, no post-processing)
Mask3D combine_masks(const Mask3D& lung, const Mask3D& healthy, const Mask3D& air);

struct LabelMap {
  Geometry geometry;
  std::vector<std::uint32_t> labels;  // 0 = background
  std::uint32_t component_count = 0;
};

/// Components are numbered 1..n in order of their smallest linear index.
LabelMap connected_components(const Mask3D& mask, Connectivity connectivity);

}  // namespace lungkit
