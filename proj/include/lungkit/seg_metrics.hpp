#pragma once

#include <cstdint>
#include <vector>

#include "lungkit/volume.hpp"

namespace lungkit {

struct SurfacePointSet {
  std::vector<Vec3> points;          // millimetres
  std::vector<Index3> source_voxels;
};

struct SegMetrics {
  double dsc = 0.0;
  double ji = 0.0;
  double asd_mm = 0.0;
  std::uint64_t n_a = 0;
  std::uint64_t n_b = 0;
};

/// 2|A and B| / (|A| + |B|). Throws GeometryMismatch, BothEmpty.
double dice(const Mask3D& a, const Mask3D& b);

/// |A and B| / |A or B|. Throws GeometryMismatch, BothEmpty.
double jaccard(const Mask3D& a, const Mask3D& b);

/// Boundary voxel centres (see boundary_voxels) in physical coordinates.
SurfacePointSet surface_points(const Mask3D& mask,
                               Connectivity connectivity = Connectivity::Face6);

/// Symmetric average surface distance in mm: the mean of the two directed
/// mean nearest-surface distances. Nearest neighbours are exact (k-d tree).
/// Throws GeometryMismatch, EmptyMask.
double asd(const Mask3D& a, const Mask3D& b, Connectivity connectivity = Connectivity::Face6);

/// All three metrics plus voxel counts. Requires both masks non-empty.
SegMetrics evaluate(const Mask3D& a, const Mask3D& b,
                    Connectivity connectivity = Connectivity::Face6);

}  // namespace lungkit
