#include "lungkit/seg_metrics.hpp"

#include <cmath>

#include "lungkit/kdtree.hpp"
#include "lungkit/lesion_synth.hpp"

namespace lungkit {

namespace {

struct OverlapCounts {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t both = 0;
};

OverlapCounts overlap(const Mask3D& a, const Mask3D& b, const char* what) {
  require_compatible(a.geometry(), b.geometry(), what);
  const auto x = a.bits();
  const auto y = b.bits();
  OverlapCounts c;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c.a += x[i];
    c.b += y[i];
    c.both += x[i] & y[i];
  }
  if (c.a == 0 && c.b == 0) throw Error(ErrorCode::BothEmpty, std::string(what) + ": both masks are empty");
  return c;
}

double dice_of(const OverlapCounts& c) {
  return 2.0 * static_cast<double>(c.both) / static_cast<double>(c.a + c.b);
}

double jaccard_of(const OverlapCounts& c) {
  return static_cast<double>(c.both) / static_cast<double>(c.a + c.b - c.both);
}

double mean_nearest(const std::vector<Vec3>& from, const KdTree& to) {
  double sum = 0.0;
  for (const Vec3& p : from) sum += std::sqrt(to.nearest_squared(p));
  return sum / static_cast<double>(from.size());
}

}  // namespace

double dice(const Mask3D& a, const Mask3D& b) { return dice_of(overlap(a, b, "dice")); }

double jaccard(const Mask3D& a, const Mask3D& b) { return jaccard_of(overlap(a, b, "jaccard")); }

SurfacePointSet surface_points(const Mask3D& mask, Connectivity connectivity) {
  SurfacePointSet s;
  s.source_voxels = boundary_voxels(mask, connectivity);
  s.points.reserve(s.source_voxels.size());
  for (const Index3& v : s.source_voxels) s.points.push_back(mask.geometry().to_physical(v));
  return s;
}

double asd(const Mask3D& a, const Mask3D& b, Connectivity connectivity) {
  require_compatible(a.geometry(), b.geometry(), "asd");
  const SurfacePointSet sa = surface_points(a, connectivity);
  const SurfacePointSet sb = surface_points(b, connectivity);
  if (sa.points.empty() || sb.points.empty()) throw Error(ErrorCode::EmptyMask, "asd: one mask is empty");
  const KdTree ta(sa.points);
  const KdTree tb(sb.points);
  return 0.5 * (mean_nearest(sa.points, tb) + mean_nearest(sb.points, ta));
}

SegMetrics evaluate(const Mask3D& a, const Mask3D& b, Connectivity connectivity) {
  const OverlapCounts c = overlap(a, b, "evaluate");
  if (c.a == 0 || c.b == 0) throw Error(ErrorCode::EmptyMask, "evaluate: one mask is empty");
  SegMetrics m;
  m.dsc = dice_of(c);
  m.ji = jaccard_of(c);
  m.asd_mm = asd(a, b, connectivity);
  m.n_a = c.a;
  m.n_b = c.b;
  return m;
}

}  // namespace lungkit
