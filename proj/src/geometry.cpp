#include "lungkit/geometry.hpp"

#include <sstream>
#include <vector>

#include "lungkit/error.hpp"

namespace lungkit {

namespace {

std::vector<Index3> make_offsets(bool faces_only) {
  std::vector<Index3> out;
  for (std::int64_t dz = -1; dz <= 1; ++dz)
    for (std::int64_t dy = -1; dy <= 1; ++dy)
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        const int nonzero = (dx != 0) + (dy != 0) + (dz != 0);
        if (nonzero == 0) continue;
        if (faces_only && nonzero != 1) continue;
        out.push_back({dx, dy, dz});
      }
  return out;
}

const std::vector<Index3> kFace6 = make_offsets(true);
const std::vector<Index3> kVertex26 = make_offsets(false);

std::string describe(const Geometry& g) {
  std::ostringstream os;
  os << g.dims().x << "x" << g.dims().y << "x" << g.dims().z << " @ " << g.spacing().x << ","
     << g.spacing().y << "," << g.spacing().z << " mm";
  return os.str();
}

}  // namespace

std::span<const Index3> neighbor_offsets(Connectivity c) {
  return c == Connectivity::Face6 ? std::span<const Index3>(kFace6)
                                  : std::span<const Index3>(kVertex26);
}

Geometry::Geometry(Index3 dims, Vec3 spacing, Vec3 origin)
    : dims_(dims), spacing_(spacing), origin_(origin) {
  if (dims.x < 1 || dims.y < 1 || dims.z < 1)
    throw Error(ErrorCode::InvalidArgument, "grid dimensions must be >= 1");
  if (!(spacing.x > 0.0 && spacing.y > 0.0 && spacing.z > 0.0))
    throw Error(ErrorCode::InvalidArgument, "voxel spacing must be > 0");
}

void require_compatible(const Geometry& a, const Geometry& b, const char* what) {
  if (!a.compatible_with(b))
    throw Error(ErrorCode::GeometryMismatch,
                std::string(what) + ": grids differ (" + describe(a) + " vs " + describe(b) + ")");
}

}  // namespace lungkit
