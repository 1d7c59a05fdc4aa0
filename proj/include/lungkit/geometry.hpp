#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace lungkit {

struct Index3 {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;

  friend bool operator==(const Index3&, const Index3&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

enum class Connectivity { Face6, Vertex26 };

/// Neighbour offsets for the given connectivity, in a fixed order
/// (z-major, then y, then x, each from -1 to +1, centre excluded).
std::span<const Index3> neighbor_offsets(Connectivity c);

/// Grid extent plus physical placement. Spacing and origin are in millimetres.
class Geometry {
 public:
  Geometry() = default;
  Geometry(Index3 dims, Vec3 spacing = {1.0, 1.0, 1.0}, Vec3 origin = {});

  const Index3& dims() const noexcept { return dims_; }
  const Vec3& spacing() const noexcept { return spacing_; }
  const Vec3& origin() const noexcept { return origin_; }

  std::size_t voxel_count() const noexcept {
    return static_cast<std::size_t>(dims_.x * dims_.y * dims_.z);
  }

  std::size_t linear(const Index3& i) const noexcept {
    return static_cast<std::size_t>(i.x + dims_.x * (i.y + dims_.y * i.z));
  }

  Index3 index(std::size_t linear_index) const noexcept {
    const auto l = static_cast<std::int64_t>(linear_index);
    const std::int64_t xy = dims_.x * dims_.y;
    return {l % dims_.x, (l % xy) / dims_.x, l / xy};
  }

  bool contains(const Index3& i) const noexcept {
    return i.x >= 0 && i.y >= 0 && i.z >= 0 && i.x < dims_.x && i.y < dims_.y &&
           i.z < dims_.z;
  }

  /// Voxel centre in physical coordinates: index * spacing + origin.
  Vec3 to_physical(const Index3& i) const noexcept {
    return {static_cast<double>(i.x) * spacing_.x + origin_.x,
            static_cast<double>(i.y) * spacing_.y + origin_.y,
            static_cast<double>(i.z) * spacing_.z + origin_.z};
  }

  /// Grids are compatible iff dims and spacing match exactly; origin is ignored.
  bool compatible_with(const Geometry& other) const noexcept {
    return dims_ == other.dims_ && spacing_ == other.spacing_;
  }

  friend bool operator==(const Geometry&, const Geometry&) = default;

 private:
  Index3 dims_{1, 1, 1};
  Vec3 spacing_{1.0, 1.0, 1.0};
  Vec3 origin_{};
};

/// Throws GeometryMismatch naming `what` when the grids are incompatible.
void require_compatible(const Geometry& a, const Geometry& b, const char* what);

}  // namespace lungkit
